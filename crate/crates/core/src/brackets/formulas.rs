//! Term lists of the coordinate brackets `{u_i(n), u_j(m)}`,
//! `{u_i(n), ū_j(m)}` and `{ū_i(n), ū_j(m)}` for the three structures.
//! `(ū, u)` pairs follow from antisymmetry.

use super::{Anchor, BracketTerm, Factor};
use crate::state::Family;

use Anchor::{M, N};
use Family::{U, UBar};

fn u(index: i64, anchor: Anchor, offset: i64) -> Factor {
    Factor {
        family: U,
        index,
        anchor,
        offset,
    }
}

fn ub(index: i64, anchor: Anchor, offset: i64) -> Factor {
    Factor {
        family: UBar,
        index,
        anchor,
        offset,
    }
}

fn term(coeff: i64, factors: Vec<Factor>, delta: i64) -> BracketTerm {
    BracketTerm { coeff, factors, delta }
}

/// `1` for `i > 0`, `0` otherwise.
pub fn c_indicator(i: i64) -> i64 {
    i64::from(i > 0)
}

/// Expands `𝒟^k` acting on the `n` dependence of each term.
fn d(k: i64, terms: Vec<BracketTerm>) -> Vec<BracketTerm> {
    let (range, sign) = match k.cmp(&0) {
        std::cmp::Ordering::Greater => (0..k, 1),
        std::cmp::Ordering::Equal => return Vec::new(),
        std::cmp::Ordering::Less => (k..0, -1),
    };
    let mut out = Vec::new();
    for r in range {
        for t in &terms {
            let factors = t
                .factors
                .iter()
                .map(|f| match f.anchor {
                    N => Factor { offset: f.offset + r, ..*f },
                    M => *f,
                })
                .collect();
            out.push(term(sign * t.coeff, factors, t.delta + r));
        }
    }
    out
}

/// Multiplies every term by `coeff` and the given factors.
fn times(coeff: i64, factors: &[Factor], terms: Vec<BracketTerm>) -> Vec<BracketTerm> {
    terms
        .into_iter()
        .map(|mut t| {
            t.coeff *= coeff;
            t.factors.extend_from_slice(factors);
            t
        })
        .collect()
}

fn delta(s: i64) -> Vec<BracketTerm> {
    vec![term(1, Vec::new(), s)]
}

pub(super) fn first_uu(i: i64, j: i64) -> Vec<BracketTerm> {
    vec![
        term(1, vec![u(i + j, M, 0)], -j),
        term(-1, vec![u(i + j, N, 0)], i),
    ]
}

pub(super) fn first_uub(i: i64, j: i64) -> Vec<BracketTerm> {
    let c = c_indicator(j);
    vec![
        term(c, vec![u(i + j, M, 0)], -j),
        term(-c, vec![u(i + j, N, 0)], i),
        term(1, vec![ub(i + j, M, 0)], -j),
        term(-1, vec![ub(i + j, N, 0)], i),
    ]
}

pub(super) fn first_ubub(i: i64, j: i64) -> Vec<BracketTerm> {
    let c = 1 - c_indicator(i) - c_indicator(j);
    vec![
        term(c, vec![ub(i + j, N, 0)], i),
        term(-c, vec![ub(i + j, M, 0)], -j),
    ]
}

pub(super) fn second_uu(i: i64, j: i64) -> Vec<BracketTerm> {
    let mut out = Vec::new();
    for s in i..=0 {
        out.push(term(1, vec![u(i, N, 0), u(j, M, 0)], s - j));
        out.push(term(-1, vec![u(i, N, 0), u(j, M, 0)], s));
    }
    for s in 1..=1 - i {
        out.push(term(1, vec![u(i + s, N, 0), u(j - s, M, 0)], i - j + s));
        out.push(term(-1, vec![u(j - s, N, 0), u(i + s, M, 0)], -s));
    }
    out
}

pub(super) fn second_uub(i: i64, j: i64) -> Vec<BracketTerm> {
    let mut out = Vec::new();
    for s in i..=0 {
        out.push(term(1, vec![u(i, N, 0), ub(j, M, 0)], s - j));
        out.push(term(-1, vec![u(i, N, 0), ub(j, M, 0)], s));
    }
    for s in 1..=(1 + j).min(1 - i) {
        out.push(term(1, vec![u(i + s, N, -s), ub(j - s, M, 0)], -j));
        out.push(term(-1, vec![u(i + s, N, 0), ub(j - s, M, s)], i));
    }
    out
}

pub(super) fn second_ubub(i: i64, j: i64) -> Vec<BracketTerm> {
    let mut out = Vec::new();
    if j != -1 {
        for s in -j..=0 {
            out.push(term(1, vec![ub(i, N, 0), ub(j, M, 0)], s + i));
            out.push(term(-1, vec![ub(i, N, 0), ub(j, M, 0)], s));
        }
    }
    for s in 1..=i + 1 {
        out.push(term(1, vec![ub(i - s, N, 0), ub(j + s, M, 0)], i - j - s));
        out.push(term(-1, vec![ub(j + s, N, 0), ub(i - s, M, 0)], s));
    }
    out
}

/// `𝒟^a[u₀(n+1) 𝒟^b[δ(n-m+2)] - u₀(n) 𝒟^b[δ(n-m)]]`.
fn nested_u0(a: i64, b: i64) -> Vec<BracketTerm> {
    let mut inner = times(1, &[u(0, N, 1)], d(b, delta(2)));
    inner.extend(times(-1, &[u(0, N, 0)], d(b, delta(0))));
    d(a, inner)
}

pub(super) fn third_uu(i: i64, j: i64) -> Vec<BracketTerm> {
    let pair = |k: i64, s: i64, sign: i64| {
        let r = i + j - k - s;
        [
            term(sign, vec![u(s, N, 0), u(k, N, s), u(r, M, 0)], k + s - j),
            term(-sign, vec![u(r, N, 0), u(s, N, i - s), u(k, M, 0)], i - k - s),
        ]
    };
    let mut out = Vec::new();
    for s in i + 1..=1 {
        for k in i + j - 1 - s..=1 {
            out.extend(pair(k, s, 1));
        }
    }
    for k in i + j - 2..=j {
        for s in i + j - 1 - k..=1 {
            out.extend(pair(k, s, -1));
        }
    }
    out.extend(times(1, &[u(j, M, 0), u(i - 1, N, 1)], d(-j, delta(1))));
    out.extend(times(-1, &[u(j, M, 0), u(i - 1, N, 0)], d(-j, delta(i))));
    out.extend(times(1, &[u(i, N, 0), u(j - 1, M, 1)], d(i, delta(0))));
    out.extend(times(-1, &[u(i, N, 0), u(j - 1, M, 0)], d(i, delta(1 - j))));
    out.extend(times(-1, &[u(i, N, 0), u(j, M, 0)], nested_u0(i, -j)));
    out
}

/// With `printed`, the first sum runs over `k + 1 <= l` instead of
/// `i + 1 <= l`; that range misses terms and disagrees with the tensor.
pub(super) fn third_uub(i: i64, j: i64, printed: bool) -> Vec<BracketTerm> {
    let mut out = Vec::new();
    let first_sum: Vec<(i64, i64)> = if printed {
        (-1..=0)
            .flat_map(|k| (k + 1..=1).map(move |l| (k, l)))
            .filter(|&(k, l)| k + l <= i + j + 1)
            .collect()
    } else {
        (i + 1..=1)
            .flat_map(|l| (-1..=i + j + 1 - l).map(move |k| (k, l)))
            .collect()
    };
    for (k, l) in first_sum {
        let r = i + j - l - k;
        out.push(term(1, vec![ub(k, N, 0), u(l, N, i - l), ub(r, M, 0)], k - j));
        out.push(term(-1, vec![u(l, N, 0), ub(k, N, l), ub(r, M, 0)], l + k - j));
    }
    for l in -1..=j {
        for k in i + j - 1 - l..=1 {
            let r = j + i - k - l;
            out.push(term(-1, vec![u(k, N, 0), ub(l, N, k), u(r, M, 0)], k + l - j));
            out.push(term(1, vec![u(k, N, 0), u(r, N, k - j + l), ub(l, M, 0)], k - j));
        }
    }
    out.extend(times(-1, &[ub(j, M, 0), u(i - 1, N, 0)], d(-j, delta(i))));
    out.extend(times(1, &[ub(j, M, 0), u(i - 1, N, 1)], d(-j, delta(1))));
    out.extend(times(1, &[u(i, N, 0), ub(j - 1, M, 1)], d(i, delta(0))));
    out.extend(times(-1, &[u(i, N, 0), ub(j - 1, M, 0)], d(i, delta(1 - j))));
    out.extend(times(-1, &[u(i, N, 0), ub(j, M, 0)], nested_u0(i, -j)));
    out
}

pub(super) fn third_ubub(i: i64, j: i64) -> Vec<BracketTerm> {
    let mut out = Vec::new();
    for k in -1..=i {
        for s in -1..=i + j + 1 - k {
            let r = i + j - k - s;
            out.push(term(1, vec![ub(k, N, 0), ub(r, N, k), ub(s, M, 0)], i - s));
            out.push(term(-1, vec![ub(r, N, 0), ub(k, N, i - k), ub(s, M, 0)], i - k - s));
        }
    }
    for l in j + 1..=i + j + 2 {
        for s in -1..=i + j + 1 - l {
            let r = i + j - l - s;
            out.push(term(-1, vec![ub(r, N, 0), ub(l, N, r), ub(s, M, 0)], i - s));
            out.push(term(1, vec![ub(r, N, 0), ub(s, N, i - s), ub(l, M, 0)], i - l - s));
        }
    }
    out.extend(times(-1, &[ub(i, N, 0), ub(j, M, 0)], nested_u0(i, -j)));
    out.extend(times(-1, &[ub(j, M, 0), ub(i - 1, N, 0)], d(-j, delta(i))));
    out.extend(times(1, &[ub(j, M, 0), ub(i - 1, N, 1)], d(-j, delta(1))));
    out.extend(times(1, &[ub(i, N, 0), ub(j - 1, M, 1)], d(i, delta(0))));
    out.extend(times(-1, &[ub(i, N, 0), ub(j - 1, M, 0)], d(i, delta(1 - j))));
    out
}
