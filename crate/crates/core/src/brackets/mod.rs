//! Explicit coordinate brackets of the three structures as symbolic term
//! lists, their evaluation, comparison with the tensor route, and the
//! Jacobi identity.

mod formulas;
mod jacobi;

use std::fmt;

use serde_json::{json, Value};

pub use formulas::c_indicator;
pub use jacobi::{jacobi_admissible, jacobiator, BracketChoice};

use crate::error::{Error, Result};
use crate::lattice::LatticeFunction;
use crate::reduction::{reduced_bracket, reduced_tensor_with, Boundary};
use crate::scalar::Scalar;
use crate::state::{coordinate_differential, Family, LaxState};
use crate::tensors::TensorId;

/// A coordinate functional `u_i(n)` or `ū_j(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordIndex {
    pub family: Family,
    pub index: i64,
    pub site: i64,
}

impl CoordIndex {
    pub fn u(index: i64, site: i64) -> Self {
        Self {
            family: Family::U,
            index,
            site,
        }
    }

    pub fn ubar(index: i64, site: i64) -> Self {
        Self {
            family: Family::UBar,
            index,
            site,
        }
    }

    fn check(&self) -> Result<()> {
        match self.family {
            Family::U if self.index > 1 => Err(Error::UnsupportedIndex(format!("u{}", self.index))),
            Family::UBar if self.index < -1 => Err(Error::UnsupportedIndex(format!("ubar{}", self.index))),
            _ => Ok(()),
        }
    }

    fn is_unit(&self) -> bool {
        self.family == Family::U && self.index == 1
    }
}

impl fmt::Display for CoordIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}({})", self.family.label(), self.index, self.site)
    }
}

/// Which site a factor is anchored to: the first argument's `n` or the
/// second argument's `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Anchor {
    N,
    M,
}

/// `u_index(anchor + offset)` or `ū_index(anchor + offset)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub family: Family,
    pub index: i64,
    pub anchor: Anchor,
    pub offset: i64,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let anchor = match self.anchor {
            Anchor::N => "n",
            Anchor::M => "m",
        };
        match self.offset.cmp(&0) {
            std::cmp::Ordering::Equal => write!(f, "{}{}({anchor})", self.family.label(), self.index),
            std::cmp::Ordering::Greater => {
                write!(f, "{}{}({anchor}+{})", self.family.label(), self.index, self.offset)
            }
            std::cmp::Ordering::Less => write!(f, "{}{}({anchor}{})", self.family.label(), self.index, self.offset),
        }
    }
}

/// `coeff · Π factors · δ(n - m + delta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTerm {
    pub coeff: i64,
    pub factors: Vec<Factor>,
    pub delta: i64,
}

impl BracketTerm {
    pub fn to_json(&self) -> Value {
        let mut coeff = vec![self.coeff.to_string()];
        coeff.extend(self.factors.iter().map(|f| f.to_string()));
        json!({ "coeff": coeff, "delta": self.delta })
    }
}

impl fmt::Display for BracketTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        for x in &self.factors {
            write!(f, "·{x}")?;
        }
        write!(f, "·δ(n-m{:+})", self.delta)
    }
}

/// Drops terms with a vanishing coordinate, removes `u₁ ≡ 1`, and merges
/// equal terms.
fn normalize(terms: Vec<BracketTerm>) -> Vec<BracketTerm> {
    let mut merged: std::collections::BTreeMap<(Vec<Factor>, i64), i64> = Default::default();
    for mut t in terms {
        let vanishes = t.factors.iter().any(|f| match f.family {
            Family::U => f.index > 1,
            Family::UBar => f.index < -1,
        });
        if vanishes || t.coeff == 0 {
            continue;
        }
        t.factors.retain(|f| !(f.family == Family::U && f.index == 1));
        t.factors.sort();
        *merged.entry((t.factors, t.delta)).or_insert(0) += t.coeff;
    }
    merged
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|((factors, delta), coeff)| BracketTerm { coeff, factors, delta })
        .collect()
}

/// Which summation range to use in the first sum of the third `(u, ū)`
/// bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transcription {
    /// `i + 1 <= l <= 1`. Agrees with the tensor route.
    Corrected,
    /// `k + 1 <= l <= 1`, as the formula is usually printed.
    Printed,
}

/// `{a(n), b(m)}_k` for coordinate families and indices, as a term list.
/// Brackets with the constant `u₁` are empty.
pub fn bracket_terms(k: TensorId, a: (Family, i64), b: (Family, i64)) -> Result<Vec<BracketTerm>> {
    bracket_terms_with(k, a, b, Transcription::Corrected)
}

pub fn bracket_terms_with(
    k: TensorId,
    a: (Family, i64),
    b: (Family, i64),
    transcription: Transcription,
) -> Result<Vec<BracketTerm>> {
    let (ca, cb) = (
        CoordIndex {
            family: a.0,
            index: a.1,
            site: 0,
        },
        CoordIndex {
            family: b.0,
            index: b.1,
            site: 0,
        },
    );
    ca.check()?;
    cb.check()?;
    if ca.is_unit() || cb.is_unit() {
        return Ok(Vec::new());
    }
    use formulas::*;
    use Family::{UBar, U};
    let (i, j) = (a.1, b.1);
    let raw = match (k, a.0, b.0) {
        (TensorId::P1, U, U) => first_uu(i, j),
        (TensorId::P1, U, UBar) => first_uub(i, j),
        (TensorId::P1, UBar, UBar) => first_ubub(i, j),
        (TensorId::P2, U, U) => second_uu(i, j),
        (TensorId::P2, U, UBar) => second_uub(i, j),
        (TensorId::P2, UBar, UBar) => second_ubub(i, j),
        (TensorId::P3, U, U) => third_uu(i, j),
        (TensorId::P3, U, UBar) => third_uub(i, j, transcription == Transcription::Printed),
        (TensorId::P3, UBar, UBar) => third_ubub(i, j),
        (_, UBar, U) => return Ok(swap_arguments(bracket_terms_with(k, b, a, transcription)?)),
    };
    Ok(normalize(raw))
}

/// Term list of `{b(m), a(n)}` rewritten as `-{a(n), b(m)}` in the
/// `(n, m)` convention.
fn swap_arguments(terms: Vec<BracketTerm>) -> Vec<BracketTerm> {
    let swapped = terms
        .into_iter()
        .map(|t| BracketTerm {
            coeff: -t.coeff,
            factors: t
                .factors
                .iter()
                .map(|f| Factor {
                    anchor: match f.anchor {
                        Anchor::N => Anchor::M,
                        Anchor::M => Anchor::N,
                    },
                    ..*f
                })
                .collect(),
            delta: -t.delta,
        })
        .collect();
    normalize(swapped)
}

pub fn terms_to_json(terms: &[BracketTerm]) -> Value {
    Value::Array(terms.iter().map(BracketTerm::to_json).collect())
}

/// `𝒟^k[f](n)`: `Σ_{r=0}^{k-1} f(n+r)` for `k > 0`, `0` for `k = 0`,
/// `-Σ_{r=k}^{-1} f(n+r)` for `k < 0`.
pub fn d_operator<S: Scalar>(k: i64, f: &LatticeFunction<S>, n: i64) -> S {
    f.summation(k).at(n).clone()
}

fn factor_site(f: &Factor, a: &CoordIndex, b: &CoordIndex) -> i64 {
    match f.anchor {
        Anchor::N => a.site + f.offset,
        Anchor::M => b.site + f.offset,
    }
}

fn delta_hits(period: usize, a: &CoordIndex, b: &CoordIndex, s: i64) -> bool {
    (a.site - b.site + s).rem_euclid(period as i64) == 0
}

/// The term list evaluated at concrete sites of a state. Fails with
/// `DepthExceeded` if any term needs a coordinate the state does not store.
pub fn evaluate_terms<S: Scalar>(
    terms: &[BracketTerm],
    a: &CoordIndex,
    b: &CoordIndex,
    state: &LaxState<S>,
) -> Result<S> {
    let mut total = S::zero();
    for t in terms {
        let mut value = S::from_integer(t.coeff);
        for f in &t.factors {
            value *= state.value(f.family, f.index, factor_site(f, a, b))?;
        }
        if delta_hits(state.period(), a, b, t.delta) {
            total += value;
        }
    }
    Ok(total)
}

pub fn evaluate_bracket<S: Scalar>(k: TensorId, a: &CoordIndex, b: &CoordIndex, state: &LaxState<S>) -> Result<S> {
    evaluate_bracket_with(k, a, b, state, Transcription::Corrected)
}

pub fn evaluate_bracket_with<S: Scalar>(
    k: TensorId,
    a: &CoordIndex,
    b: &CoordIndex,
    state: &LaxState<S>,
    transcription: Transcription,
) -> Result<S> {
    a.check()?;
    b.check()?;
    let terms = bracket_terms_with(k, (a.family, a.index), (b.family, b.index), transcription)?;
    evaluate_terms(&terms, a, b, state)
}

/// How the tensor side of a cross-check is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TensorRoute {
    /// Reduced tensors on the lattice of the state itself, periodic inverses.
    Periodic,
    /// Reduced tensors on the lattice of the state itself, local inverses.
    Local,
    /// The state repeated `copies` times, each image of the second
    /// argument evaluated with the open inverse cut halfway round the
    /// longer arc between the two sites. Reproduces the infinite lattice
    /// when the lattice is long compared with the reach of the brackets.
    Tiled { copies: usize },
}

impl TensorRoute {
    /// `Periodic` for the first two structures; the third needs the
    /// infinite-lattice inverse.
    pub fn default_for(k: TensorId) -> Self {
        match k {
            TensorId::P3 => TensorRoute::Local,
            _ => TensorRoute::Periodic,
        }
    }
}

/// Zero coordinates appended below the stored depth before the tensor
/// route runs, so the reduced tensors are known where the pairing reads them.
const TENSOR_PADDING: i64 = 8;

/// `(da, P_k^{red} db)` with the coordinate differentials of `a` and `b`.
pub fn tensor_bracket<S: Scalar>(
    k: TensorId,
    a: &CoordIndex,
    b: &CoordIndex,
    state: &LaxState<S>,
    route: TensorRoute,
) -> Result<S> {
    a.check()?;
    b.check()?;
    if a.is_unit() || b.is_unit() {
        return Ok(S::zero());
    }
    let padded = state.padded(state.depth() + TENSOR_PADDING, state.depth_bar() + TENSOR_PADDING);
    match route {
        TensorRoute::Periodic | TensorRoute::Local => {
            let n = state.period();
            let da = coordinate_differential(n, a.family, a.index, a.site);
            let db = coordinate_differential(n, b.family, b.index, b.site);
            let boundary = if route == TensorRoute::Local {
                Boundary::Local
            } else {
                Boundary::Periodic
            };
            reduced_bracket(k, &padded, &da, &db, boundary)
        }
        TensorRoute::Tiled { copies } => {
            let big = padded.tiled(copies);
            let len = big.period() as i64;
            let da = coordinate_differential(big.period(), a.family, a.index, a.site);
            let mut total = S::zero();
            for c in 0..copies as i64 {
                let site = b.site + c * state.period() as i64;
                let db = coordinate_differential(big.period(), b.family, b.index, site);
                let gap = (site - a.site).rem_euclid(len);
                let cut = if gap <= len - gap {
                    site + (len - gap) / 2
                } else {
                    a.site + gap / 2
                };
                total += reduced_bracket(k, &big, &da, &db, Boundary::Open { cut })?;
            }
            Ok(total)
        }
    }
}

/// Formula value minus tensor value; zero when the two routes agree.
pub fn crosscheck<S: Scalar>(k: TensorId, a: &CoordIndex, b: &CoordIndex, state: &LaxState<S>) -> Result<S> {
    crosscheck_with(k, a, b, state, Transcription::Corrected)
}

pub fn crosscheck_with<S: Scalar>(
    k: TensorId,
    a: &CoordIndex,
    b: &CoordIndex,
    state: &LaxState<S>,
    transcription: Transcription,
) -> Result<S> {
    let formula = evaluate_bracket_with(k, a, b, state, transcription)?;
    let tensor = tensor_bracket(k, a, b, state, TensorRoute::default_for(k))?;
    Ok(formula - tensor)
}

/// `crosscheck_with` for every `a` in `firsts` against one `b`, computing the
/// reduced tensor at `db` once.
pub fn crosscheck_column<S: Scalar>(
    k: TensorId,
    firsts: &[CoordIndex],
    b: &CoordIndex,
    state: &LaxState<S>,
    transcription: Transcription,
) -> Result<Vec<S>> {
    let route = TensorRoute::default_for(k);
    b.check()?;
    let padded = state.padded(state.depth() + TENSOR_PADDING, state.depth_bar() + TENSOR_PADDING);
    let n = state.period();
    let image = if b.is_unit() {
        None
    } else {
        let boundary = match route {
            TensorRoute::Local => Boundary::Local,
            _ => Boundary::Periodic,
        };
        let db = coordinate_differential(n, b.family, b.index, b.site);
        Some(reduced_tensor_with(k, &padded, &db, boundary)?)
    };
    firsts
        .iter()
        .map(|a| {
            a.check()?;
            let formula = evaluate_bracket_with(k, a, b, state, transcription)?;
            let tensor = match &image {
                Some(img) if !a.is_unit() => coordinate_differential(n, a.family, a.index, a.site).inner(img)?,
                _ => S::zero(),
            };
            Ok(formula - tensor)
        })
        .collect()
}
