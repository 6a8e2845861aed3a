//! Jacobi identity for the coordinate brackets, by differentiating the
//! bracket polynomials symbolically.

use std::collections::BTreeMap;

use super::{bracket_terms, factor_site, delta_hits, CoordIndex};
use crate::error::Result;
use crate::scalar::Scalar;
use crate::state::{Family, LaxState};
use crate::tensors::TensorId;

/// A single structure or the pencil `{}₁ + λ{}₂ + μ{}₃`.
#[derive(Clone, Debug, PartialEq)]
pub enum BracketChoice<S> {
    Single(TensorId),
    Pencil { lambda: S, mu: S },
}

impl<S: Scalar> BracketChoice<S> {
    fn weights(&self) -> Vec<(TensorId, S)> {
        match self {
            BracketChoice::Single(k) => vec![(*k, S::one())],
            BracketChoice::Pencil { lambda, mu } => vec![
                (TensorId::P1, S::one()),
                (TensorId::P2, lambda.clone()),
                (TensorId::P3, mu.clone()),
            ],
        }
    }
}

/// Monomials in concrete coordinates (sites reduced mod N).
type Poly<S> = BTreeMap<Vec<CoordIndex>, S>;

fn bracket_poly<S: Scalar>(
    choice: &BracketChoice<S>,
    a: &CoordIndex,
    b: &CoordIndex,
    state: &LaxState<S>,
) -> Result<Poly<S>> {
    let n = state.period() as i64;
    let mut poly = Poly::new();
    for (k, w) in choice.weights() {
        if w.is_zero() {
            continue;
        }
        for t in bracket_terms(k, (a.family, a.index), (b.family, b.index))? {
            if !delta_hits(state.period(), a, b, t.delta) {
                continue;
            }
            let mut mono: Vec<CoordIndex> = t
                .factors
                .iter()
                .map(|f| CoordIndex {
                    family: f.family,
                    index: f.index,
                    site: factor_site(f, a, b).rem_euclid(n),
                })
                .collect();
            mono.sort();
            let entry = poly.entry(mono).or_insert_with(S::zero);
            *entry += w.clone() * S::from_integer(t.coeff);
        }
    }
    poly.retain(|_, c| !c.is_zero());
    Ok(poly)
}

fn value<S: Scalar>(x: &CoordIndex, state: &LaxState<S>) -> Result<S> {
    state.value(x.family, x.index, x.site)
}

/// `∂P/∂x` at the state, for every coordinate `x` occurring in `P`.
fn gradient<S: Scalar>(poly: &Poly<S>, state: &LaxState<S>) -> Result<BTreeMap<CoordIndex, S>> {
    let mut grad = BTreeMap::new();
    for (mono, c) in poly {
        for (pos, x) in mono.iter().enumerate() {
            let mut d = c.clone();
            for (q, y) in mono.iter().enumerate() {
                if q != pos {
                    d *= value(y, state)?;
                }
            }
            *grad.entry(*x).or_insert_with(S::zero) += d;
        }
    }
    Ok(grad)
}

fn evaluate_choice<S: Scalar>(
    choice: &BracketChoice<S>,
    a: &CoordIndex,
    b: &CoordIndex,
    state: &LaxState<S>,
) -> Result<S> {
    let mut total = S::zero();
    for (mono, c) in bracket_poly(choice, a, b, state)? {
        let mut v = c;
        for x in &mono {
            v *= value(x, state)?;
        }
        total += v;
    }
    Ok(total)
}

/// `Σ_cyc {{a, b}, c}` at the state. Zero for a Poisson bracket.
pub fn jacobiator<S: Scalar>(
    choice: &BracketChoice<S>,
    a: &CoordIndex,
    b: &CoordIndex,
    c: &CoordIndex,
    state: &LaxState<S>,
) -> Result<S> {
    let mut total = S::zero();
    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
        let grad = gradient(&bracket_poly(choice, x, y, state)?, state)?;
        for (w, dw) in grad {
            total += dw * evaluate_choice(choice, &w, z, state)?;
        }
    }
    Ok(total)
}

/// Whether the nested brackets of a triple stay within the stored depths:
/// `3·min(u index) - 6 >= -M` and `3·max(ū index) + 6 <= M̄`.
pub fn jacobi_admissible<S: Scalar>(triple: [&CoordIndex; 3], state: &LaxState<S>) -> bool {
    triple.iter().all(|x| match x.family {
        Family::U => 3 * x.index - 6 >= -state.depth(),
        Family::UBar => 3 * x.index + 6 <= state.depth_bar(),
    })
}
