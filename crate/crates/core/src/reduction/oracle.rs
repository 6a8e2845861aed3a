//! Dirac reduction by brute force: extend the covector by an element of a
//! truncated `V*` so that the `V` component of the full tensor vanishes,
//! then keep the `U` component.
//!
//! Works at the point with all unstored coordinates set to zero, so every
//! operator involved is finite and exact.

use std::collections::BTreeMap;

use super::linalg::solve;
use super::{project_u, project_v};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::lattice::LatticeFunction;
use crate::pair::PairElement;
use crate::scalar::Scalar;
use crate::state::LaxState;
use crate::tensors::{apply_tensor, TensorId};

/// Coordinates of a `V` element: (component, degree, site).
type Row = (u8, i64, usize);

fn v_coordinates<S: Scalar>(v: &PairElement<S>, tol: f64) -> Result<BTreeMap<Row, S>> {
    Ok(coordinates(&project_v(v)?, tol))
}

fn coordinates<S: Scalar>(v: &PairElement<S>, tol: f64) -> BTreeMap<Row, S> {
    let mut out = BTreeMap::new();
    for (comp, op) in [(0u8, &v.plus), (1u8, &v.minus)] {
        for (d, f) in op.terms() {
            for (s, x) in f.values().iter().enumerate() {
                if !x.is_negligible(tol) {
                    out.insert((comp, d, s), x.clone());
                }
            }
        }
    }
    out
}

/// Basis of `V*` cut off at `|degree| <= width`: `δ_s Λ^d` in `𝒜⁺` for
/// `-width <= d <= -1` and in `𝒜⁻` for `2 <= d <= width`.
fn v_dual_basis<S: Scalar>(period: usize, width: i64) -> Vec<PairElement<S>> {
    let mut out = Vec::new();
    for d in (-width..=-1).rev() {
        for s in 0..period {
            let op = DiffOp::monomial(LatticeFunction::delta(period, s as i64), d);
            out.push(PairElement {
                plus: op,
                minus: DiffOp::zero(period),
            });
        }
    }
    for d in 2..=width {
        for s in 0..period {
            let op = DiffOp::monomial(LatticeFunction::delta(period, s as i64), d);
            out.push(PairElement {
                plus: DiffOp::zero(period),
                minus: op,
            });
        }
    }
    out
}

/// Outcome of the brute-force reduction when the kernel condition is not
/// enforced: one admissible value and the `U` images of the kernel of
/// `P_vv`, which span the ambiguity of that value.
#[derive(Clone, Debug)]
pub struct OracleOutcome<S> {
    pub value: PairElement<S>,
    pub ambiguity: Vec<PairElement<S>>,
}

impl<S: Scalar> OracleOutcome<S> {
    /// Whether `candidate - value` lies in the span of the ambiguity.
    pub fn agrees_modulo_ambiguity(&self, candidate: &PairElement<S>, tol: f64) -> bool {
        let diff = coordinates(&(candidate - &self.value), tol);
        if diff.is_empty() {
            return true;
        }
        let spans: Vec<BTreeMap<Row, S>> = self.ambiguity.iter().map(|a| coordinates(a, tol)).collect();
        let mut rows: Vec<Row> = diff.keys().copied().collect();
        for m in &spans {
            rows.extend(m.keys().copied());
        }
        rows.sort_unstable();
        rows.dedup();
        let matrix: Vec<Vec<S>> = rows
            .iter()
            .map(|r| spans.iter().map(|m| m.get(r).cloned().unwrap_or_else(S::zero)).collect())
            .collect();
        let rhs: Vec<S> = rows.iter().map(|r| diff.get(r).cloned().unwrap_or_else(S::zero)).collect();
        solve(&matrix, &rhs, spans.len(), tol).is_some()
    }
}

/// Brute-force reduction of `P_k` at a covector in `U*`, keeping the
/// ambiguity instead of rejecting it. `width` defaults to `2M + 4`.
///
/// Fails with `StarConditionViolated("image")` if no `V*` extension kills
/// the `V` component.
pub fn dirac_oracle_outcome<S: Scalar>(
    k: TensorId,
    state: &LaxState<S>,
    covector: &PairElement<S>,
    width: Option<i64>,
    tol: f64,
) -> Result<OracleOutcome<S>> {
    let period = state.period();
    let width = width.unwrap_or(2 * state.depth().max(state.depth_bar()) + 4);
    let point = state.lax_pair_exact();
    let basis = v_dual_basis::<S>(period, width);

    let base = apply_tensor(k, &point, covector)?;
    let images = basis
        .iter()
        .map(|e| apply_tensor(k, &point, e))
        .collect::<Result<Vec<_>>>()?;

    let base_v = v_coordinates(&base, tol)?;
    let image_v = images.iter().map(|p| v_coordinates(p, tol)).collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<Row> = base_v.keys().copied().collect();
    for m in &image_v {
        rows.extend(m.keys().copied());
    }
    rows.sort_unstable();
    rows.dedup();

    let cols = basis.len();
    let matrix: Vec<Vec<S>> = rows
        .iter()
        .map(|r| image_v.iter().map(|m| m.get(r).cloned().unwrap_or_else(S::zero)).collect())
        .collect();
    let rhs: Vec<S> = rows.iter().map(|r| base_v.get(r).cloned().unwrap_or_else(S::zero)).collect();

    let sol = solve(&matrix, &rhs, cols, tol).ok_or_else(|| Error::StarConditionViolated("image".into()))?;

    let image_u = images.iter().map(project_u).collect::<Result<Vec<_>>>()?;
    let combine = |coeffs: &[S]| -> PairElement<S> {
        let mut acc = PairElement::zero(period);
        for (c, img) in coeffs.iter().zip(&image_u) {
            if !c.is_zero() {
                acc = &acc + &img.scale(c);
            }
        }
        acc
    };
    let ambiguity = sol
        .kernel
        .iter()
        .map(|kv| combine(kv))
        .filter(|p| p.max_abs() > tol)
        .collect();
    Ok(OracleOutcome {
        value: &project_u(&base)? - &combine(&sol.particular),
        ambiguity,
    })
}

/// Reduced tensor `P_k` applied to a covector in `U*`, computed without any
/// closed-form correction. `width` defaults to `2M + 4`.
///
/// Fails with `StarConditionViolated("image")` if no `V*` extension kills
/// the `V` component, and `StarConditionViolated("kernel")` if the result
/// depends on the choice of extension.
pub fn numeric_dirac_oracle<S: Scalar>(
    k: TensorId,
    state: &LaxState<S>,
    covector: &PairElement<S>,
    width: Option<i64>,
    tol: f64,
) -> Result<PairElement<S>> {
    let out = dirac_oracle_outcome(k, state, covector, width, tol)?;
    if !out.ambiguity.is_empty() {
        return Err(Error::StarConditionViolated("kernel".into()));
    }
    Ok(out.value)
}
