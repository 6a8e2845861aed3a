//! Dirac reduction of the three tensors to the affine space of Lax pairs
//! `(Λ, 0) + U`, with
//!
//! * `U  = (𝒜⁺)_{≤0} ⊕ (𝒜⁻)_{≥-1}`, `V  = (𝒜⁺)_{≥1} ⊕ (𝒜⁻)_{≤-2}`,
//! * `U* = (𝒜⁺)_{≥0} ⊕ (𝒜⁻)_{≤1}`,  `V* = (𝒜⁺)_{≤-1} ⊕ (𝒜⁻)_{≥2}`.
//!
//! The closed forms below carry the correction terms of the reduction; the
//! [`oracle`] module recomputes the same reduction by finite linear algebra.

mod linalg;
pub mod oracle;

pub use oracle::{dirac_oracle_outcome, numeric_dirac_oracle, OracleOutcome};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::lattice::LatticeFunction;
use crate::pair::PairElement;
use crate::scalar::Scalar;
use crate::state::LaxState;
use crate::tensors::{apply_tensor, lax_commutator_sum, TensorId};

/// How `(Λ - 1)⁻¹` is applied inside the corrections.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// Periodic inverse normalised by `g(0) = 0`; a nonzero lattice sum is an
    /// error.
    Periodic,
    /// Summation starting from `g(cut) = 0` with no sum condition. Matches
    /// the infinite lattice when every input vanishes near `cut`.
    Open { cut: i64 },
    /// The local antiderivative of each residue of a commutator,
    /// `(Λ-1)⁻¹ res[A, B] = Σ_j Λ^{-j} 𝒟^j[a_j · Λ^j b_{-j}]`, which is what
    /// the infinite lattice gives for decaying data. Needs finite covectors.
    Local,
}

/// `φ` with `(Λ - 1)φ = res[A, B]`, built termwise from the local identity
/// `res[a Λ^j, b Λ^{-j}] = (1 - Λ^{-j})(a · Λ^j b)`.
fn local_residue_antiderivative<S: Scalar>(a: &DiffOp<S>, b: &DiffOp<S>) -> Result<LatticeFunction<S>> {
    if !b.is_exact() {
        return Err(Error::Invalid("local inverse needs a covector with finitely many terms".into()));
    }
    let mut phi = LatticeFunction::zeros(a.period());
    for (deg, bk) in b.terms() {
        let j = -deg;
        let aj = a.coefficient(j)?;
        let w = &aj * &bk.shift(j);
        phi = &phi + &w.summation(j).shift(-j);
    }
    Ok(phi)
}

/// `(Λ - 1)⁻¹ res([L, X] + [L̄, X̄])` under the chosen convention.
fn residue_antiderivative<S: Scalar>(
    point: &PairElement<S>,
    covector: &PairElement<S>,
    boundary: Boundary,
) -> Result<LatticeFunction<S>> {
    match boundary {
        Boundary::Local => Ok(&local_residue_antiderivative(&point.plus, &covector.plus)?
            + &local_residue_antiderivative(&point.minus, &covector.minus)?),
        Boundary::Periodic => commutator_residue(point, covector)?.invert_shift_minus_one(),
        Boundary::Open { cut } => Ok(commutator_residue(point, covector)?.invert_shift_minus_one_open(cut)),
    }
}

/// `ζ = (Λ + 1)(Λ - 1)⁻¹ res([L, X] + [L̄, X̄])`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaTerm<S> {
    pub zeta: LatticeFunction<S>,
}

/// `𝒵 = αΛ + β` together with the degree -1 coefficient `γ` of
/// `[L, X] + [L̄, X̄]` and `source = (Λ - 1)β`.
///
/// Only differences of `β` enter the reduced tensor, and these are taken
/// from `source` directly: `β(n+k) - β(n) = 𝒟^k[source](n)`. Under
/// [`Boundary::Periodic`] `β` is the periodic inverse; otherwise it is the
/// antiderivative vanishing at the cut (site 0 for [`Boundary::Local`]).
#[derive(Clone, Debug, PartialEq)]
pub struct CorrectionZ<S> {
    pub alpha: LatticeFunction<S>,
    pub beta: LatticeFunction<S>,
    pub gamma: LatticeFunction<S>,
    pub source: LatticeFunction<S>,
}

impl<S: Scalar> CorrectionZ<S> {
    /// The operator `αΛ + β`.
    pub fn operator(&self) -> DiffOp<S> {
        &DiffOp::monomial(self.alpha.clone(), 1) + &DiffOp::function(self.beta.clone())
    }

    /// `[A, 𝒵]`, with the `β` part read off `source`.
    pub fn commutator_from(&self, a: &DiffOp<S>) -> Result<DiffOp<S>> {
        let with_alpha = a.commutator(&DiffOp::monomial(self.alpha.clone(), 1))?;
        let terms: Vec<_> = a
            .terms()
            .map(|(k, ak)| (k, ak * &self.source.summation(k)))
            .collect();
        let mut with_beta = DiffOp::from_terms(a.period(), terms);
        if let Some(lo) = a.lower_accuracy() {
            with_beta = with_beta.with_lower_accuracy(lo);
        }
        if let Some(hi) = a.upper_accuracy() {
            with_beta = with_beta.with_upper_accuracy(hi);
        }
        with_alpha.checked_add(&with_beta)
    }
}

/// Projection onto `U` parallel to `V`.
pub fn project_u<S: Scalar>(v: &PairElement<S>) -> Result<PairElement<S>> {
    Ok(PairElement {
        plus: v.plus.le(0)?,
        minus: v.minus.ge(-1)?,
    })
}

/// Projection onto `V` parallel to `U`.
pub fn project_v<S: Scalar>(v: &PairElement<S>) -> Result<PairElement<S>> {
    Ok(PairElement {
        plus: v.plus.ge(1)?,
        minus: v.minus.le(-2)?,
    })
}

/// Representative in `U*` of a covector on `𝔄`: the part that pairs
/// non-trivially with `U`.
pub fn restrict_to_u_dual<S: Scalar>(covector: &PairElement<S>) -> Result<PairElement<S>> {
    Ok(PairElement {
        plus: covector.plus.ge(0)?,
        minus: covector.minus.le(1)?,
    })
}

fn ensure_in_u_dual<S: Scalar>(covector: &PairElement<S>) -> Result<()> {
    let plus_ok = covector.plus.lower_accuracy().is_none() && covector.plus.min_degree().is_none_or(|d| d >= 0);
    let minus_ok = covector.minus.upper_accuracy().is_none() && covector.minus.max_degree().is_none_or(|d| d <= 1);
    if plus_ok && minus_ok {
        Ok(())
    } else {
        Err(Error::Invalid("covector does not lie in U* = (A+)_{>=0} + (A-)_{<=1}".into()))
    }
}

fn ensure_v_vanishes<S: Scalar>(v: &PairElement<S>) -> Result<()> {
    let vpart = project_v(v)?;
    if let Some(d) = vpart.plus.terms().map(|(d, _)| d).next() {
        return Err(Error::NonVanishingVComponent { degree: d });
    }
    if let Some(d) = vpart.minus.terms().map(|(d, _)| d).next() {
        return Err(Error::NonVanishingVComponent { degree: d });
    }
    Ok(())
}

/// `res([L, X] + [L̄, X̄])`, the residue every correction is built from.
fn commutator_residue<S: Scalar>(point: &PairElement<S>, covector: &PairElement<S>) -> Result<LatticeFunction<S>> {
    let (lx, lbxb) = lax_commutator_sum(point, covector)?;
    Ok(&lx.residue()? + &lbxb.residue()?)
}

/// First reduced tensor: the restriction of `P₁`. Its `V` component vanishes
/// identically on the affine space; a nonzero one is reported as an error.
pub fn reduced_p1<S: Scalar>(state: &LaxState<S>, covector: &PairElement<S>) -> Result<PairElement<S>> {
    ensure_in_u_dual(covector)?;
    let full = apply_tensor(TensorId::P1, &state.lax_pair(), covector)?;
    ensure_v_vanishes(&full)?;
    project_u(&full)
}

pub fn compute_zeta<S: Scalar>(
    state: &LaxState<S>,
    covector: &PairElement<S>,
    boundary: Boundary,
) -> Result<ZetaTerm<S>> {
    let g = residue_antiderivative(&state.lax_pair(), covector, boundary)?;
    Ok(ZetaTerm {
        zeta: &g.shift(1) + &g,
    })
}

/// Second reduced tensor: `P₂` plus the correction `½([L, ζ], [L̄, ζ])`.
pub fn reduced_p2<S: Scalar>(state: &LaxState<S>, covector: &PairElement<S>) -> Result<PairElement<S>> {
    reduced_p2_with(state, covector, Boundary::Periodic)
}

pub fn reduced_p2_with<S: Scalar>(
    state: &LaxState<S>,
    covector: &PairElement<S>,
    boundary: Boundary,
) -> Result<PairElement<S>> {
    ensure_in_u_dual(covector)?;
    let point = state.lax_pair();
    let zeta = DiffOp::function(compute_zeta(state, covector, boundary)?.zeta);
    let half = S::from_ratio(1, 2);
    let correction = PairElement {
        plus: point.plus.commutator(&zeta)?.scale(&half),
        minus: point.minus.commutator(&zeta)?.scale(&half),
    };
    let full = &apply_tensor(TensorId::P2, &point, covector)? + &correction;
    ensure_v_vanishes(&full)?;
    project_u(&full)
}

/// `α = Λ(Λ-1)⁻¹ r`, `γΛ⁻¹ = ([L,X] + [L̄,X̄])₋₁`,
/// `β = (Λ-1)⁻¹[(Λu₀)(Λα) - u₀(Λ⁻¹α) + Λγ]`, with the inverses taken
/// according to `boundary`.
pub fn compute_correction_z<S: Scalar>(
    state: &LaxState<S>,
    covector: &PairElement<S>,
    boundary: Boundary,
) -> Result<CorrectionZ<S>> {
    let point = state.lax_pair();
    let alpha = residue_antiderivative(&point, covector, boundary)?.shift(1);
    let (lx, lbxb) = lax_commutator_sum(&point, covector)?;
    let gamma = &lx.coefficient(-1)? + &lbxb.coefficient(-1)?;
    let source = beta_source(state, &alpha, &gamma)?;
    let beta = match boundary {
        Boundary::Periodic => source.invert_shift_minus_one()?,
        Boundary::Open { cut } => source.invert_shift_minus_one_open(cut),
        Boundary::Local => source.invert_shift_minus_one_open(0),
    };
    Ok(CorrectionZ {
        alpha,
        beta,
        gamma,
        source,
    })
}

fn beta_source<S: Scalar>(
    state: &LaxState<S>,
    alpha: &LatticeFunction<S>,
    gamma: &LatticeFunction<S>,
) -> Result<LatticeFunction<S>> {
    let u0 = state.u(0)?;
    Ok(&(&(&u0.shift(1) * &alpha.shift(1)) - &(u0 * &alpha.shift(-1))) + &gamma.shift(1))
}

/// Lattice sum of the function `β` is obtained from. On a periodic lattice it
/// equals `tr((Λ + u₀)([L, X] + [L̄, X̄]))`, which need not vanish; when it
/// does not, the third tensor admits no reduction at this covector.
pub fn beta_obstruction<S: Scalar>(state: &LaxState<S>, covector: &PairElement<S>) -> Result<S> {
    let point = state.lax_pair();
    let r = commutator_residue(&point, covector)?;
    let alpha = r.invert_shift_minus_one()?.shift(1);
    let (lx, lbxb) = lax_commutator_sum(&point, covector)?;
    let gamma = &lx.coefficient(-1)? + &lbxb.coefficient(-1)?;
    Ok(beta_source(state, &alpha, &gamma)?.sum())
}

/// Third reduced tensor:
///
/// ```text
/// ( [L, (LXL - L̄X̄L̄)₋] - L C_{≤-2} L - (L C_{[-1,0]} L)_{≤0} + [L, 𝒵]_{≤0},
///   [L̄, (L̄X̄L̄ - LXL)₊] - L̄ C_{>0} L̄ + [L̄, 𝒵]_{≥-1} )
/// ```
///
/// with `C = [L, X] + [L̄, X̄]`.
///
/// On a periodic lattice the result is only determined up to a multiple of
/// the `t₁` vector field `([L₊, L], [L₊, L̄])`: shifting `α` by a constant `c`
/// adds `c` times it. [`Boundary::Periodic`] fixes `c` by `g(0) = 0` and
/// needs `tr((Λ + u₀)([L, X] + [L̄, X̄])) = 0`; [`Boundary::Local`] takes the
/// local antiderivative and is defined for every finite covector.
pub fn reduced_p3<S: Scalar>(state: &LaxState<S>, covector: &PairElement<S>) -> Result<PairElement<S>> {
    reduced_p3_with(state, covector, Boundary::Periodic)
}

pub fn reduced_p3_with<S: Scalar>(
    state: &LaxState<S>,
    covector: &PairElement<S>,
    boundary: Boundary,
) -> Result<PairElement<S>> {
    ensure_in_u_dual(covector)?;
    let point = state.lax_pair();
    let (l, lb) = (&point.plus, &point.minus);
    let (x, xb) = (&covector.plus, &covector.minus);
    let (lx, lbxb) = lax_commutator_sum(&point, covector)?;
    let c = &lx + &lbxb;
    let z = compute_correction_z(state, covector, boundary)?;

    let lxl = l.mul(x)?.mul(l)?;
    let lbxblb = lb.mul(xb)?.mul(lb)?;

    let plus = &(&(&l.commutator(&(&lxl - &lbxblb).minus()?)? - &l.mul(&c.le(-2)?)?.mul(l)?)
        - &l.mul(&c.project(Some(-1), Some(0))?)?.mul(l)?.le(0)?)
        + &z.commutator_from(l)?.le(0)?;
    let minus = &(&lb.commutator(&(&lbxblb - &lxl).plus()?)? - &lb.mul(&c.ge(1)?)?.mul(lb)?)
        + &z.commutator_from(lb)?.ge(-1)?;
    Ok(PairElement { plus, minus })
}

pub fn reduced_tensor<S: Scalar>(
    k: TensorId,
    state: &LaxState<S>,
    covector: &PairElement<S>,
) -> Result<PairElement<S>> {
    reduced_tensor_with(k, state, covector, Boundary::Periodic)
}

pub fn reduced_tensor_with<S: Scalar>(
    k: TensorId,
    state: &LaxState<S>,
    covector: &PairElement<S>,
    boundary: Boundary,
) -> Result<PairElement<S>> {
    match k {
        TensorId::P1 => reduced_p1(state, covector),
        TensorId::P2 => reduced_p2_with(state, covector, boundary),
        TensorId::P3 => reduced_p3_with(state, covector, boundary),
    }
}

/// `{f, g}_k^{red} = (dF, P_k^{red} dG)` for covectors already in `U*`.
pub fn reduced_bracket<S: Scalar>(
    k: TensorId,
    state: &LaxState<S>,
    df: &PairElement<S>,
    dg: &PairElement<S>,
    boundary: Boundary,
) -> Result<S> {
    df.inner(&reduced_tensor_with(k, state, dg, boundary)?)
}

/// Residuals of the push-forward identities under `(L, L̄) -> (L + t, L̄ + t)`:
///
/// * `P₁(L - t) - P₁(L)`
/// * `P₂(L - t) - P₂(L) + t P₁(L)`
/// * `P₃(L - t) - P₃(L) + 2t P₂(L) - t² P₁(L)`
pub fn shift_pushforward_residual<S: Scalar>(
    state: &LaxState<S>,
    t: &S,
    covector: &PairElement<S>,
    boundary: Boundary,
) -> Result<[PairElement<S>; 3]> {
    let moved = state.translated(&-t.clone());
    let p = |k, s: &LaxState<S>| reduced_tensor_with(k, s, covector, boundary);
    let (p1, p2, p3) = (p(TensorId::P1, state)?, p(TensorId::P2, state)?, p(TensorId::P3, state)?);
    let (q1, q2, q3) = (p(TensorId::P1, &moved)?, p(TensorId::P2, &moved)?, p(TensorId::P3, &moved)?);
    let two_t = t.clone() * S::from_integer(2);
    let t_sq = t.clone() * t.clone();
    let r1 = &q1 - &p1;
    let r2 = &(&q2 - &p2) + &p1.scale(t);
    let r3 = &(&(&q3 - &p3) + &p2.scale(&two_t)) - &p1.scale(&t_sq);
    Ok([r1, r2, r3])
}

#[cfg(test)]
mod tests;
