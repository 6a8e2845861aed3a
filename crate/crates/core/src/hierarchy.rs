//! Hamiltonians, Lax flows and their consistency identities, plus a fixed-step
//! RK4 integrator for float states.

use std::fmt;

use crate::brackets::CoordIndex;
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::pair::PairElement;
use crate::reduction::{reduced_bracket, reduced_tensor_with, restrict_to_u_dual, Boundary};
use crate::scalar::Scalar;
use crate::state::{coordinate_differential, LaxState};
use crate::tensors::TensorId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    T,
    TBar,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::T => "t",
            Direction::TBar => "tbar",
        }
    }
}

/// The flow `t_q` or `t̄_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FlowSpec {
    pub direction: Direction,
    pub q: u32,
}

impl FlowSpec {
    pub fn new(direction: Direction, q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::Invalid("flows are indexed by q >= 1".into()));
        }
        Ok(Self { direction, q })
    }

    pub fn t(q: u32) -> Result<Self> {
        Self::new(Direction::T, q)
    }

    pub fn tbar(q: u32) -> Result<Self> {
        Self::new(Direction::TBar, q)
    }
}

impl fmt::Display for FlowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.direction.label(), self.q)
    }
}

impl std::str::FromStr for FlowSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (direction, rest) = if let Some(r) = s.strip_prefix("tbar") {
            (Direction::TBar, r)
        } else if let Some(r) = s.strip_prefix('t') {
            (Direction::T, r)
        } else {
            return Err(Error::Invalid(format!("flow '{s}' should look like t2 or tbar1")));
        };
        let q = rest
            .parse()
            .map_err(|_| Error::Invalid(format!("flow '{s}' has no valid index")))?;
        Self::new(direction, q)
    }
}

/// `h_p = tr L^{p+1}/(p+1)` or `h̄_p = tr L̄^{p+1}/(p+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HamiltonianId {
    pub direction: Direction,
    pub p: u32,
}

impl HamiltonianId {
    pub fn h(p: u32) -> Self {
        Self {
            direction: Direction::T,
            p,
        }
    }

    pub fn hbar(p: u32) -> Self {
        Self {
            direction: Direction::TBar,
            p,
        }
    }

    fn lower(self, by: u32) -> Option<Self> {
        self.p.checked_sub(by).map(|p| Self { p, ..self })
    }
}

impl fmt::Display for HamiltonianId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.direction {
            Direction::T => write!(f, "h{}", self.p),
            Direction::TBar => write!(f, "hbar{}", self.p),
        }
    }
}

impl std::str::FromStr for HamiltonianId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (direction, rest) = if let Some(r) = s.strip_prefix("hbar") {
            (Direction::TBar, r)
        } else if let Some(r) = s.strip_prefix('h') {
            (Direction::T, r)
        } else {
            return Err(Error::Invalid(format!("Hamiltonian '{s}' should look like h2 or hbar1")));
        };
        let p = rest
            .parse()
            .map_err(|_| Error::Invalid(format!("Hamiltonian '{s}' has no valid index")))?;
        Ok(Self { direction, p })
    }
}

fn operator_of<S: Scalar>(point: &PairElement<S>, direction: Direction) -> &DiffOp<S> {
    match direction {
        Direction::T => &point.plus,
        Direction::TBar => &point.minus,
    }
}

fn hamiltonian_at<S: Scalar>(h: HamiltonianId, point: &PairElement<S>) -> Result<S> {
    let power = operator_of(point, h.direction).power(h.p + 1)?;
    Ok(power.trace()? / S::from_integer(i64::from(h.p) + 1))
}

pub fn hamiltonian<S: Scalar>(h: HamiltonianId, state: &LaxState<S>) -> Result<S> {
    hamiltonian_at(h, &state.lax_pair())
}

/// `dh_p = (Lᵖ, 0)`, `dh̄_p = (0, L̄ᵖ)`.
pub fn gradient<S: Scalar>(h: HamiltonianId, state: &LaxState<S>) -> Result<PairElement<S>> {
    let point = state.lax_pair();
    let n = state.period();
    Ok(match h.direction {
        Direction::T => PairElement {
            plus: point.plus.power(h.p)?,
            minus: DiffOp::zero(n),
        },
        Direction::TBar => PairElement {
            plus: DiffOp::zero(n),
            minus: point.minus.power(h.p)?,
        },
    })
}

/// The gradient restricted to `U*`; this is what the reduced tensors take.
pub fn reduced_gradient<S: Scalar>(h: HamiltonianId, state: &LaxState<S>) -> Result<PairElement<S>> {
    restrict_to_u_dual(&gradient(h, state)?)
}

/// `d/dε h(state + ε·direction)` at `ε = 0`, exactly: the Hamiltonian is a
/// polynomial of degree `p + 1` in `ε`, so its derivative is recovered from
/// the values at `ε = 0, 1, …, p + 1`.
pub fn directional_derivative<S: Scalar>(h: HamiltonianId, state: &LaxState<S>, direction: &LaxState<S>) -> Result<S> {
    let d = i64::from(h.p) + 1;
    let mut total = S::zero();
    let mut harmonic = S::zero();
    let mut binom = S::one();
    for k in 1..=d {
        binom = binom * S::from_integer(d - k + 1) / S::from_integer(k);
        let sign = if k % 2 == 1 { S::one() } else { -S::one() };
        let moved = state.axpy(&S::from_integer(k), direction)?;
        total += sign * binom.clone() / S::from_integer(k) * hamiltonian_at(h, &moved.lax_pair_exact())?;
        harmonic += S::one() / S::from_integer(k);
    }
    Ok(total - harmonic * hamiltonian_at(h, &state.lax_pair_exact())?)
}

/// A tangent vector in coordinate form, as a pair `(δL, δL̄)`.
pub fn tangent_pair<S: Scalar>(direction: &LaxState<S>) -> PairElement<S> {
    let mut pair = direction.lax_pair_exact();
    pair.plus = pair.plus.le(0).expect("exact operator");
    pair
}

/// The operator `(Lᑫ)₊` or `(L̄ᑫ)₋` generating a flow.
fn generator<S: Scalar>(flow: FlowSpec, point: &PairElement<S>) -> Result<DiffOp<S>> {
    match flow.direction {
        Direction::T => point.plus.power(flow.q)?.plus(),
        Direction::TBar => point.minus.power(flow.q)?.minus(),
    }
}

/// In float mode the components off the affine space are cancellations
/// between products of `q + 1` coefficients, so roundoff scales with
/// `|L|^(q+1)`. Non-finite values are left for the integrator to reject.
fn ensure_tangent<S: Scalar>(v: &PairElement<S>, flow: FlowSpec, point: &PairElement<S>) -> Result<()> {
    let above = v.plus.ge(1)?;
    let below = v.minus.le(-2)?;
    let tol = if S::EXACT {
        0.0
    } else {
        1e-9 * (1.0 + point.max_abs()).powi(flow.q as i32 + 1)
    };
    let offending = above
        .terms()
        .chain(below.terms())
        .find(|(_, f)| !f.values().iter().all(|x| x.is_negligible(tol) || !x.to_f64().is_finite()));
    match offending {
        Some((d, _)) => Err(Error::TangencyViolation(format!("{flow} has a component at degree {d}"))),
        None => Ok(()),
    }
}

fn flow_at<S: Scalar>(flow: FlowSpec, point: &PairElement<S>) -> Result<PairElement<S>> {
    let b = generator(flow, point)?;
    let v = PairElement {
        plus: b.commutator(&point.plus)?,
        minus: b.commutator(&point.minus)?,
    };
    ensure_tangent(&v, flow, point)?;
    Ok(PairElement {
        plus: v.plus.le(0)?,
        minus: v.minus.ge(-1)?,
    })
}

/// `(∂L, ∂L̄)` along a flow: `([(Lᑫ)₊, L], [(Lᑫ)₊, L̄])` for `t_q` and
/// `([(L̄ᑫ)₋, L], [(L̄ᑫ)₋, L̄])` for `t̄_q`, known as far as the stored depths
/// allow.
pub fn lax_rhs<S: Scalar>(flow: FlowSpec, state: &LaxState<S>) -> Result<PairElement<S>> {
    flow_at(flow, &state.lax_pair())
}

/// The same flow with the component on the operator that generates it
/// computed from the complementary projection: `-[(Lᑫ)₋, L]` for `t_q`,
/// `-[(L̄ᑫ)₊, L̄]` for `t̄_q`.
pub fn lax_rhs_complement<S: Scalar>(flow: FlowSpec, state: &LaxState<S>) -> Result<PairElement<S>> {
    let point = state.lax_pair();
    let mut v = lax_rhs(flow, state)?;
    match flow.direction {
        Direction::T => {
            let rest = point.plus.power(flow.q)?.minus()?;
            v.plus = (-&rest.commutator(&point.plus)?).le(0)?;
        }
        Direction::TBar => {
            let rest = point.minus.power(flow.q)?.plus()?;
            v.minus = (-&rest.commutator(&point.minus)?).ge(-1)?;
        }
    }
    Ok(v)
}

/// Coordinate velocity of a flow with every unstored coordinate held at
/// zero. This closes the system at the stored depths and is what the
/// integrator advances.
pub fn velocity<S: Scalar>(flow: FlowSpec, state: &LaxState<S>) -> Result<LaxState<S>> {
    let v = flow_at(flow, &state.lax_pair_exact())?;
    state.tangent_coordinates(&v, false)
}

/// `∂(Xᑫ) = Σ X^a (∂X) X^{q-1-a}`.
fn power_derivative<S: Scalar>(x: &DiffOp<S>, dx: &DiffOp<S>, q: u32) -> Result<DiffOp<S>> {
    let mut total = DiffOp::zero(x.period());
    for a in 0..q {
        let term = x.power(a)?.mul(dx)?.mul(&x.power(q - 1 - a)?)?;
        total = total.checked_add(&term)?;
    }
    Ok(total)
}

/// `∂_along` of the generator of `flow`, from the Lax equations.
fn generator_derivative<S: Scalar>(flow: FlowSpec, along: FlowSpec, state: &LaxState<S>) -> Result<DiffOp<S>> {
    let point = state.lax_pair();
    let dv = lax_rhs(along, state)?;
    match flow.direction {
        Direction::T => power_derivative(&point.plus, &dv.plus, flow.q)?.plus(),
        Direction::TBar => power_derivative(&point.minus, &dv.minus, flow.q)?.minus(),
    }
}

/// Which zero-curvature equation a residual belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZsKind {
    /// `∂_{t_p}(Lᑫ)₊ - ∂_{t_q}(Lᵖ)₊ + [(Lᑫ)₊, (Lᵖ)₊]`
    Pp,
    /// `∂_{t̄_p}(L̄ᑫ)₋ - ∂_{t̄_q}(L̄ᵖ)₋ + [(L̄ᑫ)₋, (L̄ᵖ)₋]`
    BarBar,
    /// `∂_{t̄_p}(Lᑫ)₊ - ∂_{t_q}(L̄ᵖ)₋ + [(Lᑫ)₊, (L̄ᵖ)₋]`
    Mixed,
}

/// Left side of a zero-curvature equation, with the time derivatives taken
/// from [`lax_rhs`]. Zero wherever it is known.
pub fn zs_residual<S: Scalar>(p: u32, q: u32, kind: ZsKind, state: &LaxState<S>) -> Result<DiffOp<S>> {
    let point = state.lax_pair();
    let (fp, fq) = match kind {
        ZsKind::Pp => (FlowSpec::t(p)?, FlowSpec::t(q)?),
        ZsKind::BarBar => (FlowSpec::tbar(p)?, FlowSpec::tbar(q)?),
        ZsKind::Mixed => (FlowSpec::tbar(p)?, FlowSpec::t(q)?),
    };
    // first: the generator indexed by q, differentiated along p
    let (first, second) = match kind {
        ZsKind::Pp | ZsKind::BarBar => (FlowSpec { q, ..fp }, FlowSpec { q: p, ..fq }),
        ZsKind::Mixed => (fq, fp),
    };
    let lhs = generator_derivative(first, fp, state)?;
    let rhs = generator_derivative(second, fq, state)?;
    let bracket = generator(first, &point)?.commutator(&generator(second, &point)?)?;
    (&lhs - &rhs).checked_add(&bracket)
}

/// `∂_{g} ∂_{f} (L, L̄)`, computed by differentiating the Lax equation of
/// `f` along `g`. Flows commute, so this is symmetric in `f`, `g`.
pub fn second_derivative<S: Scalar>(f: FlowSpec, g: FlowSpec, state: &LaxState<S>) -> Result<PairElement<S>> {
    let point = state.lax_pair();
    let dg = lax_rhs(g, state)?;
    let b = generator(f, &point)?;
    let db = generator_derivative(f, g, state)?;
    Ok(PairElement {
        plus: db.commutator(&point.plus)?.checked_add(&b.commutator(&dg.plus)?)?.le(0)?,
        minus: db.commutator(&point.minus)?.checked_add(&b.commutator(&dg.minus)?)?.ge(-1)?,
    })
}

/// `{a, H}_k = (da, P_k^{red} dH)`.
pub fn coordinate_hamiltonian_bracket<S: Scalar>(
    k: TensorId,
    a: &CoordIndex,
    h: HamiltonianId,
    state: &LaxState<S>,
    boundary: Boundary,
) -> Result<S> {
    let da = coordinate_differential(state.period(), a.family, a.index, a.site);
    reduced_bracket(k, state, &da, &reduced_gradient(h, state)?, boundary)
}

/// `P_k^{red} dH`, the Hamiltonian vector field of `H` in the `k`-th structure.
pub fn hamiltonian_vector<S: Scalar>(
    k: TensorId,
    h: HamiltonianId,
    state: &LaxState<S>,
    boundary: Boundary,
) -> Result<PairElement<S>> {
    reduced_tensor_with(k, state, &reduced_gradient(h, state)?, boundary)
}

/// Residuals of the recursion `{a, h_p}₁ = {a, h_{p-1}}₂ = {a, h_{p-2}}₃`:
/// the first entry is `{a, h_p}₁ - {a, h_{p-1}}₂`, the second (for `p >= 2`)
/// `{a, h_{p-1}}₂ - {a, h_{p-2}}₃`.
pub fn recursion_residual<S: Scalar>(
    h: HamiltonianId,
    a: &CoordIndex,
    state: &LaxState<S>,
    boundary: Boundary,
) -> Result<Vec<S>> {
    let one_less = h
        .lower(1)
        .ok_or_else(|| Error::Invalid("the recursion starts at p = 1".into()))?;
    let b1 = coordinate_hamiltonian_bracket(TensorId::P1, a, h, state, boundary)?;
    let b2 = coordinate_hamiltonian_bracket(TensorId::P2, a, one_less, state, boundary)?;
    let mut out = vec![b1 - b2.clone()];
    if let Some(two_less) = h.lower(2) {
        let b3 = coordinate_hamiltonian_bracket(TensorId::P3, a, two_less, state, boundary)?;
        out.push(b2 - b3);
    }
    Ok(out)
}

/// `{H, K}_k` on the reduced space.
pub fn hamiltonian_bracket<S: Scalar>(
    k: TensorId,
    h: HamiltonianId,
    g: HamiltonianId,
    state: &LaxState<S>,
    boundary: Boundary,
) -> Result<S> {
    reduced_bracket(k, state, &reduced_gradient(h, state)?, &reduced_gradient(g, state)?, boundary)
}

/// Every stored coordinate at every site.
pub fn window_coordinates<S: Scalar>(state: &LaxState<S>) -> Vec<CoordIndex> {
    let mut out = Vec::new();
    for (family, index) in state.coordinates() {
        for site in 0..state.period() as i64 {
            out.push(CoordIndex { family, index, site });
        }
    }
    out
}

mod integrate;

pub use integrate::{integrate, toda_equation_check, Snapshot, TodaCheck, Trajectory};

#[cfg(test)]
mod tests;
