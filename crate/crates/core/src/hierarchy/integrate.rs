use super::{hamiltonian_at, velocity, FlowSpec, HamiltonianId};
use crate::error::{Error, Result};
use crate::lattice::LatticeFunction;
use crate::state::LaxState;

/// A state along a trajectory, with the ledger Hamiltonians evaluated there.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    /// Total time elapsed over all legs.
    pub time: f64,
    /// The flow of the leg that produced this state; `None` for the start.
    pub flow: Option<FlowSpec>,
    pub state: LaxState<f64>,
    pub hamiltonians: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub ledger: Vec<HamiltonianId>,
    pub snapshots: Vec<Snapshot>,
}

impl Trajectory {
    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("a trajectory holds its initial state")
    }

    /// Largest `|h(t) - h(0)| / max(|h(0)|, 1e-300)` over the trajectory, per
    /// ledger entry.
    pub fn relative_drift(&self) -> Vec<f64> {
        let first = &self.snapshots[0].hamiltonians;
        (0..self.ledger.len())
            .map(|k| {
                let h0 = first[k];
                self.snapshots
                    .iter()
                    .map(|s| (s.hamiltonians[k] - h0).abs() / h0.abs().max(1e-300))
                    .fold(0.0, f64::max)
            })
            .collect()
    }
}

fn ledger_values(ledger: &[HamiltonianId], state: &LaxState<f64>) -> Result<Vec<f64>> {
    let point = state.lax_pair_exact();
    ledger.iter().map(|h| hamiltonian_at(*h, &point)).collect()
}

fn finite_velocity(flow: FlowSpec, y: &LaxState<f64>) -> Result<LaxState<f64>> {
    if !y.is_finite() {
        return Err(Error::StepRejected {
            time: f64::NAN,
            reason: "non-finite stage".into(),
        });
    }
    let v = velocity(flow, y)?;
    if !v.is_finite() {
        return Err(Error::StepRejected {
            time: f64::NAN,
            reason: "non-finite velocity".into(),
        });
    }
    Ok(v)
}

fn rk4_step(flow: FlowSpec, y: &LaxState<f64>, h: f64) -> Result<LaxState<f64>> {
    let k1 = finite_velocity(flow, y)?;
    let k2 = finite_velocity(flow, &y.axpy(&(h / 2.0), &k1)?)?;
    let k3 = finite_velocity(flow, &y.axpy(&(h / 2.0), &k2)?)?;
    let k4 = finite_velocity(flow, &y.axpy(&h, &k3)?)?;
    y.axpy(&(h / 6.0), &k1)?
        .axpy(&(h / 3.0), &k2)?
        .axpy(&(h / 3.0), &k3)?
        .axpy(&(h / 6.0), &k4)
}

fn step_count(duration: f64, step: f64) -> Result<usize> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::Invalid(format!("step must be positive, got {step}")));
    }
    if !(duration >= 0.0) || !duration.is_finite() {
        return Err(Error::Invalid(format!("duration must be non-negative, got {duration}")));
    }
    Ok((duration / step - 1e-9).ceil().max(0.0) as usize)
}

/// Classic fixed-step RK4 along each `(flow, duration, step)` leg in turn,
/// with unstored coordinates held at zero. The last step of a leg is
/// shortened to land on its duration. A snapshot is kept every `stride`
/// steps and at the end of each leg.
pub fn integrate(
    legs: &[(FlowSpec, f64, f64)],
    initial: &LaxState<f64>,
    ledger: &[HamiltonianId],
    stride: usize,
) -> Result<Trajectory> {
    let stride = stride.max(1);
    let mut state = initial.clone();
    let mut time = 0.0;
    let mut snapshots = vec![Snapshot {
        time,
        flow: None,
        state: state.clone(),
        hamiltonians: ledger_values(ledger, &state)?,
    }];
    for &(flow, duration, step) in legs {
        let steps = step_count(duration, step)?;
        let mut elapsed = 0.0;
        for s in 0..steps {
            let h = step.min(duration - elapsed);
            state = rk4_step(flow, &state, h).map_err(|e| match e {
                Error::StepRejected { reason, .. } => Error::StepRejected {
                    time: time + elapsed,
                    reason,
                },
                other => other,
            })?;
            elapsed += h;
            if !state.is_finite() {
                return Err(Error::StepRejected {
                    time: time + elapsed,
                    reason: "non-finite coordinate".into(),
                });
            }
            if (s + 1) % stride == 0 || s + 1 == steps {
                snapshots.push(Snapshot {
                    time: time + elapsed,
                    flow: Some(flow),
                    state: state.clone(),
                    hamiltonians: ledger_values(ledger, &state)?,
                });
            }
        }
        time += elapsed;
    }
    Ok(Trajectory {
        ledger: ledger.to_vec(),
        snapshots,
    })
}

/// State together with a potential `φ` satisfying `∂φ/∂t₁ = u₀` and
/// `∂φ/∂t̄₁ = -ū₀`. Along both flows `ū₋₁ e^{-(φ(n) - φ(n-1))}` is conserved.
#[derive(Clone)]
struct WithPotential {
    state: LaxState<f64>,
    phi: LatticeFunction<f64>,
}

fn potential_velocity(flow: FlowSpec, y: &WithPotential) -> Result<WithPotential> {
    let dphi = match flow.direction {
        super::Direction::T => y.state.u(0)?.clone(),
        super::Direction::TBar => -y.state.ubar(0)?,
    };
    Ok(WithPotential {
        state: velocity(flow, &y.state)?,
        phi: dphi,
    })
}

fn potential_axpy(y: &WithPotential, h: f64, d: &WithPotential) -> Result<WithPotential> {
    Ok(WithPotential {
        state: y.state.axpy(&h, &d.state)?,
        phi: &y.phi + &d.phi.scale(&h),
    })
}

fn potential_flow(flow: FlowSpec, y: &WithPotential, duration: f64, step: f64) -> Result<WithPotential> {
    let sign = if duration < 0.0 { -1.0 } else { 1.0 };
    let mut y = y.clone();
    let mut elapsed = 0.0;
    for _ in 0..step_count(duration.abs(), step)? {
        let h = sign * step.min(duration.abs() - elapsed);
        let k1 = potential_velocity(flow, &y)?;
        let k2 = potential_velocity(flow, &potential_axpy(&y, h / 2.0, &k1)?)?;
        let k3 = potential_velocity(flow, &potential_axpy(&y, h / 2.0, &k2)?)?;
        let k4 = potential_velocity(flow, &potential_axpy(&y, h, &k3)?)?;
        y = potential_axpy(&y, h / 6.0, &k1)?;
        y = potential_axpy(&y, h / 3.0, &k2)?;
        y = potential_axpy(&y, h / 3.0, &k3)?;
        y = potential_axpy(&y, h / 6.0, &k4)?;
        elapsed += h.abs();
        if !y.state.is_finite() || y.phi.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::StepRejected {
                time: sign * elapsed,
                reason: "non-finite coordinate".into(),
            });
        }
    }
    Ok(y)
}

/// Outcome of [`toda_equation_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct TodaCheck {
    /// Central-difference estimate of `∂²u/∂t̄₁∂t₁` at each site.
    pub mixed: Vec<f64>,
    /// `e^{u(n)-u(n-1)} - e^{u(n+1)-u(n)}` at each site.
    pub expected: Vec<f64>,
    /// `max |mixed - expected| / max |expected|`, or the absolute error when
    /// the right side vanishes identically.
    pub relative_residual: f64,
}

/// Checks `∂²u/∂t̄₁∂t₁ = e^{u(n)-u(n-1)} - e^{u(n+1)-u(n)}` for the profile
/// `u`, starting from `base` with `ū₋₁` replaced by `e^{u(n)-u(n-1)}`. The
/// mixed derivative is the four-point central difference with spacing
/// `step`, each corner reached by RK4 along `t₁` then `t̄₁` in steps of
/// `step`.
pub fn toda_equation_check(u: &[f64], base: &LaxState<f64>, step: f64) -> Result<TodaCheck> {
    let n = u.len();
    if base.period() != n {
        return Err(Error::PeriodMismatch {
            left: n,
            right: base.period(),
        });
    }
    let u_fn = LatticeFunction::new(u.to_vec());
    let mut state = base.clone();
    let gap = &u_fn - &u_fn.shift(-1);
    state.set_field(crate::state::Family::UBar, -1, gap.map(|x| x.exp()))?;
    let start = WithPotential { state, phi: u_fn };

    let t1 = FlowSpec::t(1)?;
    let tb1 = FlowSpec::tbar(1)?;
    let corner = |a: f64, b: f64| -> Result<LatticeFunction<f64>> {
        let y = potential_flow(t1, &start, a, step)?;
        Ok(potential_flow(tb1, &y, b, step)?.phi)
    };
    let pp = corner(step, step)?;
    let pm = corner(step, -step)?;
    let mp = corner(-step, step)?;
    let mm = corner(-step, -step)?;
    let denom = 4.0 * step * step;
    let mixed: Vec<f64> = (0..n as i64)
        .map(|s| (pp.at(s) - pm.at(s) - mp.at(s) + mm.at(s)) / denom)
        .collect();
    let expected: Vec<f64> = (0..n as i64)
        .map(|s| (u_at(u, s) - u_at(u, s - 1)).exp() - (u_at(u, s + 1) - u_at(u, s)).exp())
        .collect();
    let scale = expected.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let err = mixed
        .iter()
        .zip(&expected)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(TodaCheck {
        mixed,
        expected,
        relative_residual: if scale > 0.0 { err / scale } else { err },
    })
}

fn u_at(u: &[f64], s: i64) -> f64 {
    u[s.rem_euclid(u.len() as i64) as usize]
}
