use super::*;
use crate::lattice::LatticeFunction;
use crate::sample::Sampler;
use crate::scalar::{rat, Rational};
use crate::state::Family;

fn sample(seed: u64, n: usize, depth: i64, depth_bar: i64) -> LaxState<Rational> {
    Sampler::new(seed).state(n, depth, depth_bar)
}

#[test]
fn first_hamiltonians_in_coordinates() {
    let st = sample(1, 5, 4, 3);
    let u0 = st.u(0).unwrap();
    let um1 = st.u(-1).unwrap();
    let h1: Rational = (0..5)
        .map(|n| u0.at(n) * u0.at(n) / rat(2, 1) + um1.at(n))
        .fold(rat(0, 1), |a, b| a + b);
    assert_eq!(hamiltonian(HamiltonianId::h(0), &st).unwrap(), u0.sum());
    assert_eq!(hamiltonian(HamiltonianId::h(1), &st).unwrap(), h1);
    assert_eq!(hamiltonian(HamiltonianId::hbar(0), &st).unwrap(), st.ubar(0).unwrap().sum());
}

#[test]
fn gradients_match_directional_derivatives() {
    let st = sample(2, 5, 4, 3);
    for h in [
        HamiltonianId::h(0),
        HamiltonianId::h(1),
        HamiltonianId::h(2),
        HamiltonianId::hbar(1),
        HamiltonianId::hbar(2),
    ] {
        let grad = gradient(h, &st).unwrap();
        for (family, index) in st.coordinates() {
            if index < -2 || index > 2 {
                continue;
            }
            for site in 0..5 {
                let mut dir = LaxState::zero(5, 4, 3).unwrap();
                dir.set_field(family, index, LatticeFunction::delta(5, site)).unwrap();
                let exact = directional_derivative(h, &st, &dir).unwrap();
                let paired = grad.inner(&tangent_pair(&dir)).unwrap();
                assert_eq!(exact, paired, "{h} along {}{index}({site})", family.label());
            }
        }
    }
}

#[test]
fn t1_moves_u0_by_difference_of_u_minus_one() {
    let st = sample(3, 6, 3, 2);
    let v = lax_rhs(FlowSpec::t(1).unwrap(), &st).unwrap();
    let um1 = st.u(-1).unwrap();
    assert_eq!(v.plus.coefficient(0).unwrap(), &um1.shift(1) - um1);
}

#[test]
fn tbar1_moves_ubar_minus_one() {
    let st = sample(4, 6, 3, 2);
    let v = lax_rhs(FlowSpec::tbar(1).unwrap(), &st).unwrap();
    let ub = st.ubar(-1).unwrap();
    let ub0 = st.ubar(0).unwrap();
    assert_eq!(v.minus.coefficient(-1).unwrap(), ub * &(&ub0.shift(-1) - ub0));
}

#[test]
fn flows_vanish_at_bare_shift() {
    let st = LaxState::<Rational>::zero(5, 3, 2).unwrap();
    for flow in [FlowSpec::t(1), FlowSpec::t(3), FlowSpec::tbar(2)] {
        let v = lax_rhs(flow.unwrap(), &st).unwrap();
        assert!(v.plus.vanishes_where_known() && v.minus.vanishes_where_known());
    }
}

#[test]
fn both_projections_give_the_same_flow() {
    let st = sample(5, 5, 6, 5);
    for flow in ["t1", "t2", "t3", "tbar1", "tbar2", "tbar3"] {
        let flow: FlowSpec = flow.parse().unwrap();
        let a = lax_rhs(flow, &st).unwrap();
        let b = lax_rhs_complement(flow, &st).unwrap();
        assert!(a.agrees_with(&b), "{flow}");
    }
}

#[test]
fn zero_curvature_residuals_vanish() {
    let st = sample(6, 5, 7, 6);
    for (p, q) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        for kind in [ZsKind::Pp, ZsKind::BarBar, ZsKind::Mixed] {
            let r = zs_residual(p, q, kind, &st).unwrap();
            assert!(r.vanishes_where_known(), "{kind:?} p={p} q={q}");
        }
    }
}

#[test]
fn flows_commute() {
    let st = sample(7, 5, 7, 6);
    let flows: Vec<FlowSpec> = ["t1", "t2", "tbar1"].iter().map(|f| f.parse().unwrap()).collect();
    for f in &flows {
        for g in &flows {
            let fg = second_derivative(*f, *g, &st).unwrap();
            let gf = second_derivative(*g, *f, &st).unwrap();
            assert!(fg.agrees_with(&gf), "{f} {g}");
        }
    }
}

#[test]
fn flows_are_first_bracket_hamiltonian() {
    let st = sample(8, 5, 6, 5);
    for (flow, h) in [("t1", HamiltonianId::h(1)), ("t2", HamiltonianId::h(2)), ("tbar1", HamiltonianId::hbar(1))] {
        let v = lax_rhs(flow.parse().unwrap(), &st).unwrap();
        for a in window_coordinates(&st).into_iter().filter(|a| a.index.abs() <= 1) {
            let op = match a.family {
                Family::U => &v.plus,
                Family::UBar => &v.minus,
            };
            let lhs = op.coefficient(a.index).unwrap().at(a.site).clone();
            let rhs = coordinate_hamiltonian_bracket(TensorId::P1, &a, h, &st, Boundary::Periodic).unwrap();
            assert_eq!(lhs, rhs, "{flow} at {a}");
        }
    }
}

#[test]
fn recursion_with_local_inverse() {
    let st = sample(9, 5, 7, 6);
    for h in [HamiltonianId::h(1), HamiltonianId::h(2), HamiltonianId::hbar(2)] {
        for a in window_coordinates(&st).into_iter().filter(|a| a.index.abs() <= 1) {
            for r in recursion_residual(h, &a, &st, Boundary::Local).unwrap() {
                assert_eq!(r, rat(0, 1), "{h} at {a}");
            }
        }
    }
}

#[test]
fn h0_is_a_casimir_of_the_first_bracket() {
    let st = sample(10, 5, 4, 3);
    for a in window_coordinates(&st) {
        let v = coordinate_hamiltonian_bracket(TensorId::P1, &a, HamiltonianId::h(0), &st, Boundary::Periodic).unwrap();
        assert_eq!(v, rat(0, 1));
    }
}

#[test]
fn flow_index_parsing() {
    assert_eq!("tbar2".parse::<FlowSpec>().unwrap(), FlowSpec::tbar(2).unwrap());
    assert!("t0".parse::<FlowSpec>().is_err());
    assert!("x1".parse::<FlowSpec>().is_err());
    assert_eq!(FlowSpec::t(3).unwrap().to_string(), "t3");
}

#[test]
fn zero_data_is_a_fixed_point() {
    let st = LaxState::<f64>::zero(6, 3, 2).unwrap();
    let traj = integrate(&[(FlowSpec::t(1).unwrap(), 0.5, 0.1)], &st, &[HamiltonianId::h(1)], 1).unwrap();
    assert_eq!(traj.snapshots.len(), 6);
    assert_eq!(traj.last().state, st);
}

#[test]
fn zero_duration_returns_the_input() {
    let st = Sampler::new(11).state(5, 3, 2).convert(|x| x.to_f64());
    let traj = integrate(&[(FlowSpec::tbar(1).unwrap(), 0.0, 0.01)], &st, &[], 1).unwrap();
    assert_eq!(traj.snapshots.len(), 1);
    assert_eq!(traj.last().state, st);
}

#[test]
fn blow_up_is_rejected() {
    let mut st = LaxState::<f64>::zero(5, 2, 1).unwrap();
    st.set_field(Family::U, -1, LatticeFunction::new(vec![1e300, -1e300, 1e300, 0.0, 2e300])).unwrap();
    let err = integrate(&[(FlowSpec::t(2).unwrap(), 1.0, 0.5)], &st, &[], 1).unwrap_err();
    assert!(matches!(err, Error::StepRejected { .. }));
}

#[test]
fn bad_steps_are_config_errors() {
    let st = LaxState::<f64>::zero(5, 2, 1).unwrap();
    assert!(integrate(&[(FlowSpec::t(1).unwrap(), 1.0, 0.0)], &st, &[], 1).is_err());
    assert!(integrate(&[(FlowSpec::t(1).unwrap(), -1.0, 0.1)], &st, &[], 1).is_err());
}

#[test]
fn constant_profile_is_a_toda_fixed_point() {
    let base = LaxState::<f64>::zero(8, 3, 1).unwrap();
    let check = toda_equation_check(&[0.3; 8], &base, 1e-2).unwrap();
    assert!(check.expected.iter().all(|x| *x == 0.0));
    assert!(check.relative_residual < 1e-9);
}

#[test]
fn hamiltonian_labels() {
    assert_eq!("hbar2".parse::<HamiltonianId>().unwrap(), HamiltonianId::hbar(2));
    assert_eq!("h0".parse::<HamiltonianId>().unwrap().to_string(), "h0");
    assert!("g1".parse::<HamiltonianId>().is_err());
}
