//! Values computed outside this crate with a separate operator product over
//! Python fractions, frozen here.

use toda2d::hierarchy::{hamiltonian, velocity, FlowSpec, HamiltonianId};
use toda2d::scalar::parse_rational;
use toda2d::{Family, LatticeFunction, LaxState, Rational};

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn f(values: &[&str]) -> LatticeFunction<Rational> {
    LatticeFunction::new(values.iter().map(|s| q(s)).collect())
}

fn fixture() -> LaxState<Rational> {
    let mut s = LaxState::zero(5, 4, 1).unwrap();
    let u = [
        (0, ["1", "-2", "1/2", "3", "0"]),
        (-1, ["2", "1", "-1", "1/3", "1"]),
        (-2, ["0", "1", "2", "-1", "1/2"]),
        (-3, ["1", "0", "-1", "2", "1"]),
        (-4, ["-1/2", "1", "0", "1", "2"]),
    ];
    let ubar = [
        (-1, ["1", "2", "1/2", "1", "3"]),
        (0, ["2/3", "-1", "0", "1", "1"]),
        (1, ["1", "0", "2", "-1", "1"]),
    ];
    for (i, v) in u {
        s.set_field(Family::U, i, f(&v)).unwrap();
    }
    for (j, v) in ubar {
        s.set_field(Family::UBar, j, f(&v)).unwrap();
    }
    s
}

#[test]
fn hamiltonians() {
    let s = fixture();
    assert_eq!(hamiltonian(HamiltonianId::h(2), &s).unwrap(), q("127/8"));
    assert_eq!(hamiltonian(HamiltonianId::hbar(1), &s).unwrap(), q("67/18"));
}

#[test]
fn second_flow_velocities() {
    let v = velocity(FlowSpec::t(2).unwrap(), &fixture()).unwrap();
    assert_eq!(v.field(Family::U, 0).unwrap(), &f(&["-1", "1/2", "-11/6", "17/6", "-1/2"]));
    assert_eq!(v.field(Family::U, -1).unwrap(), &f(&["-1", "-2", "59/12", "31/12", "-121/12"]));
    assert_eq!(v.field(Family::U, -2).unwrap(), &f(&["-3", "5/2", "7/6", "-17/6", "77/24"]));
}

#[test]
fn first_bar_flow_moves_u0() {
    let v = velocity(FlowSpec::tbar(1).unwrap(), &fixture()).unwrap();
    assert_eq!(v.field(Family::U, 0).unwrap(), &f(&["-1", "3/2", "-1/2", "-2", "2"]));
}
