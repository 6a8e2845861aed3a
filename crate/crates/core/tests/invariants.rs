use proptest::prelude::*;

use toda2d::hierarchy::{lax_rhs, FlowSpec};
use toda2d::io::{state_from_json, state_to_json};
use toda2d::pair::RMap;
use toda2d::{rat, DiffOp, LatticeFunction, LaxState, PairElement, Rational};

const N: usize = 5;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=9).prop_map(|(a, b)| rat(a, b))
}

fn lattice() -> impl Strategy<Value = LatticeFunction<Rational>> {
    prop::collection::vec(rational(), N).prop_map(LatticeFunction::new)
}

/// A finite operator with degrees in `-2..=2`.
fn operator() -> impl Strategy<Value = DiffOp<Rational>> {
    prop::collection::vec((-2i64..=2, lattice()), 0..4).prop_map(|terms| DiffOp::from_terms(N, terms))
}

fn pair() -> impl Strategy<Value = PairElement<Rational>> {
    (operator(), operator()).prop_map(|(plus, minus)| PairElement { plus, minus })
}

fn state() -> impl Strategy<Value = LaxState<Rational>> {
    prop::collection::vec(lattice(), 5).prop_map(|fields| {
        let mut s = LaxState::zero(N, 3, 1).unwrap();
        for ((family, index), f) in s.coordinates().into_iter().zip(fields) {
            s.set_field(family, index, f).unwrap();
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative(a in operator(), b in operator(), c in operator()) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(left.agrees_with(&right));
    }

    #[test]
    fn trace_of_a_commutator_vanishes(a in operator(), b in operator()) {
        prop_assert_eq!(a.commutator(&b).unwrap().trace().unwrap(), rat(0, 1));
    }

    #[test]
    fn trace_form_is_invariant(a in operator(), b in operator(), c in operator()) {
        let left = a.commutator(&b).unwrap().inner(&c).unwrap();
        let right = a.inner(&b.commutator(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn projections_recombine(a in operator()) {
        prop_assert!((&a.plus().unwrap() + &a.minus().unwrap()).agrees_with(&a));
    }

    #[test]
    fn modified_yang_baxter_holds(x in pair(), y in pair()) {
        for map in [RMap::R, RMap::A] {
            prop_assert!(PairElement::myb_residual(map, &x, &y).unwrap().vanishes_where_known());
        }
    }

    #[test]
    fn r_adjoint_is_the_trace_form_transpose(x in pair(), y in pair()) {
        let left = x.r_matrix().unwrap().inner(&y).unwrap();
        let right = x.inner(&y.r_adjoint().unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn skew_part_is_antisymmetric(x in pair(), y in pair()) {
        let left = x.skew_part().unwrap().inner(&y).unwrap();
        let right = x.inner(&y.skew_part().unwrap()).unwrap();
        prop_assert_eq!(left, -right);
    }

    #[test]
    fn zero_mean_functions_invert_shift_minus_one(f in lattice()) {
        let mean = f.sum() / rat(N as i64, 1);
        let g = f.map(|v| v - &mean);
        let phi = g.invert_shift_minus_one().unwrap();
        prop_assert_eq!(&phi.shift(1) - &phi, g);
    }

    #[test]
    fn state_json_round_trips(s in state()) {
        prop_assert_eq!(state_from_json::<Rational>(&state_to_json(&s)).unwrap(), s);
    }

    #[test]
    fn first_flows_conserve_the_residue_sums(s in state()) {
        for flow in [FlowSpec::t(1).unwrap(), FlowSpec::tbar(1).unwrap()] {
            let v = lax_rhs(flow, &s).unwrap();
            prop_assert_eq!(v.plus.coefficient(0).unwrap().sum(), rat(0, 1));
            prop_assert_eq!(v.minus.coefficient(0).unwrap().sum(), rat(0, 1));
        }
    }
}
