use super::*;
use crate::hierarchy::{lax_rhs, FlowSpec};
use crate::sample::Sampler;
use crate::scalar::{rat, Rational};

fn unit_covector(n: usize) -> PairElement<Rational> {
    PairElement {
        plus: DiffOp::one(n),
        minus: DiffOp::zero(n),
    }
}

#[test]
fn projections_split_the_algebra() {
    let mut s = Sampler::new(1);
    let p = s.pair(5, -3, 3);
    let sum = &project_u(&p).unwrap() + &project_v(&p).unwrap();
    assert_eq!(sum, p);
    let x = restrict_to_u_dual(&p).unwrap();
    assert_eq!(x.plus.min_degree(), Some(0));
    assert_eq!(x.minus.max_degree(), Some(1));
}

#[test]
fn covectors_outside_u_dual_are_rejected() {
    let mut s = Sampler::new(2);
    let st = s.state(5, 3, 2);
    let bad = s.pair(5, -1, 1);
    assert!(matches!(reduced_p1(&st, &bad), Err(Error::Invalid(_))));
    assert!(matches!(reduced_p2(&st, &bad), Err(Error::Invalid(_))));
}

#[test]
fn first_and_second_match_the_oracle() {
    let mut s = Sampler::new(3);
    for _ in 0..3 {
        let st = s.state(5, 3, 2);
        let x = s.u_dual_covector(5, 2, -1);
        let padded = st.padded(11, 10);
        let o1 = numeric_dirac_oracle(TensorId::P1, &st, &x, None, 0.0).unwrap();
        let o2 = numeric_dirac_oracle(TensorId::P2, &st, &x, None, 0.0).unwrap();
        assert!(reduced_p1(&padded, &x).unwrap().agrees_with(&o1));
        assert!(reduced_p2(&padded, &x).unwrap().agrees_with(&o2));
    }
}

#[test]
fn unit_covector_generates_the_lowest_flows() {
    let st = Sampler::new(4).state(5, 5, 4);
    let one = unit_covector(5);
    assert!(reduced_p1(&st, &one).unwrap().vanishes_where_known());
    let t1 = lax_rhs(FlowSpec::t(1).unwrap(), &st).unwrap();
    let t2 = lax_rhs(FlowSpec::t(2).unwrap(), &st).unwrap();
    assert!(reduced_p2(&st, &one).unwrap().agrees_with(&t1));
    assert!(reduced_p3_with(&st, &one, Boundary::Local).unwrap().agrees_with(&t2));
}

#[test]
fn obstruction_pairs_the_covector_with_the_t1_field() {
    let mut s = Sampler::new(5);
    let st = s.state(5, 4, 3);
    let x = s.u_dual_covector(5, 2, -1);
    let t1 = lax_rhs(FlowSpec::t(1).unwrap(), &st.padded(10, 9)).unwrap();
    let o = beta_obstruction(&st, &x).unwrap();
    assert_ne!(o, rat(0, 1));
    assert_eq!(o, x.inner(&t1).unwrap());
}

#[test]
fn periodic_third_tensor_is_obstructed() {
    let mut s = Sampler::new(6);
    let st = s.state(5, 3, 2);
    let x = s.u_dual_covector(5, 2, -1);
    assert!(matches!(reduced_p3(&st, &x), Err(Error::NonZeroMean { .. })));
    assert!(matches!(
        dirac_oracle_outcome(TensorId::P3, &st, &x, None, 0.0),
        Err(Error::StarConditionViolated(_))
    ));
    assert!(reduced_p3_with(&st, &x, Boundary::Local).is_ok());
}

#[test]
fn third_tensor_matches_the_oracle_up_to_its_kernel() {
    let mut s = Sampler::new(7);
    let st = s.state(5, 3, 2);
    let x = s.u_dual_covector(5, 2, -1);
    let y = s.u_dual_covector(5, 2, -1);
    let ratio = beta_obstruction(&st, &x).unwrap() / beta_obstruction(&st, &y).unwrap();
    let adm = &x - &y.scale(&ratio);
    assert_eq!(beta_obstruction(&st, &adm).unwrap(), rat(0, 1));
    let out = dirac_oracle_outcome(TensorId::P3, &st, &adm, None, 0.0).unwrap();
    assert!(!out.ambiguity.is_empty());
    let padded = st.padded(11, 10);
    for b in [Boundary::Local, Boundary::Periodic] {
        let closed = reduced_p3_with(&padded, &adm, b).unwrap();
        assert!(out.agrees_modulo_ambiguity(&closed, 0.0), "{b:?}");
    }
    let t1 = lax_rhs(FlowSpec::t(1).unwrap(), &padded).unwrap();
    let off = &reduced_p3_with(&padded, &adm, Boundary::Local).unwrap() + &t1.scale(&rat(5, 3));
    assert!(out.agrees_modulo_ambiguity(&off, 0.0));
    let junk = &off + &unit_covector(5);
    assert!(!out.agrees_modulo_ambiguity(&junk, 0.0));
}

#[test]
fn local_and_open_inverses_agree_on_a_long_lattice() {
    let mut s = Sampler::new(8);
    let st = s.state(6, 4, 3).tiled(3);
    let mut x = PairElement::<Rational>::zero(18);
    for d in 0..=1 {
        x.plus = &x.plus + &DiffOp::monomial(LatticeFunction::delta(18, 9).scale(&s.nonzero_rational()), d);
    }
    x.minus = DiffOp::monomial(LatticeFunction::delta(18, 8).scale(&s.nonzero_rational()), -1);
    let local = reduced_p3_with(&st, &x, Boundary::Local).unwrap();
    let open = reduced_p3_with(&st, &x, Boundary::Open { cut: 0 }).unwrap();
    assert!(local.agrees_with(&open));
}

#[test]
fn push_forward_under_shifts() {
    let mut s = Sampler::new(9);
    let st = s.state(5, 3, 2).padded(11, 10);
    let x = s.u_dual_covector(5, 2, -1);
    for t in [rat(1, 1), rat(-3, 7)] {
        for r in shift_pushforward_residual(&st, &t, &x, Boundary::Local).unwrap() {
            assert!(r.vanishes_where_known());
        }
    }
}
