//! The three compatible Poisson tensors on `𝔄`, written term by term in the
//! grouping of their closed form, and bracket evaluation of functionals.

use std::fmt;

use crate::error::{Error, Result};
use crate::pair::PairElement;
use crate::scalar::Scalar;

/// Selects the linear, quadratic or cubic Poisson structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TensorId {
    P1,
    P2,
    P3,
}

impl TensorId {
    pub const ALL: [TensorId; 3] = [TensorId::P1, TensorId::P2, TensorId::P3];

    pub fn from_index(k: u8) -> Result<Self> {
        match k {
            1 => Ok(TensorId::P1),
            2 => Ok(TensorId::P2),
            3 => Ok(TensorId::P3),
            _ => Err(Error::Invalid(format!("tensor index {k} not in 1..=3"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            TensorId::P1 => 1,
            TensorId::P2 => 2,
            TensorId::P3 => 3,
        }
    }
}

impl fmt::Display for TensorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.index())
    }
}

/// `C = [L, X] + [L̄, X̄]`, the combination every tensor projects.
pub(crate) fn lax_commutator_sum<S: Scalar>(
    point: &PairElement<S>,
    covector: &PairElement<S>,
) -> Result<(crate::DiffOp<S>, crate::DiffOp<S>)> {
    let lx = point.plus.commutator(&covector.plus)?;
    let lbxb = point.minus.commutator(&covector.minus)?;
    Ok((lx, lbxb))
}

/// `P_k(L, L̄)(X, X̄)` for the unreduced tensors.
pub fn apply_tensor<S: Scalar>(
    k: TensorId,
    point: &PairElement<S>,
    covector: &PairElement<S>,
) -> Result<PairElement<S>> {
    point.plus.same_period(&covector.plus)?;
    match k {
        TensorId::P1 => first_tensor(point, covector),
        TensorId::P2 => second_tensor(point, covector),
        TensorId::P3 => third_tensor(point, covector),
    }
}

fn first_tensor<S: Scalar>(point: &PairElement<S>, cov: &PairElement<S>) -> Result<PairElement<S>> {
    let (l, lb) = (&point.plus, &point.minus);
    let (x, xb) = (&cov.plus, &cov.minus);
    let (lx, lbxb) = lax_commutator_sum(point, cov)?;
    let c = &lx + &lbxb;
    let plus = &l.commutator(&(&x.minus()? - &xb.minus()?))? - &c.le(0)?;
    let minus = &lb.commutator(&(&xb.plus()? - &x.plus()?))? - &c.ge(1)?;
    Ok(PairElement { plus, minus })
}

fn second_tensor<S: Scalar>(point: &PairElement<S>, cov: &PairElement<S>) -> Result<PairElement<S>> {
    let half = S::from_ratio(1, 2);
    let (l, lb) = (&point.plus, &point.minus);
    let (x, xb) = (&cov.plus, &cov.minus);
    let (lx, lbxb) = lax_commutator_sum(point, cov)?;
    let sym = &l.mul(x)? + &x.mul(l)?;
    let sym_bar = &lb.mul(xb)? + &xb.mul(lb)?;

    let low = &lx.le(0)? + &lbxb.le(0)?;
    let plus = &(&l.commutator(&(&sym.minus()? - &sym_bar.minus()?))?.scale(&half)
        - &l.mul(&low)?.scale(&half))
        - &low.mul(l)?.scale(&half);

    let high = &lx.ge(1)? + &lbxb.ge(1)?;
    let minus = &(&lb.commutator(&(&sym_bar.plus()? - &sym.plus()?))?.scale(&half)
        - &lb.mul(&high)?.scale(&half))
        - &high.mul(lb)?.scale(&half);
    Ok(PairElement { plus, minus })
}

fn third_tensor<S: Scalar>(point: &PairElement<S>, cov: &PairElement<S>) -> Result<PairElement<S>> {
    let (l, lb) = (&point.plus, &point.minus);
    let (x, xb) = (&cov.plus, &cov.minus);
    let (lx, lbxb) = lax_commutator_sum(point, cov)?;
    let lxl = l.mul(x)?.mul(l)?;
    let lbxblb = lb.mul(xb)?.mul(lb)?;
    let c = &lx + &lbxb;

    let plus = &l.commutator(&(&lxl - &lbxblb).minus()?)? - &l.mul(&c.le(0)?)?.mul(l)?;
    let minus = &lb.commutator(&(&lbxblb - &lxl).plus()?)? - &lb.mul(&c.ge(1)?)?.mul(lb)?;
    Ok(PairElement { plus, minus })
}

/// `{f, g}_k(L) = (dF, P_k(L) dG)`.
pub fn bracket_functionals<S: Scalar>(
    k: TensorId,
    point: &PairElement<S>,
    df: &PairElement<S>,
    dg: &PairElement<S>,
) -> Result<S> {
    df.inner(&apply_tensor(k, point, dg)?)
}

/// The Lie–Poisson bracket `{f, g}(L) = (L, [dF, dG])`.
pub fn lie_poisson_bracket<S: Scalar>(
    point: &PairElement<S>,
    df: &PairElement<S>,
    dg: &PairElement<S>,
) -> Result<S> {
    point.inner(&df.commutator(dg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::DiffOp;
    use crate::lattice::LatticeFunction;
    use crate::scalar::{rat, Rational};

    type Op = DiffOp<Rational>;
    type Pair = PairElement<Rational>;

    fn lf(values: &[i64]) -> LatticeFunction<Rational> {
        LatticeFunction::new(values.iter().map(|&v| rat(v, 1)).collect())
    }

    fn point() -> Pair {
        PairElement::new(
            Op::from_terms(4, [(1, lf(&[1; 4])), (0, lf(&[1, -2, 0, 3])), (-1, lf(&[2, 1, 1, -1]))]),
            Op::from_terms(4, [(-1, lf(&[1, 3, 2, 1])), (0, lf(&[0, 1, 0, 2]))]),
        )
        .unwrap()
    }

    #[test]
    fn constant_covector_in_kernel_of_p1() {
        let one = PairElement::new(Op::one(4), Op::zero(4)).unwrap();
        assert!(apply_tensor(TensorId::P1, &point(), &one).unwrap().vanishes_where_known());
    }

    #[test]
    fn p1_one_term_hand_expansion() {
        // At (Λ, 0) on (fΛ^{-1}, 0): C = [Λ, fΛ^{-1}] = f(n+1) - f(n) (degree 0),
        // plus = [Λ, fΛ^{-1}] - C_{≤0} = 0, minus = -C_{>0} = 0.
        let f = lf(&[1, 4, 2, 7]);
        let pt = PairElement::new(Op::shift_op(4, 1), Op::zero(4)).unwrap();
        let cov = PairElement::new(Op::monomial(f.clone(), -1), Op::zero(4)).unwrap();
        let out = apply_tensor(TensorId::P1, &pt, &cov).unwrap();
        assert!(out.vanishes_where_known());
        // On (fΛ, 0): plus = 0 - [Λ, fΛ]_{≤0} = 0, minus = [0, -fΛ] - (f(n+1)-f(n))Λ².
        let cov = PairElement::new(Op::monomial(f.clone(), 1), Op::zero(4)).unwrap();
        let out = apply_tensor(TensorId::P1, &pt, &cov).unwrap();
        assert!(out.plus.vanishes_where_known());
        assert_eq!(out.minus, -&Op::monomial(&f.shift(1) - &f, 2));
    }

    #[test]
    fn brackets_vanish_on_diagonal() {
        let df = PairElement::new(
            &Op::shift_op(4, 1) + &Op::function(lf(&[1, 0, 2, 1])),
            Op::monomial(lf(&[0, 1, 1, 0]), -1),
        )
        .unwrap();
        for k in TensorId::ALL {
            assert_eq!(bracket_functionals(k, &point(), &df, &df).unwrap(), rat(0, 1));
            assert_eq!(bracket_functionals(k, &point(), &Pair::zero(4), &df).unwrap(), rat(0, 1));
        }
        assert_eq!(lie_poisson_bracket(&point(), &df, &df).unwrap(), rat(0, 1));
    }
}
