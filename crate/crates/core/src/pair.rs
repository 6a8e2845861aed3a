//! The algebra `𝔄 = 𝒜⁺ ⊕ 𝒜⁻` of operator pairs, its trace form, the
//! R-matrix built from the splitting `diag(𝒜⁰ ⊕ 𝒜⁰) ⊕ ((𝒜⁺)_- ⊕ (𝒜⁻)_+)`,
//! the adjoint, the skew part and the associated brackets.

use std::ops::{Add, Neg, Sub};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An element `(X, X̄)`: `plus` is bounded above, `minus` bounded below.
/// Covectors use the same type through the trace pairing.
#[derive(Clone, Debug, PartialEq)]
pub struct PairElement<S> {
    pub plus: DiffOp<S>,
    pub minus: DiffOp<S>,
}

/// Which linear map drives a bracket or Yang–Baxter residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RMap {
    R,
    /// The skew-symmetric part `A = ½(R - R*)`.
    A,
}

impl<S: Scalar> PairElement<S> {
    pub fn new(plus: DiffOp<S>, minus: DiffOp<S>) -> Result<Self> {
        plus.same_period(&minus)?;
        if plus.upper_accuracy().is_some() {
            return Err(Error::Invalid("first component must be bounded above".into()));
        }
        if minus.lower_accuracy().is_some() {
            return Err(Error::Invalid("second component must be bounded below".into()));
        }
        Ok(Self { plus, minus })
    }

    pub fn zero(period: usize) -> Self {
        Self {
            plus: DiffOp::zero(period),
            minus: DiffOp::zero(period),
        }
    }

    pub fn period(&self) -> usize {
        self.plus.period()
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            plus: self.plus.scale(c),
            minus: self.minus.scale(c),
        }
    }

    pub fn half(&self) -> Self {
        self.scale(&S::from_ratio(1, 2))
    }

    /// Componentwise product.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        Ok(Self {
            plus: self.plus.mul(&rhs.plus)?,
            minus: self.minus.mul(&rhs.minus)?,
        })
    }

    /// Componentwise commutator.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        Ok(Self {
            plus: self.plus.commutator(&rhs.plus)?,
            minus: self.minus.commutator(&rhs.minus)?,
        })
    }

    /// `tr X + tr X̄`.
    pub fn trace(&self) -> Result<S> {
        Ok(self.plus.trace()? + self.minus.trace()?)
    }

    /// `(Z, W) = tr(X Y) + tr(X̄ Ȳ)`.
    pub fn inner(&self, rhs: &Self) -> Result<S> {
        Ok(self.plus.inner(&rhs.plus)? + self.minus.inner(&rhs.minus)?)
    }

    /// `R(X, X̄) = (X₊ - X₋ + 2X̄₋, X̄₋ - X̄₊ + 2X₊)`.
    pub fn r_matrix(&self) -> Result<Self> {
        let (x, xb) = (&self.plus, &self.minus);
        let two = S::from_integer(2);
        let xp = x.plus()?;
        let xm = x.minus()?;
        let xbp = xb.plus()?;
        let xbm = xb.minus()?;
        Ok(Self {
            plus: &(&xp - &xm) + &xbm.scale(&two),
            minus: &(&xbm - &xbp) + &xp.scale(&two),
        })
    }

    /// `R*(X, X̄) = (X_{≤0} - X_{>0} + 2X̄_{≤0}, X̄_{>0} - X̄_{≤0} + 2X_{>0})`.
    pub fn r_adjoint(&self) -> Result<Self> {
        let (x, xb) = (&self.plus, &self.minus);
        let two = S::from_integer(2);
        let x_le = x.le(0)?;
        let x_gt = x.ge(1)?;
        let xb_le = xb.le(0)?;
        let xb_gt = xb.ge(1)?;
        Ok(Self {
            plus: &(&x_le - &x_gt) + &xb_le.scale(&two),
            minus: &(&xb_gt - &xb_le) + &x_gt.scale(&two),
        })
    }

    /// `A(X, X̄) = (X_{>0} - X_{<0} - X̄₀, X̄_{<0} - X̄_{>0} + X₀)`.
    pub fn skew_part(&self) -> Result<Self> {
        let (x, xb) = (&self.plus, &self.minus);
        let x0 = x.project(Some(0), Some(0))?;
        let xb0 = xb.project(Some(0), Some(0))?;
        Ok(Self {
            plus: &(&x.ge(1)? - &x.le(-1)?) - &xb0,
            minus: &(&xb.le(-1)? - &xb.ge(1)?) + &x0,
        })
    }

    /// `(Π, Π̃)` with `Π(X, X̄) = (X₊ + X̄₋, X₊ + X̄₋)` and
    /// `Π̃(X, X̄) = (X₋ - X̄₋, X̄₊ - X₊)`.
    pub fn splitting_projections(&self) -> Result<(Self, Self)> {
        let (x, xb) = (&self.plus, &self.minus);
        let xp = x.plus()?;
        let xm = x.minus()?;
        let xbp = xb.plus()?;
        let xbm = xb.minus()?;
        let diag = &xp + &xbm;
        let pi = Self {
            plus: diag.clone(),
            minus: diag,
        };
        let pi_tilde = Self {
            plus: &xm - &xbm,
            minus: &xbp - &xp,
        };
        Ok((pi, pi_tilde))
    }

    /// Dual projections `(Π*, Π̃*)`.
    pub fn dual_projections(&self) -> Result<(Self, Self)> {
        let (x, xb) = (&self.plus, &self.minus);
        let x_le = x.le(0)?;
        let x_gt = x.ge(1)?;
        let xb_le = xb.le(0)?;
        let xb_gt = xb.ge(1)?;
        let pi = Self {
            plus: &x_le + &xb_le,
            minus: &x_gt + &xb_gt,
        };
        let pi_tilde = Self {
            plus: &x_gt - &xb_le,
            minus: &xb_le - &x_gt,
        };
        Ok((pi, pi_tilde))
    }

    pub fn apply(&self, map: RMap) -> Result<Self> {
        match map {
            RMap::R => self.r_matrix(),
            RMap::A => self.skew_part(),
        }
    }

    /// `[Z, W]_M = [M Z, W] + [Z, M W]`.
    pub fn r_bracket(map: RMap, z: &Self, w: &Self) -> Result<Self> {
        Ok(&z.apply(map)?.commutator(w)? + &z.commutator(&w.apply(map)?)?)
    }

    /// `[M Z, M W] - M([Z, W]_M) + [Z, W]`, zero when `M` solves the
    /// modified Yang–Baxter equation.
    pub fn myb_residual(map: RMap, z: &Self, w: &Self) -> Result<Self> {
        let lhs = z.apply(map)?.commutator(&w.apply(map)?)?;
        let corr = Self::r_bracket(map, z, w)?.apply(map)?;
        Ok(&(&lhs - &corr) + &z.commutator(w)?)
    }

    pub fn vanishes_where_known(&self) -> bool {
        self.plus.vanishes_where_known() && self.minus.vanishes_where_known()
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.plus.agrees_with(&other.plus) && self.minus.agrees_with(&other.minus)
    }

    pub fn max_abs(&self) -> f64 {
        self.plus.max_abs().max(self.minus.max_abs())
    }

    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PairElement<T> {
        PairElement {
            plus: self.plus.convert(&f),
            minus: self.minus.convert(&f),
        }
    }
}

impl<S: Scalar> Add for &PairElement<S> {
    type Output = PairElement<S>;
    fn add(self, rhs: Self) -> PairElement<S> {
        PairElement {
            plus: &self.plus + &rhs.plus,
            minus: &self.minus + &rhs.minus,
        }
    }
}

impl<S: Scalar> Sub for &PairElement<S> {
    type Output = PairElement<S>;
    fn sub(self, rhs: Self) -> PairElement<S> {
        PairElement {
            plus: &self.plus - &rhs.plus,
            minus: &self.minus - &rhs.minus,
        }
    }
}

impl<S: Scalar> Neg for &PairElement<S> {
    type Output = PairElement<S>;
    fn neg(self) -> PairElement<S> {
        PairElement {
            plus: -&self.plus,
            minus: -&self.minus,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeFunction;
    use crate::scalar::{rat, Rational};

    type Op = DiffOp<Rational>;
    type Pair = PairElement<Rational>;

    fn lf(values: &[i64]) -> LatticeFunction<Rational> {
        LatticeFunction::new(values.iter().map(|&v| rat(v, 1)).collect())
    }

    fn pair(plus: Op, minus: Op) -> Pair {
        PairElement::new(plus, minus).unwrap()
    }

    #[test]
    fn r_matrix_hand_example() {
        let a = lf(&[1, 2, 3]);
        let b = lf(&[-1, 4, 0]);
        let z = pair(
            &Op::shift_op(3, 1) + &Op::monomial(a.clone(), -1),
            Op::monomial(b.clone(), -1),
        );
        let r = z.r_matrix().unwrap();
        let bm = Op::monomial(b.clone(), -1);
        let expect_plus = &(&Op::shift_op(3, 1) - &Op::monomial(a, -1)) + &bm.scale(&rat(2, 1));
        let expect_minus = &bm + &Op::shift_op(3, 1).scale(&rat(2, 1));
        assert_eq!(r, pair(expect_plus, expect_minus));

        let xp = &Op::shift_op(3, 2) + &Op::function(lf(&[1, 0, 1]));
        let r = pair(xp.clone(), Op::zero(3)).r_matrix().unwrap();
        assert_eq!(r, pair(xp.clone(), xp.scale(&rat(2, 1))));
    }

    #[test]
    fn adjoint_and_skew_examples() {
        let u0 = lf(&[3, 1, 4]);
        let z = pair(Op::function(u0.clone()), Op::zero(3));
        assert_eq!(z.r_adjoint().unwrap(), z);
        let w = pair(Op::zero(3), Op::function(u0.clone()));
        assert_eq!(
            w.r_adjoint().unwrap(),
            pair(Op::function(u0.clone()).scale(&rat(2, 1)), -&Op::function(u0.clone()))
        );
        assert_eq!(z.skew_part().unwrap(), pair(Op::zero(3), Op::function(u0)));
    }

    #[test]
    fn splitting_example() {
        let a = lf(&[1, 2, 3]);
        let b = lf(&[-1, 4, 0]);
        let z = pair(
            &Op::shift_op(3, 1) + &Op::monomial(a, -1),
            Op::monomial(b.clone(), -1),
        );
        let (pi, _) = z.splitting_projections().unwrap();
        let d = &Op::shift_op(3, 1) + &Op::monomial(b, -1);
        assert_eq!(pi, pair(d.clone(), d));
    }

    #[test]
    fn trace_examples() {
        let f = lf(&[1, 5, -2]);
        assert_eq!(pair(Op::function(f.clone()), Op::zero(3)).trace().unwrap(), rat(4, 1));
        assert_eq!(pair(Op::shift_op(3, 1), Op::shift_op(3, -1)).trace().unwrap(), rat(0, 1));
        let ip = pair(Op::shift_op(3, 1), Op::zero(3))
            .inner(&pair(Op::monomial(f, -1), Op::zero(3)))
            .unwrap();
        assert_eq!(ip, rat(4, 1));
    }

    #[test]
    fn self_bracket_vanishes() {
        let z = pair(
            &Op::shift_op(3, 1) + &Op::function(lf(&[1, 2, 3])),
            &Op::monomial(lf(&[2, 0, 1]), -1) + &Op::shift_op(3, 2),
        );
        for map in [RMap::R, RMap::A] {
            assert!(PairElement::r_bracket(map, &z, &z).unwrap().vanishes_where_known());
            assert!(PairElement::myb_residual(map, &z, &z).unwrap().vanishes_where_known());
        }
    }

    #[test]
    fn rejects_wrong_orientation() {
        let truncated_above = Op::one(3).with_upper_accuracy(4);
        assert!(PairElement::new(truncated_above, Op::zero(3)).is_err());
        assert!(PairElement::new(Op::one(3), Op::one(4)).is_err());
    }
}
