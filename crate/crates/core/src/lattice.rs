//! Functions on the periodic lattice ℤ/Nℤ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A scalar-valued function on ℤ/Nℤ. Every index is reduced mod `N`.
#[derive(Clone, PartialEq)]
pub struct LatticeFunction<S> {
    values: Vec<S>,
}

impl<S: Scalar> LatticeFunction<S> {
    /// Panics if `values` is empty; the period must be positive.
    pub fn new(values: Vec<S>) -> Self {
        assert!(!values.is_empty(), "lattice period must be positive");
        Self { values }
    }

    pub fn zeros(period: usize) -> Self {
        Self::constant(period, S::zero())
    }

    pub fn constant(period: usize, value: S) -> Self {
        Self::new(vec![value; period])
    }

    /// Kronecker delta δ(n - site).
    pub fn delta(period: usize, site: i64) -> Self {
        let mut f = Self::zeros(period);
        let idx = f.index(site);
        f.values[idx] = S::one();
        f
    }

    pub fn from_fn(period: usize, mut f: impl FnMut(i64) -> S) -> Self {
        Self::new((0..period as i64).map(&mut f).collect())
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn into_values(self) -> Vec<S> {
        self.values
    }

    fn index(&self, n: i64) -> usize {
        n.rem_euclid(self.values.len() as i64) as usize
    }

    pub fn at(&self, n: i64) -> &S {
        &self.values[self.index(n)]
    }

    pub fn set(&mut self, n: i64, value: S) {
        let idx = self.index(n);
        self.values[idx] = value;
    }

    /// `result(n) = f(n + k)`.
    pub fn shift(&self, k: i64) -> Self {
        let n = self.period() as i64;
        let k = k.rem_euclid(n) as usize;
        if k == 0 {
            return self.clone();
        }
        let mut values = Vec::with_capacity(self.period());
        values.extend_from_slice(&self.values[k..]);
        values.extend_from_slice(&self.values[..k]);
        Self { values }
    }

    pub fn sum(&self) -> S {
        self.values
            .iter()
            .fold(S::zero(), |acc, v| acc + v.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self {
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!(self.period(), other.period(), "lattice period mismatch");
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// `self += a * b`, pointwise.
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        for ((acc, x), y) in self.values.iter_mut().zip(&a.values).zip(&b.values) {
            if x.is_zero() || y.is_zero() {
                continue;
            }
            *acc += x.clone() * y.clone();
        }
    }

    /// `self += a * shift(b, k)`, pointwise, without materialising the shift.
    pub fn add_product_shifted(&mut self, a: &Self, b: &Self, k: i64) {
        let n = self.period();
        let k = k.rem_euclid(n as i64) as usize;
        for (i, (acc, x)) in self.values.iter_mut().zip(&a.values).enumerate() {
            if x.is_zero() {
                continue;
            }
            let y = &b.values[(i + k) % n];
            if y.is_zero() {
                continue;
            }
            *acc += x.clone() * y.clone();
        }
    }

    /// The partial inverse of `Λ - 1`: returns `g` with `g(n+1) - g(n) = f(n)`
    /// and `g(0) = 0`. Any other normalisation differs by a constant.
    pub fn invert_shift_minus_one(&self) -> Result<Self> {
        self.invert_shift_minus_one_with_tol(S::DEFAULT_TOL)
    }

    pub fn invert_shift_minus_one_with_tol(&self, tol: f64) -> Result<Self> {
        let total = self.sum();
        if !total.is_negligible(tol) {
            return Err(Error::NonZeroMean {
                sum: format!("{total:?}"),
            });
        }
        let mut values = Vec::with_capacity(self.period());
        let mut acc = S::zero();
        for v in &self.values {
            values.push(acc.clone());
            acc += v.clone();
        }
        Ok(Self { values })
    }

    /// Solves `g(n+1) - g(n) = f(n)` walking once around the lattice from
    /// `g(cut) = 0`, with no condition on the sum of `f`. The relation then
    /// fails only across the step from `cut - 1` to `cut`, so this stands in
    /// for the inverse on the infinite lattice when `f` vanishes near `cut`.
    pub fn invert_shift_minus_one_open(&self, cut: i64) -> Self {
        let mut out = Self::zeros(self.period());
        let mut acc = S::zero();
        for k in 0..self.period() as i64 {
            out.set(cut + k, acc.clone());
            acc += self.at(cut + k).clone();
        }
        out
    }

    /// `𝒟^k f = (Λ^k - 1)(Λ - 1)⁻¹ f`: `Σ_{r=0}^{k-1} f(n+r)` for `k > 0`,
    /// zero for `k = 0`, `-Σ_{r=k}^{-1} f(n+r)` for `k < 0`.
    pub fn summation(&self, k: i64) -> Self {
        let mut out = Self::zeros(self.period());
        if k > 0 {
            for r in 0..k {
                out = &out + &self.shift(r);
            }
        } else {
            for r in k..0 {
                out = &out - &self.shift(r);
            }
        }
        out
    }

    pub fn same_period(&self, other: &Self) -> Result<()> {
        if self.period() == other.period() {
            Ok(())
        } else {
            Err(Error::PeriodMismatch {
                left: self.period(),
                right: other.period(),
            })
        }
    }
}

impl<S: fmt::Debug> fmt::Debug for LatticeFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.values).finish()
    }
}

impl<S: Scalar> Add for &LatticeFunction<S> {
    type Output = LatticeFunction<S>;
    fn add(self, rhs: Self) -> LatticeFunction<S> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }
}

impl<S: Scalar> Sub for &LatticeFunction<S> {
    type Output = LatticeFunction<S>;
    fn sub(self, rhs: Self) -> LatticeFunction<S> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }
}

impl<S: Scalar> Mul for &LatticeFunction<S> {
    type Output = LatticeFunction<S>;
    fn mul(self, rhs: Self) -> LatticeFunction<S> {
        self.zip_with(rhs, |a, b| a.clone() * b.clone())
    }
}

impl<S: Scalar> Neg for &LatticeFunction<S> {
    type Output = LatticeFunction<S>;
    fn neg(self) -> LatticeFunction<S> {
        self.map(|v| -v.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn lf(values: &[i64]) -> LatticeFunction<Rational> {
        LatticeFunction::new(values.iter().map(|&v| rat(v, 1)).collect())
    }

    #[test]
    fn cyclic_shift() {
        let f = lf(&[1, 2, 3, 4]);
        assert_eq!(f.shift(1), lf(&[2, 3, 4, 1]));
        assert_eq!(f.shift(0), f);
        assert_eq!(f.shift(-1), lf(&[4, 1, 2, 3]));
        assert_eq!(f.shift(9), f.shift(1));
    }

    #[test]
    fn sums() {
        let f = lf(&[1, 2, 3, 4]);
        assert_eq!(f.sum(), rat(10, 1));
        for k in -5..5 {
            assert_eq!(f.shift(k).sum(), rat(10, 1));
        }
        let g = lf(&[3, -1, 4, 1]);
        assert_eq!((&g.shift(1) - &g).sum(), rat(0, 1));
    }

    #[test]
    fn inverse_of_shift_minus_one() {
        let g = lf(&[1, -1, 0, 0]).invert_shift_minus_one().unwrap();
        assert_eq!(g, lf(&[0, 1, 0, 0]));
        assert_eq!(
            lf(&[0, 0, 0, 0]).invert_shift_minus_one().unwrap(),
            lf(&[0, 0, 0, 0])
        );
        assert!(matches!(
            lf(&[1, 1, 1, 1]).invert_shift_minus_one(),
            Err(Error::NonZeroMean { .. })
        ));
    }

    #[test]
    fn float_tolerance() {
        let f = LatticeFunction::new(vec![1.0, -1.0 + 1e-13, 0.0]);
        assert!(f.invert_shift_minus_one().is_ok());
        let f = LatticeFunction::new(vec![1.0, -0.5, 0.0]);
        assert!(f.invert_shift_minus_one().is_err());
    }

    #[test]
    fn shifted_product_matches_explicit_shift() {
        let a = lf(&[1, 2, 3, 4, 5]);
        let b = lf(&[-2, 7, 1, 0, 3]);
        for k in -6..6 {
            let mut acc = LatticeFunction::zeros(5);
            acc.add_product_shifted(&a, &b, k);
            assert_eq!(acc, &a * &b.shift(k));
        }
    }
}
