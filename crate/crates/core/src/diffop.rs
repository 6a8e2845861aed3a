//! Degree-graded difference operators `Σ_k a_k(n) Λ^k` over the periodic
//! coefficient ring.
//!
//! Operators are stored as a sparse map from degree to coefficient. Formal
//! infinite tails are modelled by accuracy bounds: an operator with
//! `lower = Some(a)` is exactly known at degrees `>= a` and unknown below
//! (an element of `𝒜⁺` truncated for storage); `upper = Some(b)` is the
//! mirror image for `𝒜⁻`. `None` means the operator is exact in that
//! direction, i.e. its stored coefficients are all there is.
//!
//! `Λ^N` is *not* identified with `1`: degrees add freely while `Λ` acts on
//! coefficients by cyclic shift.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::lattice::LatticeFunction;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct DiffOp<S> {
    period: usize,
    coeffs: BTreeMap<i64, LatticeFunction<S>>,
    lower: Option<i64>,
    upper: Option<i64>,
}

fn max_bound(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn min_bound(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn describe_window(lower: Option<i64>, upper: Option<i64>) -> String {
    let lo = lower.map_or("-inf".to_string(), |v| v.to_string());
    let hi = upper.map_or("+inf".to_string(), |v| v.to_string());
    format!("{lo}, {hi}")
}

impl<S: Scalar> DiffOp<S> {
    pub fn zero(period: usize) -> Self {
        assert!(period > 0, "lattice period must be positive");
        Self {
            period,
            coeffs: BTreeMap::new(),
            lower: None,
            upper: None,
        }
    }

    pub fn one(period: usize) -> Self {
        Self::function(LatticeFunction::constant(period, S::one()))
    }

    /// The constant operator `c`.
    pub fn constant(period: usize, c: S) -> Self {
        Self::function(LatticeFunction::constant(period, c))
    }

    /// `Λ^k`.
    pub fn shift_op(period: usize, k: i64) -> Self {
        Self::monomial(LatticeFunction::constant(period, S::one()), k)
    }

    /// Multiplication by `f` (degree 0).
    pub fn function(f: LatticeFunction<S>) -> Self {
        Self::monomial(f, 0)
    }

    /// `f Λ^k`.
    pub fn monomial(f: LatticeFunction<S>, k: i64) -> Self {
        let mut op = Self::zero(f.period());
        if !f.is_zero() {
            op.coeffs.insert(k, f);
        }
        op
    }

    pub fn from_terms(period: usize, terms: impl IntoIterator<Item = (i64, LatticeFunction<S>)>) -> Self {
        let mut op = Self::zero(period);
        for (k, f) in terms {
            assert_eq!(f.period(), period, "lattice period mismatch");
            op.accumulate(k, &f);
        }
        op.prune();
        op
    }

    /// Marks every degree below `acc` as unknown and drops what was stored there.
    pub fn with_lower_accuracy(mut self, acc: i64) -> Self {
        self.lower = max_bound(self.lower, Some(acc));
        self.restrict_to_known();
        self
    }

    /// Marks every degree above `acc` as unknown and drops what was stored there.
    pub fn with_upper_accuracy(mut self, acc: i64) -> Self {
        self.upper = min_bound(self.upper, Some(acc));
        self.restrict_to_known();
        self
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// Lowest exactly known degree; `None` if exact all the way down.
    pub fn lower_accuracy(&self) -> Option<i64> {
        self.lower
    }

    /// Highest exactly known degree; `None` if exact all the way up.
    pub fn upper_accuracy(&self) -> Option<i64> {
        self.upper
    }

    pub fn is_exact(&self) -> bool {
        self.lower.is_none() && self.upper.is_none()
    }

    /// Stored (nonzero) coefficients in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &LatticeFunction<S>)> {
        self.coeffs.iter().map(|(&k, f)| (k, f))
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn is_known(&self, degree: i64) -> bool {
        self.lower.is_none_or(|a| degree >= a) && self.upper.is_none_or(|b| degree <= b)
    }

    fn truncation_error(&self, degree: i64) -> Error {
        Error::TruncationViolation {
            degree,
            known: describe_window(self.lower, self.upper),
        }
    }

    /// Coefficient at `degree`, failing if it lies in a truncated tail.
    pub fn coefficient(&self, degree: i64) -> Result<LatticeFunction<S>> {
        if !self.is_known(degree) {
            return Err(self.truncation_error(degree));
        }
        Ok(self
            .coeffs
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| LatticeFunction::zeros(self.period)))
    }

    /// Exactly zero: nothing stored and no unknown tail.
    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.is_exact()
    }

    /// Zero at every degree where the operator is known.
    pub fn vanishes_where_known(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest degree at which the operator may be nonzero; `None` if unbounded.
    fn reach_up(&self) -> Option<i64> {
        if self.upper.is_some() {
            return None;
        }
        let stored = self.max_degree();
        let tail = self.lower.map(|a| a - 1);
        match (stored, tail) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, y) => x.or(y),
        }
    }

    /// Lowest degree at which the operator may be nonzero; `None` if unbounded.
    fn reach_down(&self) -> Option<i64> {
        if self.lower.is_some() {
            return None;
        }
        let stored = self.min_degree();
        let tail = self.upper.map(|b| b + 1);
        match (stored, tail) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    fn accumulate(&mut self, degree: i64, f: &LatticeFunction<S>) {
        let period = self.period;
        let slot = self
            .coeffs
            .entry(degree)
            .or_insert_with(|| LatticeFunction::zeros(period));
        *slot = &*slot + f;
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, f| !f.is_zero());
    }

    fn restrict_to_known(&mut self) {
        let (lower, upper) = (self.lower, self.upper);
        self.coeffs.retain(|&k, f| {
            lower.is_none_or(|a| k >= a) && upper.is_none_or(|b| k <= b) && !f.is_zero()
        });
    }

    pub fn same_period(&self, other: &Self) -> Result<()> {
        if self.period == other.period {
            Ok(())
        } else {
            Err(Error::PeriodMismatch {
                left: self.period,
                right: other.period,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_period(other)?;
        Ok(self.combine(other, false))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_period(other)?;
        Ok(self.combine(other, true))
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let mut out = Self {
            period: self.period,
            coeffs: self.coeffs.clone(),
            lower: max_bound(self.lower, other.lower),
            upper: min_bound(self.upper, other.upper),
        };
        for (&k, f) in &other.coeffs {
            if subtract {
                out.accumulate(k, &-f);
            } else {
                out.accumulate(k, f);
            }
        }
        out.restrict_to_known();
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = self.clone();
        for f in out.coeffs.values_mut() {
            *f = f.scale(c);
        }
        out.prune();
        out
    }

    /// Product under `Λ f(n) = f(n+1) Λ`.
    ///
    /// Accuracy: a degree-`d` coefficient of `XY` is fully determined iff
    /// `d >= X.lower + reach_up(Y)` and `d >= Y.lower + reach_up(X)` (and the
    /// mirrored conditions from above).
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.same_period(rhs)?;
        if self.is_exact_zero() || rhs.is_exact_zero() {
            return Ok(Self::zero(self.period));
        }
        let mut lower = None;
        if let Some(a) = self.lower {
            lower = max_bound(lower, Some(a + rhs.reach_up().ok_or(Error::UndefinedProduct)?));
        }
        if let Some(b) = rhs.lower {
            lower = max_bound(lower, Some(b + self.reach_up().ok_or(Error::UndefinedProduct)?));
        }
        let mut upper = None;
        if let Some(a) = self.upper {
            upper = min_bound(upper, Some(a + rhs.reach_down().ok_or(Error::UndefinedProduct)?));
        }
        if let Some(b) = rhs.upper {
            upper = min_bound(upper, Some(b + self.reach_down().ok_or(Error::UndefinedProduct)?));
        }

        let mut coeffs: BTreeMap<i64, LatticeFunction<S>> = BTreeMap::new();
        for (&j, a) in &self.coeffs {
            for (&k, b) in &rhs.coeffs {
                let d = j + k;
                if lower.is_some_and(|l| d < l) || upper.is_some_and(|u| d > u) {
                    continue;
                }
                coeffs
                    .entry(d)
                    .or_insert_with(|| LatticeFunction::zeros(self.period))
                    .add_product_shifted(a, b, j);
            }
        }
        let mut out = Self {
            period: self.period,
            coeffs,
            lower,
            upper,
        };
        out.prune();
        Ok(out)
    }

    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        let xy = self.mul(rhs)?;
        let yx = rhs.mul(self)?;
        Ok(&xy - &yx)
    }

    /// Keeps the degrees `lo <= k <= hi` (`None` = unbounded). Fails if the
    /// window reaches into a truncated tail.
    pub fn project(&self, lo: Option<i64>, hi: Option<i64>) -> Result<Self> {
        if let (Some(l), Some(h)) = (lo, hi) {
            if l > h {
                return Ok(Self::zero(self.period));
            }
        }
        if let (Some(l), Some(a)) = (lo, self.lower) {
            if l < a {
                return Err(self.truncation_error(l));
            }
        }
        if let (Some(h), Some(b)) = (hi, self.upper) {
            if h > b {
                return Err(self.truncation_error(h));
            }
        }
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&k, _)| lo.is_none_or(|l| k >= l) && hi.is_none_or(|h| k <= h))
            .map(|(&k, f)| (k, f.clone()))
            .collect();
        Ok(Self {
            period: self.period,
            coeffs,
            lower: if lo.is_some() { None } else { self.lower },
            upper: if hi.is_some() { None } else { self.upper },
        })
    }

    /// `X_{>=k}`
    pub fn ge(&self, k: i64) -> Result<Self> {
        self.project(Some(k), None)
    }

    /// `X_{<=k}`
    pub fn le(&self, k: i64) -> Result<Self> {
        self.project(None, Some(k))
    }

    /// `X_+ = X_{>=0}`
    pub fn plus(&self) -> Result<Self> {
        self.ge(0)
    }

    /// `X_- = X_{<0}`
    pub fn minus(&self) -> Result<Self> {
        self.le(-1)
    }

    /// `res X`, the degree-0 coefficient.
    pub fn residue(&self) -> Result<LatticeFunction<S>> {
        self.coefficient(0)
    }

    /// `tr X = Σ_n res X(n)`.
    pub fn trace(&self) -> Result<S> {
        Ok(self.residue()?.sum())
    }

    /// `(X, Y) = tr XY`.
    pub fn inner(&self, rhs: &Self) -> Result<S> {
        self.mul(rhs)?.trace()
    }

    pub fn power(&self, p: u32) -> Result<Self> {
        let mut out = Self::one(self.period);
        for _ in 0..p {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Compares coefficients on the window where both operators are known.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.period != other.period {
            return false;
        }
        let lower = max_bound(self.lower, other.lower);
        let upper = min_bound(self.upper, other.upper);
        let in_window = |k: i64| lower.is_none_or(|a| k >= a) && upper.is_none_or(|b| k <= b);
        let degrees: std::collections::BTreeSet<i64> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .filter(|&k| in_window(k))
            .collect();
        degrees.into_iter().all(|k| {
            match (self.coeffs.get(&k), other.coeffs.get(&k)) {
                (Some(a), Some(b)) => a == b,
                (Some(f), None) | (None, Some(f)) => f.is_zero(),
                (None, None) => true,
            }
        })
    }

    /// Largest coefficient magnitude (as `f64`) on the known window.
    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .values()
            .flat_map(|f| f.values().iter().map(|v| v.to_f64().abs()))
            .fold(0.0, f64::max)
    }

    /// Converts the coefficients to another scalar type.
    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DiffOp<T> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&k, lf)| (k, LatticeFunction::new(lf.values().iter().map(&f).collect())))
            .collect();
        let mut out = DiffOp {
            period: self.period,
            coeffs,
            lower: self.lower,
            upper: self.upper,
        };
        out.prune();
        out
    }
}

impl<S: Scalar> Add for &DiffOp<S> {
    type Output = DiffOp<S>;
    /// Panics on period mismatch; use [`DiffOp::checked_add`] for untrusted input.
    fn add(self, rhs: Self) -> DiffOp<S> {
        self.checked_add(rhs).expect("lattice period mismatch")
    }
}

impl<S: Scalar> Sub for &DiffOp<S> {
    type Output = DiffOp<S>;
    fn sub(self, rhs: Self) -> DiffOp<S> {
        self.checked_sub(rhs).expect("lattice period mismatch")
    }
}

impl<S: Scalar> Neg for &DiffOp<S> {
    type Output = DiffOp<S>;
    fn neg(self) -> DiffOp<S> {
        self.scale(&-S::one())
    }
}

impl<S: fmt::Debug> fmt::Debug for DiffOp<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp[N={}, known=({})] {{", self.period, describe_window(self.lower, self.upper))?;
        for (k, c) in self.coeffs.iter().rev() {
            write!(f, " Λ^{k}: {c:?};")?;
        }
        write!(f, " }}")
    }
}
