//! Points `(L, L̄)` of the affine space `(Λ, 0) + U` with
//! `L = Λ + u₀ + u₋₁Λ⁻¹ + …` and `L̄ = ū₋₁Λ⁻¹ + ū₀ + ū₁Λ + …`,
//! stored as coordinate fields up to a finite depth.

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::lattice::LatticeFunction;
use crate::pair::PairElement;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Copy)]
pub enum Family {
    /// Coefficients `u_i` of `L`, `i <= 0` (`u₁ ≡ 1`).
    U,
    /// Coefficients `ū_j` of `L̄`, `j >= -1`.
    UBar,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::U => "u",
            Family::UBar => "ubar",
        }
    }

    /// Parses a field label such as `u0`, `u-3` or `ubar-1`.
    pub fn parse_field(label: &str) -> Result<(Family, i64)> {
        let (family, rest) = if let Some(r) = label.strip_prefix("ubar") {
            (Family::UBar, r)
        } else if let Some(r) = label.strip_prefix('u') {
            (Family::U, r)
        } else {
            return Err(Error::Invalid(format!("field '{label}' should look like u0 or ubar-1")));
        };
        let index = rest
            .parse()
            .map_err(|_| Error::Invalid(format!("field '{label}' has no valid index")))?;
        Ok((family, index))
    }
}

/// Coordinate fields of a Lax pair. `u[k]` holds `u_{-k}` for `0 <= k <= depth`,
/// `ubar[k]` holds `ū_{k-1}` for `0 <= k <= depth_bar + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaxState<S> {
    period: usize,
    depth: i64,
    depth_bar: i64,
    u: Vec<LatticeFunction<S>>,
    ubar: Vec<LatticeFunction<S>>,
}

impl<S: Scalar> LaxState<S> {
    /// All coordinates zero, i.e. `(L, L̄) = (Λ, 0)`.
    pub fn zero(period: usize, depth: i64, depth_bar: i64) -> Result<Self> {
        if period == 0 {
            return Err(Error::Invalid("lattice period must be positive".into()));
        }
        if depth < 0 || depth_bar < -1 {
            return Err(Error::Invalid(format!(
                "depths must satisfy M >= 0 and Mbar >= -1 (got {depth}, {depth_bar})"
            )));
        }
        Ok(Self {
            period,
            depth,
            depth_bar,
            u: vec![LatticeFunction::zeros(period); depth as usize + 1],
            ubar: vec![LatticeFunction::zeros(period); (depth_bar + 2) as usize],
        })
    }

    /// The same point with extra zero coordinates down to depths `M'` and
    /// `M̄'`. Depths never shrink.
    pub fn padded(&self, depth: i64, depth_bar: i64) -> Self {
        let mut out = self.clone();
        out.depth = self.depth.max(depth);
        out.depth_bar = self.depth_bar.max(depth_bar);
        out.u.resize(out.depth as usize + 1, LatticeFunction::zeros(self.period));
        out.ubar.resize((out.depth_bar + 2) as usize, LatticeFunction::zeros(self.period));
        out
    }

    /// The same periodic fields on a lattice `copies` times longer.
    pub fn tiled(&self, copies: usize) -> Self {
        let tile = |f: &LatticeFunction<S>| {
            LatticeFunction::from_fn(self.period * copies, |n| f.at(n).clone())
        };
        Self {
            period: self.period * copies,
            depth: self.depth,
            depth_bar: self.depth_bar,
            u: self.u.iter().map(tile).collect(),
            ubar: self.ubar.iter().map(tile).collect(),
        }
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// `M`: the deepest stored `u_i` is `u_{-M}`.
    pub fn depth(&self) -> i64 {
        self.depth
    }

    /// `M̄`: the highest stored `ū_j` is `ū_{M̄}`.
    pub fn depth_bar(&self) -> i64 {
        self.depth_bar
    }

    /// Whether `family_index` is a stored coordinate.
    pub fn stores(&self, family: Family, index: i64) -> bool {
        match family {
            Family::U => index <= 0 && index >= -self.depth,
            Family::UBar => index >= -1 && index <= self.depth_bar,
        }
    }

    fn slot(&self, family: Family, index: i64) -> Result<usize> {
        if !self.stores(family, index) {
            return Err(match (family, index) {
                (Family::U, i) if i > 0 => Error::UnsupportedIndex(format!("u{i}")),
                (Family::UBar, j) if j < -1 => Error::UnsupportedIndex(format!("ubar{j}")),
                _ => Error::DepthExceeded(format!("{}{index}", family.label())),
            });
        }
        Ok(match family {
            Family::U => (-index) as usize,
            Family::UBar => (index + 1) as usize,
        })
    }

    pub fn field(&self, family: Family, index: i64) -> Result<&LatticeFunction<S>> {
        let k = self.slot(family, index)?;
        Ok(match family {
            Family::U => &self.u[k],
            Family::UBar => &self.ubar[k],
        })
    }

    pub fn set_field(&mut self, family: Family, index: i64, f: LatticeFunction<S>) -> Result<()> {
        if f.period() != self.period {
            return Err(Error::PeriodMismatch {
                left: self.period,
                right: f.period(),
            });
        }
        let k = self.slot(family, index)?;
        match family {
            Family::U => self.u[k] = f,
            Family::UBar => self.ubar[k] = f,
        }
        Ok(())
    }

    pub fn u(&self, i: i64) -> Result<&LatticeFunction<S>> {
        self.field(Family::U, i)
    }

    pub fn ubar(&self, j: i64) -> Result<&LatticeFunction<S>> {
        self.field(Family::UBar, j)
    }

    /// Value of a coordinate at a site. `u₁` is the constant 1, `u_k` (k > 1)
    /// and `ū_k` (k < -1) vanish.
    pub fn value(&self, family: Family, index: i64, site: i64) -> Result<S> {
        match (family, index) {
            (Family::U, 1) => Ok(S::one()),
            (Family::U, i) if i > 1 => Ok(S::zero()),
            (Family::UBar, j) if j < -1 => Ok(S::zero()),
            _ => Ok(self.field(family, index)?.at(site).clone()),
        }
    }

    /// Stored coordinates as `(family, index)` in a fixed order.
    pub fn coordinates(&self) -> Vec<(Family, i64)> {
        let mut out: Vec<_> = (-self.depth..=0).rev().map(|i| (Family::U, i)).collect();
        out.extend((-1..=self.depth_bar).map(|j| (Family::UBar, j)));
        out
    }

    fn operators(&self) -> (DiffOp<S>, DiffOp<S>) {
        let n = self.period;
        let mut l_terms = vec![(1, LatticeFunction::constant(n, S::one()))];
        l_terms.extend(self.u.iter().enumerate().map(|(k, f)| (-(k as i64), f.clone())));
        let lb_terms = self
            .ubar
            .iter()
            .enumerate()
            .map(|(k, f)| (k as i64 - 1, f.clone()));
        (DiffOp::from_terms(n, l_terms), DiffOp::from_terms(n, lb_terms))
    }

    /// The point `(L, L̄)` with unknown tails: `L` exact at degrees `>= -M`,
    /// `L̄` exact at degrees `<= M̄`.
    pub fn lax_pair(&self) -> PairElement<S> {
        let (l, lb) = self.operators();
        PairElement {
            plus: l.with_lower_accuracy(-self.depth),
            minus: lb.with_upper_accuracy(self.depth_bar),
        }
    }

    /// The point `(L, L̄)` with all unstored coordinates set to zero.
    pub fn lax_pair_exact(&self) -> PairElement<S> {
        let (l, lb) = self.operators();
        PairElement { plus: l, minus: lb }
    }

    /// Reads a tangent vector in `U` into coordinate form. With `strict`,
    /// every stored coordinate must be exactly known in `tangent`; otherwise
    /// unknown coefficients are an error only when they are truly needed and
    /// anything beyond the stored depth is discarded.
    pub fn tangent_coordinates(&self, tangent: &PairElement<S>, strict: bool) -> Result<Self> {
        let mut out = Self::zero(self.period, self.depth, self.depth_bar)?;
        for (family, index) in self.coordinates() {
            let op = match family {
                Family::U => &tangent.plus,
                Family::UBar => &tangent.minus,
            };
            let coeff = match op.coefficient(index) {
                Ok(c) => c,
                Err(e) if strict => return Err(e),
                Err(_) => LatticeFunction::zeros(self.period),
            };
            out.set_field(family, index, coeff)?;
        }
        Ok(out)
    }

    /// `self + h * direction`, coordinatewise.
    pub fn axpy(&self, h: &S, direction: &Self) -> Result<Self> {
        if self.period != direction.period || self.depth != direction.depth || self.depth_bar != direction.depth_bar {
            return Err(Error::Invalid("state shapes differ".into()));
        }
        let combine = |a: &LatticeFunction<S>, b: &LatticeFunction<S>| a + &b.scale(h);
        Ok(Self {
            period: self.period,
            depth: self.depth,
            depth_bar: self.depth_bar,
            u: self.u.iter().zip(&direction.u).map(|(a, b)| combine(a, b)).collect(),
            ubar: self.ubar.iter().zip(&direction.ubar).map(|(a, b)| combine(a, b)).collect(),
        })
    }

    /// The flow `(L, L̄) -> (L + t, L̄ + t)`: shifts `u₀` and `ū₀` by `t`.
    pub fn translated(&self, t: &S) -> Self {
        let mut out = self.clone();
        let bump = |f: &LatticeFunction<S>| f.map(|v| v.clone() + t.clone());
        out.u[0] = bump(&self.u[0]);
        if self.ubar.len() > 1 {
            out.ubar[1] = bump(&self.ubar[1]);
        }
        out
    }

    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LaxState<T> {
        let conv = |lf: &LatticeFunction<S>| LatticeFunction::new(lf.values().iter().map(&f).collect());
        LaxState {
            period: self.period,
            depth: self.depth,
            depth_bar: self.depth_bar,
            u: self.u.iter().map(conv).collect(),
            ubar: self.ubar.iter().map(conv).collect(),
        }
    }

    /// Largest coordinate magnitude.
    pub fn max_abs(&self) -> f64 {
        self.u
            .iter()
            .chain(&self.ubar)
            .flat_map(|f| f.values().iter().map(|v| v.to_f64().abs()))
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.u
            .iter()
            .chain(&self.ubar)
            .all(|f| f.values().iter().all(|v| v.to_f64().is_finite()))
    }
}

/// Differential of the coordinate functional `u_i(m)` or `ū_j(m)`:
/// `(Λ^{-i} δ(n - m), 0)` or `(0, Λ^{-j} δ(n - m))`.
pub fn coordinate_differential<S: Scalar>(
    period: usize,
    family: Family,
    index: i64,
    site: i64,
) -> PairElement<S> {
    let op = DiffOp::shift_op(period, -index)
        .mul(&DiffOp::function(LatticeFunction::delta(period, site)))
        .expect("exact operators");
    match family {
        Family::U => PairElement {
            plus: op,
            minus: DiffOp::zero(period),
        },
        Family::UBar => PairElement {
            plus: DiffOp::zero(period),
            minus: op,
        },
    }
}
