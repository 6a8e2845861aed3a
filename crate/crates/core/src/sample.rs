//! Seeded generators of small random rational data.
//!
//! Numerators and denominators are kept small (`|num| <= 9`, `1 <= den <= 9`)
//! so exact arithmetic stays cheap in exhaustive suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffop::DiffOp;
use crate::lattice::LatticeFunction;
use crate::pair::PairElement;
use crate::scalar::{rat, Rational};
use crate::state::LaxState;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rational(&mut self) -> Rational {
        let num = self.rng.gen_range(-9..=9);
        let den = self.rng.gen_range(1..=9);
        rat(num, den)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if r != rat(0, 1) {
                return r;
            }
        }
    }

    pub fn integer(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn unit(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    pub fn lattice_function(&mut self, period: usize) -> LatticeFunction<Rational> {
        LatticeFunction::new((0..period).map(|_| self.rational()).collect())
    }

    /// A random state; every stored coordinate is a random field.
    pub fn state(&mut self, period: usize, depth: i64, depth_bar: i64) -> LaxState<Rational> {
        let mut s = LaxState::zero(period, depth, depth_bar).expect("valid shape");
        for (family, index) in s.coordinates() {
            let f = self.lattice_function(period);
            s.set_field(family, index, f).expect("stored coordinate");
        }
        s
    }

    /// A finite-support operator with random coefficients at degrees `lo..=hi`.
    pub fn operator(&mut self, period: usize, lo: i64, hi: i64) -> DiffOp<Rational> {
        let terms: Vec<_> = (lo..=hi).map(|k| (k, self.lattice_function(period))).collect();
        DiffOp::from_terms(period, terms)
    }

    /// A finite-support pair with both components at degrees `lo..=hi`.
    pub fn pair(&mut self, period: usize, lo: i64, hi: i64) -> PairElement<Rational> {
        PairElement {
            plus: self.operator(period, lo, hi),
            minus: self.operator(period, lo, hi),
        }
    }

    /// Values drawn uniformly from `[-amplitude, amplitude]`.
    pub fn float_profile(&mut self, period: usize, amplitude: f64) -> Vec<f64> {
        (0..period).map(|_| amplitude * (2.0 * self.unit() - 1.0)).collect()
    }

    /// A floating-point state with every stored coordinate drawn from
    /// [`Sampler::float_profile`].
    pub fn float_state(&mut self, period: usize, depth: i64, depth_bar: i64, amplitude: f64) -> LaxState<f64> {
        let mut s = LaxState::zero(period, depth, depth_bar).expect("valid shape");
        for (family, index) in s.coordinates() {
            let f = LatticeFunction::new(self.float_profile(period, amplitude));
            s.set_field(family, index, f).expect("stored coordinate");
        }
        s
    }

    /// A covector in `U* = (𝒜⁺)_{≥0} ⊕ (𝒜⁻)_{≤1}` with `X` at degrees
    /// `0..=plus_top` and `X̄` at degrees `minus_bottom..=1`.
    pub fn u_dual_covector(&mut self, period: usize, plus_top: i64, minus_bottom: i64) -> PairElement<Rational> {
        PairElement {
            plus: self.operator(period, 0, plus_top),
            minus: self.operator(period, minus_bottom, 1),
        }
    }
}
