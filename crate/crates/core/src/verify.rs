//! Seeded verification suites for the algebraic identities, with a
//! line-oriented report and a JSON summary.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::brackets::{
    bracket_terms_with, crosscheck_column, jacobi_admissible, jacobiator, BracketChoice, CoordIndex,
    Transcription,
};
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::hierarchy::{hamiltonian_vector, window_coordinates, zs_residual, HamiltonianId, ZsKind};
use crate::io::JsonScalar;
use crate::lattice::LatticeFunction;
use crate::pair::{PairElement, RMap};
use crate::reduction::{
    beta_obstruction, dirac_oracle_outcome, reduced_p1, reduced_p2, reduced_tensor_with,
    shift_pushforward_residual, Boundary,
};
use crate::sample::Sampler;
use crate::scalar::{magnitude, rat, Rational, Scalar};
use crate::state::{coordinate_differential, LaxState};
use crate::tensors::{apply_tensor, TensorId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            _ => Err(Error::Invalid(format!("unknown mode {s:?}, expected exact or float"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Myb,
    Tensors,
    Reduction,
    Crosscheck,
    Jacobi,
    Pencil,
    Recursion,
    Zs,
    Pushforward,
    All,
}

impl Suite {
    /// Every suite `All` expands to, in report order.
    pub const EACH: [Suite; 9] = [
        Suite::Myb,
        Suite::Tensors,
        Suite::Reduction,
        Suite::Crosscheck,
        Suite::Jacobi,
        Suite::Pencil,
        Suite::Recursion,
        Suite::Zs,
        Suite::Pushforward,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Myb => "myb",
            Suite::Tensors => "tensors",
            Suite::Reduction => "reduction",
            Suite::Crosscheck => "crosscheck",
            Suite::Jacobi => "jacobi",
            Suite::Pencil => "pencil",
            Suite::Recursion => "recursion",
            Suite::Zs => "zs",
            Suite::Pushforward => "pushforward",
            Suite::All => "all",
        }
    }

    fn salt(self) -> u64 {
        Suite::EACH.iter().position(|s| *s == self).unwrap_or(9) as u64
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(&[Suite::All])
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub n: usize,
    pub depth: i64,
    pub depth_bar: i64,
    pub seed: u64,
    pub mode: Mode,
    /// Zero threshold in float mode; ignored in exact mode.
    pub tol: f64,
    /// Overrides the per-suite sample count.
    pub samples: Option<usize>,
    /// Range used for the first sum of the third `(u, ū)` bracket.
    pub transcription: Transcription,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            n: 7,
            depth: 4,
            depth_bar: 3,
            seed: 1,
            mode: Mode::Exact,
            tol: 1e-9,
            samples: None,
            transcription: Transcription::Corrected,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.n < 5 {
            return Err(Error::Invalid(format!("lattice size must be at least 5, got {}", self.n)));
        }
        if self.depth < 3 {
            return Err(Error::Invalid(format!("depth must be at least 3, got {}", self.depth)));
        }
        if self.depth_bar < 1 {
            return Err(Error::Invalid(format!("depth-bar must be at least 1, got {}", self.depth_bar)));
        }
        if !(self.tol >= 0.0) || !self.tol.is_finite() {
            return Err(Error::Invalid(format!("tolerance must be finite and non-negative, got {}", self.tol)));
        }
        if self.samples == Some(0) {
            return Err(Error::Invalid("samples must be positive".into()));
        }
        Ok(())
    }

    fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "depth": self.depth,
            "depth_bar": self.depth_bar,
            "seed": self.seed,
            "mode": self.mode.to_string(),
            "tol": self.tol,
            "samples": self.samples,
            "transcription": match self.transcription {
                Transcription::Corrected => "corrected",
                Transcription::Printed => "printed",
            },
        })
    }
}

/// Outcome of one identity over all its cases.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub suite: Suite,
    pub identity: String,
    pub cases: usize,
    pub failures: usize,
    /// Largest residual magnitude seen.
    pub residual: f64,
    /// First counterexample, or a note on skipped cases.
    pub detail: Option<String>,
}

impl Record {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    pub fn line(&self) -> String {
        let mut out = format!(
            "{} {}/{} cases={} failures={} residual={:e}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.identity,
            self.cases,
            self.failures,
            self.residual
        );
        if let Some(d) = &self.detail {
            out.push_str(" | ");
            out.push_str(d);
        }
        out
    }

    fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "identity": self.identity,
            "passed": self.passed(),
            "cases": self.cases,
            "failures": self.failures,
            "residual": self.residual,
            "detail": self.detail,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub suite: Suite,
    pub config: Config,
    pub records: Vec<Record>,
}

impl Report {
    pub fn passed(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(Record::passed)
    }

    pub fn record(&self, suite: Suite, identity: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.suite == suite && r.identity == identity)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.line());
            out.push('\n');
        }
        let failed = self.records.iter().filter(|r| !r.passed()).count();
        out.push_str(&format!(
            "{} {}: {} identities, {} failed\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.records.len(),
            failed
        ));
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "config": self.config.to_json(),
            "passed": self.passed(),
            "records": self.records.iter().map(Record::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Runs a suite, or all of them, under the configuration.
pub fn run(suite: Suite, config: &Config) -> Result<Report> {
    config.validate()?;
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    let mut records = Vec::new();
    for s in suites {
        records.extend(match config.mode {
            Mode::Exact => Ctx::<Rational>::new(config, |x| x.clone()).run(s),
            Mode::Float => Ctx::<f64>::new(config, |x| x.to_f64()).run(s),
        });
    }
    Ok(Report {
        suite,
        config: config.clone(),
        records,
    })
}

fn show<S: JsonScalar>(x: &S) -> String {
    match x.to_json() {
        Value::String(s) => s,
        v => v.to_string(),
    }
}

#[derive(Default)]
struct Tally {
    cases: usize,
    failures: usize,
    residual: f64,
    detail: Option<String>,
    skipped: usize,
}

impl Tally {
    fn check(&mut self, ok: bool, residual: f64, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if residual.is_nan() {
            self.residual = f64::NAN;
        } else if !self.residual.is_nan() {
            self.residual = self.residual.max(residual);
        }
        if !ok {
            self.failures += 1;
            if self.detail.is_none() {
                self.detail = Some(describe());
            }
        }
    }

    fn error(&mut self, e: &Error, describe: impl FnOnce() -> String) {
        self.check(false, f64::NAN, || format!("{}: {e}", describe()));
    }

    fn scalar<S: Scalar>(&mut self, x: Result<S>, tol: f64, describe: impl FnOnce() -> String) {
        match x {
            Ok(v) => self.check(v.is_negligible(tol), magnitude(&v), describe),
            Err(e) => self.error(&e, describe),
        }
    }

    fn pair<S: Scalar>(&mut self, x: Result<PairElement<S>>, tol: f64, describe: impl FnOnce() -> String) {
        match x {
            Ok(p) => {
                let r = p.max_abs();
                let ok = if S::EXACT { p.vanishes_where_known() } else { r <= tol };
                self.check(ok, r, describe)
            }
            Err(e) => self.error(&e, describe),
        }
    }

    fn op<S: Scalar>(&mut self, x: Result<DiffOp<S>>, tol: f64, describe: impl FnOnce() -> String) {
        match x {
            Ok(p) => {
                let r = p.max_abs();
                let ok = if S::EXACT { p.vanishes_where_known() } else { r <= tol };
                self.check(ok, r, describe)
            }
            Err(e) => self.error(&e, describe),
        }
    }

    fn record(self, suite: Suite, identity: impl Into<String>) -> Record {
        let detail = match (self.detail, self.skipped) {
            (Some(d), _) => Some(d),
            (None, 0) => None,
            (None, k) => Some(format!("{k} cases outside the known window skipped")),
        };
        Record {
            suite,
            identity: identity.into(),
            cases: self.cases,
            failures: self.failures,
            residual: self.residual,
            detail,
        }
    }
}

/// Extra depth given to states before reduced tensors are paired with
/// coordinate differentials, so every pairing reads known coefficients.
const PAD: i64 = 8;

struct Ctx<'a, S> {
    cfg: &'a Config,
    lift: fn(&Rational) -> S,
    tol: f64,
}

impl<'a, S: JsonScalar> Ctx<'a, S> {
    fn new(cfg: &'a Config, lift: fn(&Rational) -> S) -> Self {
        let tol = if S::EXACT { 0.0 } else { cfg.tol };
        Self { cfg, lift, tol }
    }

    fn run(&self, suite: Suite) -> Vec<Record> {
        match suite {
            Suite::Myb => self.myb(),
            Suite::Tensors => self.tensors(),
            Suite::Reduction => self.reduction(),
            Suite::Crosscheck => self.crosscheck(),
            Suite::Jacobi => self.jacobi(),
            Suite::Pencil => self.pencil(),
            Suite::Recursion => self.recursion(),
            Suite::Zs => self.zs(),
            Suite::Pushforward => self.pushforward(),
            Suite::All => Suite::EACH.iter().flat_map(|s| self.run(*s)).collect(),
        }
    }

    fn sampler(&self, suite: Suite) -> Sampler {
        Sampler::new(self.cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(suite.salt()))
    }

    fn samples(&self, default: usize) -> usize {
        self.cfg.samples.unwrap_or(default)
    }

    fn scalar(&self, x: &Rational) -> S {
        (self.lift)(x)
    }

    fn state(&self, sampler: &mut Sampler, depth: i64, depth_bar: i64) -> LaxState<S> {
        sampler.state(self.cfg.n, depth, depth_bar).convert(self.lift)
    }

    fn pair(&self, p: PairElement<Rational>) -> PairElement<S> {
        p.convert(self.lift)
    }

    /// `δ_s Λ^k` in either component for `|k| <= reach` and every site.
    fn basis(&self, reach: i64) -> Vec<(String, PairElement<S>)> {
        let n = self.cfg.n;
        let mut out = Vec::new();
        for (name, plus) in [("plus", true), ("minus", false)] {
            for k in -reach..=reach {
                for s in 0..n as i64 {
                    let op = DiffOp::monomial(LatticeFunction::delta(n, s), k);
                    let e = if plus {
                        PairElement {
                            plus: op,
                            minus: DiffOp::zero(n),
                        }
                    } else {
                        PairElement {
                            plus: DiffOp::zero(n),
                            minus: op,
                        }
                    };
                    out.push((format!("{name}:d{s}L^{k}"), e));
                }
            }
        }
        out
    }

    fn myb(&self) -> Vec<Record> {
        let suite = Suite::Myb;
        let n = self.cfg.n;
        let tol = self.tol;
        let mut sampler = self.sampler(suite);
        let pairs: Vec<_> = (0..self.samples(100))
            .map(|_| (self.pair(sampler.pair(n, -2, 2)), self.pair(sampler.pair(n, -2, 2))))
            .collect();
        let basis = self.basis(3);
        let mut out = Vec::new();
        for (map, name) in [(RMap::R, "R"), (RMap::A, "A")] {
            let mut t = Tally::default();
            for (i, (z, w)) in pairs.iter().enumerate() {
                t.pair(PairElement::myb_residual(map, z, w), tol, || format!("random pair {i}"));
            }
            out.push(t.record(suite, format!("yang-baxter-{name}-random")));
            let mut t = Tally::default();
            for (lz, z) in &basis {
                for (lw, w) in &basis {
                    t.pair(PairElement::myb_residual(map, z, w), tol, || format!("Z={lz} W={lw}"));
                }
            }
            out.push(t.record(suite, format!("yang-baxter-{name}-basis")));
        }

        let mut adjoint = Tally::default();
        let mut antisym = Tally::default();
        for (lz, z) in &basis {
            for (lw, w) in &basis {
                let r = (|| Ok(z.r_matrix()?.inner(w)? - z.inner(&w.r_adjoint()?)?))();
                adjoint.scalar(r, tol, || format!("Z={lz} W={lw}"));
                let a = (|| Ok(z.skew_part()?.inner(w)? + z.inner(&w.skew_part()?)?))();
                antisym.scalar(a, tol, || format!("Z={lz} W={lw}"));
            }
        }
        out.push(adjoint.record(suite, "adjoint-R-basis"));
        out.push(antisym.record(suite, "A-antisymmetric-basis"));

        let mut skew = Tally::default();
        let half = S::from_ratio(1, 2);
        for (lz, z) in &basis {
            let r = (|| Ok(&z.skew_part()? - &(&z.r_matrix()? - &z.r_adjoint()?).scale(&half)))();
            skew.pair(r, tol, || format!("Z={lz}"));
        }
        out.push(skew.record(suite, "A-is-skew-part-basis"));
        out
    }

    fn tensors(&self) -> Vec<Record> {
        let suite = Suite::Tensors;
        let (n, tol) = (self.cfg.n, self.tol);
        let mut sampler = self.sampler(suite);
        let cases: Vec<_> = (0..self.samples(20))
            .map(|_| {
                let st = self.state(&mut sampler, self.cfg.depth, self.cfg.depth_bar);
                let f = self.pair(sampler.pair(n, -2, 2));
                let g = self.pair(sampler.pair(n, -2, 2));
                let uf = self.pair(sampler.u_dual_covector(n, 2, -1));
                let ug = self.pair(sampler.u_dual_covector(n, 2, -1));
                (st, f, g, uf, ug)
            })
            .collect();
        let mut out = Vec::new();
        for k in TensorId::ALL {
            let mut t = Tally::default();
            for (i, (st, f, g, _, _)) in cases.iter().enumerate() {
                let point = st.lax_pair_exact();
                let r = (|| Ok(f.inner(&apply_tensor(k, &point, g)?)? + g.inner(&apply_tensor(k, &point, f)?)?))();
                t.scalar(r, tol, || format!("sample {i}"));
            }
            out.push(t.record(suite, format!("{k}-skew")));
        }
        for k in TensorId::ALL {
            let mut t = Tally::default();
            for (i, (st, _, _, f, g)) in cases.iter().enumerate() {
                let padded = st.padded(st.depth() + PAD, st.depth_bar() + PAD);
                let p = |x: &PairElement<S>| reduced_tensor_with(k, &padded, x, Boundary::Local);
                let r = (|| Ok(f.inner(&p(g)?)? + g.inner(&p(f)?)?))();
                t.scalar(r, tol, || format!("sample {i}"));
            }
            out.push(t.record(suite, format!("{k}-reduced-skew")));
        }
        out
    }

    fn reduction(&self) -> Vec<Record> {
        let suite = Suite::Reduction;
        let (n, tol) = (self.cfg.n, self.tol);
        let mut sampler = self.sampler(suite);
        let mut p1 = Tally::default();
        let mut p2 = Tally::default();
        let mut p3 = Tally::default();
        let mut p3_adm = Tally::default();
        for i in 0..self.samples(50) {
            let st = self.state(&mut sampler, self.cfg.depth, self.cfg.depth_bar);
            let x = self.pair(sampler.u_dual_covector(n, 2, -1));
            let y = self.pair(sampler.u_dual_covector(n, 2, -1));
            let padded = st.padded(st.depth() + PAD, st.depth_bar() + PAD);
            let describe = || format!("sample {i}");

            for (tally, k) in [(&mut p1, TensorId::P1), (&mut p2, TensorId::P2)] {
                let closed = match k {
                    TensorId::P1 => reduced_p1(&padded, &x),
                    _ => reduced_p2(&padded, &x),
                };
                let r = (|| {
                    let out = dirac_oracle_outcome(k, &st, &x, None, tol)?;
                    if !out.ambiguity.is_empty() {
                        return Err(Error::StarConditionViolated("kernel".into()));
                    }
                    Ok(&closed? - &out.value)
                })();
                tally.pair(r, tol, describe);
            }

            match dirac_oracle_outcome(TensorId::P3, &st, &x, None, tol) {
                Ok(out) if out.ambiguity.is_empty() => {
                    let r = reduced_tensor_with(TensorId::P3, &padded, &x, Boundary::Local).map(|c| &c - &out.value);
                    p3.pair(r, tol, describe);
                }
                Ok(out) => p3.check(false, f64::NAN, || {
                    format!("sample {i}: oracle value fixed only up to {} directions", out.ambiguity.len())
                }),
                Err(e) => {
                    let beta = beta_obstruction(&st, &x).map(|b| show(&b)).unwrap_or_default();
                    p3.check(false, f64::NAN, || format!("sample {i}: {e} (obstruction {beta})"));
                }
            }

            let r = (|| {
                let (ox, oy) = (beta_obstruction(&st, &x)?, beta_obstruction(&st, &y)?);
                if oy.is_negligible(tol) {
                    return Ok(None);
                }
                let adm = &x - &y.scale(&(ox / oy));
                let out = dirac_oracle_outcome(TensorId::P3, &st, &adm, None, tol)?;
                let closed = reduced_tensor_with(TensorId::P3, &padded, &adm, Boundary::Local)?;
                Ok(Some(out.agrees_modulo_ambiguity(&closed, tol)))
            })();
            match r {
                Ok(Some(ok)) => p3_adm.check(ok, 0.0, describe),
                Ok(None) => p3_adm.skipped += 1,
                Err(e) => p3_adm.error(&e, describe),
            }
        }
        vec![
            p1.record(suite, "P1-oracle"),
            p2.record(suite, "P2-oracle"),
            p3.record(suite, "P3-oracle"),
            p3_adm.record(suite, "P3-oracle-unobstructed-modulo-kernel"),
        ]
    }

    fn crosscheck(&self) -> Vec<Record> {
        let suite = Suite::Crosscheck;
        let n = self.cfg.n as i64;
        let tol = self.tol;
        let transcription = self.cfg.transcription;
        let mut sampler = self.sampler(suite);
        let coords: Vec<CoordIndex> = (0..n)
            .flat_map(|m| {
                (-3..=1)
                    .map(move |i| CoordIndex::u(i, m))
                    .chain((-1..=1).map(move |j| CoordIndex::ubar(j, m)))
            })
            .collect();
        // The third bracket of u₋₃ with u₋₃ reads u₋₈.
        let states: Vec<_> = (0..self.samples(10))
            .map(|_| self.state(&mut sampler, self.cfg.depth.max(8), self.cfg.depth_bar.max(4)))
            .collect();
        let mut out = Vec::new();
        for k in TensorId::ALL {
            let mut t = Tally::default();
            for (i, st) in states.iter().enumerate() {
                for b in &coords {
                    match crosscheck_column(k, &coords, b, st, transcription) {
                        Ok(col) => {
                            for (a, v) in coords.iter().zip(col) {
                                t.scalar(Ok(v.clone()), tol, || mismatch(k, a, b, i, &v, transcription));
                            }
                        }
                        Err(e) => t.error(&e, || format!("state {i} {k} second argument {b}")),
                    }
                }
            }
            out.push(t.record(suite, format!("{k}-formula-vs-tensor")));
        }
        out
    }

    /// Random admissible triples in a state deep enough for every nested
    /// bracket: `u` indices down to -2 need `M >= 12`, `ū` up to 1 need 9.
    fn triples(&self, sampler: &mut Sampler, count: usize) -> Vec<(LaxState<S>, [CoordIndex; 3])> {
        let n = self.cfg.n as i64;
        let mut out = Vec::new();
        let mut state = None;
        while out.len() < count {
            if out.len() % 40 == 0 || state.is_none() {
                state = Some(self.state(sampler, self.cfg.depth.max(12), self.cfg.depth_bar.max(9)));
            }
            let st = state.as_ref().expect("sampled above");
            let mut pick = || {
                let site = sampler.integer(0, n - 1);
                if sampler.integer(0, 1) == 0 {
                    CoordIndex::u(sampler.integer(-2, 0), site)
                } else {
                    CoordIndex::ubar(sampler.integer(-1, 1), site)
                }
            };
            let triple = [pick(), pick(), pick()];
            if jacobi_admissible([&triple[0], &triple[1], &triple[2]], st) {
                out.push((st.clone(), triple));
            }
        }
        out
    }

    fn jacobi_tally(&self, choice: &BracketChoice<S>, triples: &[(LaxState<S>, [CoordIndex; 3])]) -> Tally {
        let mut t = Tally::default();
        for (st, [a, b, c]) in triples {
            t.scalar(jacobiator(choice, a, b, c, st), self.tol, || format!("{a} {b} {c}"));
        }
        t
    }

    fn jacobi(&self) -> Vec<Record> {
        let suite = Suite::Jacobi;
        let mut sampler = self.sampler(suite);
        let triples = self.triples(&mut sampler, self.samples(200));
        TensorId::ALL
            .iter()
            .map(|k| {
                self.jacobi_tally(&BracketChoice::Single(*k), &triples)
                    .record(suite, format!("{k}-jacobiator"))
            })
            .collect()
    }

    fn pencil(&self) -> Vec<Record> {
        let suite = Suite::Pencil;
        let mut sampler = self.sampler(suite);
        (0..5)
            .map(|_| {
                let (lambda, mu) = (sampler.nonzero_rational(), sampler.nonzero_rational());
                let name = format!(
                    "P1+({})P2+({})P3-jacobiator",
                    crate::scalar::rational_to_string(&lambda),
                    crate::scalar::rational_to_string(&mu)
                );
                let triples = self.triples(&mut sampler, self.samples(200));
                let choice = BracketChoice::Pencil {
                    lambda: self.scalar(&lambda),
                    mu: self.scalar(&mu),
                };
                self.jacobi_tally(&choice, &triples).record(suite, name)
            })
            .collect()
    }

    fn recursion(&self) -> Vec<Record> {
        let suite = Suite::Recursion;
        let tol = self.tol;
        let mut sampler = self.sampler(suite);
        let states: Vec<_> = (0..self.samples(3))
            .map(|_| self.state(&mut sampler, self.cfg.depth.max(7), self.cfg.depth_bar.max(6)))
            .collect();
        let mut out = Vec::new();
        for bar in [false, true] {
            let h = |p: u32| if bar { HamiltonianId::hbar(p) } else { HamiltonianId::h(p) };
            for p in 1..=3u32 {
                let mut pairs = vec![(TensorId::P1, p, TensorId::P2, p - 1)];
                if p >= 2 {
                    pairs.push((TensorId::P2, p - 1, TensorId::P3, p - 2));
                }
                for (k1, p1, k2, p2) in pairs {
                    let mut t = Tally::default();
                    for (i, st) in states.iter().enumerate() {
                        let vectors = (|| {
                            Ok((
                                hamiltonian_vector(k1, h(p1), st, Boundary::Local)?,
                                hamiltonian_vector(k2, h(p2), st, Boundary::Local)?,
                            ))
                        })();
                        let (v1, v2) = match vectors {
                            Ok(v) => v,
                            Err(e) => {
                                t.error(&e, || format!("state {i}"));
                                continue;
                            }
                        };
                        for a in window_coordinates(st) {
                            let da = coordinate_differential(st.period(), a.family, a.index, a.site);
                            match (da.inner(&v1), da.inner(&v2)) {
                                (Ok(x), Ok(y)) => t.scalar(Ok(x - y), tol, || format!("state {i} at {a}")),
                                (Err(Error::TruncationViolation { .. }), _)
                                | (_, Err(Error::TruncationViolation { .. })) => t.skipped += 1,
                                (Err(e), _) | (_, Err(e)) => t.error(&e, || format!("state {i} at {a}")),
                            }
                        }
                    }
                    let name = format!("{{.,{}}}{}={{.,{}}}{}", h(p1), k1.index(), h(p2), k2.index());
                    out.push(t.record(suite, name));
                }
            }
            let mut t = Tally::default();
            for (i, st) in states.iter().enumerate() {
                match hamiltonian_vector(TensorId::P1, h(0), st, Boundary::Local) {
                    Ok(v) => t.pair(Ok(v), tol, || format!("state {i}")),
                    Err(e) => t.error(&e, || format!("state {i}")),
                }
            }
            out.push(t.record(suite, format!("{}-casimir-P1", h(0))));
        }
        out
    }

    fn zs(&self) -> Vec<Record> {
        let suite = Suite::Zs;
        let mut sampler = self.sampler(suite);
        let states: Vec<_> = (0..self.samples(3))
            .map(|_| self.state(&mut sampler, self.cfg.depth.max(7), self.cfg.depth_bar.max(6)))
            .collect();
        let mut out = Vec::new();
        for (kind, name) in [(ZsKind::Pp, "tt"), (ZsKind::BarBar, "tbar-tbar"), (ZsKind::Mixed, "t-tbar")] {
            for (p, q) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                let mut t = Tally::default();
                for (i, st) in states.iter().enumerate() {
                    t.op(zs_residual(p, q, kind, st), self.tol, || format!("state {i}"));
                }
                out.push(t.record(suite, format!("zero-curvature-{name}-p{p}-q{q}")));
            }
        }
        out
    }

    fn pushforward(&self) -> Vec<Record> {
        let suite = Suite::Pushforward;
        let n = self.cfg.n;
        let mut sampler = self.sampler(suite);
        let cases: Vec<_> = (0..self.samples(10))
            .map(|_| {
                let st = self.state(&mut sampler, self.cfg.depth, self.cfg.depth_bar);
                let x = self.pair(sampler.u_dual_covector(n, 2, -1));
                (st.padded(st.depth() + PAD, st.depth_bar() + PAD), x)
            })
            .collect();
        let mut out = Vec::new();
        for (t_label, t_val) in [("1", rat(1, 1)), ("-3/7", rat(-3, 7))] {
            let t_s = self.scalar(&t_val);
            let mut tallies: [Tally; 3] = Default::default();
            for (i, (st, x)) in cases.iter().enumerate() {
                match shift_pushforward_residual(st, &t_s, x, Boundary::Local) {
                    Ok(rs) => {
                        for (tally, r) in tallies.iter_mut().zip(rs) {
                            tally.pair(Ok(r), self.tol, || format!("sample {i}"));
                        }
                    }
                    Err(e) => {
                        for tally in &mut tallies {
                            tally.error(&e, || format!("sample {i}"));
                        }
                    }
                }
            }
            for (k, tally) in TensorId::ALL.iter().zip(tallies) {
                out.push(tally.record(suite, format!("{k}-shift-t={t_label}")));
            }
        }
        out
    }
}

fn mismatch<S: JsonScalar>(
    k: TensorId,
    a: &CoordIndex,
    b: &CoordIndex,
    state: usize,
    value: &S,
    transcription: Transcription,
) -> String {
    let mut out = format!("state {state} {k} {{{a},{b}}}: formula - tensor = {}", show(value));
    let key = |c: &CoordIndex| (c.family, c.index);
    let (Ok(used), Ok(other)) = (
        bracket_terms_with(k, key(a), key(b), transcription),
        bracket_terms_with(k, key(a), key(b), match transcription {
            Transcription::Corrected => Transcription::Printed,
            Transcription::Printed => Transcription::Corrected,
        }),
    ) else {
        return out;
    };
    if transcription == Transcription::Printed {
        let missing: Vec<String> = other.iter().filter(|t| !used.contains(t)).map(|t| t.to_string()).collect();
        let extra: Vec<String> = used.iter().filter(|t| !other.contains(t)).map(|t| t.to_string()).collect();
        if !missing.is_empty() {
            out.push_str(&format!("; terms missing from the printed range: {}", missing.join(" + ")));
        }
        if !extra.is_empty() {
            out.push_str(&format!("; terms only in the printed range: {}", extra.join(" + ")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(samples: usize) -> Config {
        Config {
            n: 5,
            samples: Some(samples),
            ..Config::default()
        }
    }

    #[test]
    fn parses_names() {
        assert_eq!("pushforward".parse::<Suite>().unwrap(), Suite::Pushforward);
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("nope".parse::<Suite>().is_err());
        assert_eq!("float".parse::<Mode>().unwrap(), Mode::Float);
    }

    #[test]
    fn rejects_bad_configs() {
        for cfg in [
            Config { n: 4, ..Config::default() },
            Config { depth: 2, ..Config::default() },
            Config { tol: -1.0, ..Config::default() },
            Config { samples: Some(0), ..Config::default() },
        ] {
            assert!(run(Suite::Myb, &cfg).is_err());
        }
    }

    #[test]
    fn myb_passes_and_is_deterministic() {
        let cfg = small(5);
        let a = run(Suite::Myb, &cfg).unwrap();
        let b = run(Suite::Myb, &cfg).unwrap();
        assert!(a.passed(), "{}", a.text());
        assert_eq!(a.text(), b.text());
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn float_mode_zs() {
        let cfg = Config {
            mode: Mode::Float,
            ..small(1)
        };
        let r = run(Suite::Zs, &cfg).unwrap();
        assert!(r.passed(), "{}", r.text());
    }

    #[test]
    fn failing_record_carries_a_counterexample() {
        let mut t = Tally::default();
        t.check(true, 0.0, || unreachable!());
        t.check(false, 2.0, || "second".into());
        t.check(false, 1.0, || "third".into());
        let r = t.record(Suite::Zs, "x");
        assert!(!r.passed());
        assert_eq!(r.failures, 2);
        assert_eq!(r.residual, 2.0);
        assert!(r.line().starts_with("FAIL zs/x cases=3 failures=2"));
        assert!(r.line().ends_with("| second"));
    }
}
