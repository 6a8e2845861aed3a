use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use toda2d::brackets::{self, CoordIndex, TensorRoute, Transcription};
use toda2d::hierarchy::{self, FlowSpec, HamiltonianId};
use toda2d::io;
use toda2d::pair::RMap;
use toda2d::reduction::{self, Boundary};
use toda2d::sample::Sampler;
use toda2d::scalar::{parse_rational, rational_to_string};
use toda2d::verify::{self as suites, Config, Mode, Suite};
use toda2d::{DiffOp as CoreOp, Error, Family, LatticeFunction, LaxState, PairElement, Rational, TensorId};

fn err(e: Error) -> PyErr {
    match e {
        Error::StepRejected { .. } => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn value_err(msg: impl Into<String>) -> PyErr {
    PyValueError::new_err(msg.into())
}

/// Accepts int, str ("3/4") or fractions.Fraction.
fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    parse_rational(&text).ok_or_else(|| value_err(format!("not a rational number: {text}")))
}

fn to_fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((rational_to_string(r),))
}

fn lattice(values: &[Bound<'_, PyAny>]) -> PyResult<LatticeFunction<Rational>> {
    Ok(LatticeFunction::new(values.iter().map(to_rational).collect::<PyResult<_>>()?))
}

fn fractions<'py>(py: Python<'py>, f: &LatticeFunction<Rational>) -> PyResult<Vec<Bound<'py, PyAny>>> {
    f.values().iter().map(|v| to_fraction(py, v)).collect()
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((v.to_string(),))
}

fn tensor(k: u8) -> PyResult<TensorId> {
    TensorId::from_index(k).map_err(err)
}

fn transcription(s: &str) -> PyResult<Transcription> {
    match s {
        "corrected" => Ok(Transcription::Corrected),
        "printed" => Ok(Transcription::Printed),
        _ => Err(value_err(format!("unknown transcription {s:?}"))),
    }
}

fn boundary(s: &str) -> PyResult<Boundary> {
    match s {
        "periodic" => Ok(Boundary::Periodic),
        "local" => Ok(Boundary::Local),
        _ => match s.strip_prefix("open:").and_then(|c| c.parse().ok()) {
            Some(cut) => Ok(Boundary::Open { cut }),
            None => Err(value_err(format!("unknown boundary {s:?}, expected periodic, local or open:<cut>"))),
        },
    }
}

fn coordinate(label: &str, site: i64) -> PyResult<CoordIndex> {
    let (family, index) = Family::parse_field(label).map_err(err)?;
    Ok(CoordIndex { family, index, site })
}

/// A point of the reduced phase space with exact rational coordinates.
#[pyclass(module = "toda2d_py", skip_from_py_object)]
#[derive(Clone)]
struct State {
    inner: LaxState<Rational>,
}

#[pymethods]
impl State {
    #[new]
    fn new(n: usize, depth: i64, depth_bar: i64) -> PyResult<Self> {
        Ok(Self {
            inner: LaxState::zero(n, depth, depth_bar).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (n, depth, depth_bar, seed=1))]
    fn random(n: usize, depth: i64, depth_bar: i64, seed: u64) -> PyResult<Self> {
        LaxState::<Rational>::zero(n, depth, depth_bar).map_err(err)?;
        Ok(Self {
            inner: Sampler::new(seed).state(n, depth, depth_bar),
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| value_err(e.to_string()))?;
        Ok(Self {
            inner: io::state_from_json(&v).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        io::state_to_json(&self.inner).to_string()
    }

    #[getter]
    fn period(&self) -> usize {
        self.inner.period()
    }

    #[getter]
    fn depth(&self) -> i64 {
        self.inner.depth()
    }

    #[getter]
    fn depth_bar(&self) -> i64 {
        self.inner.depth_bar()
    }

    /// Labels of the stored coordinates, e.g. "u-1" or "ubar0".
    fn coordinates(&self) -> Vec<String> {
        self.inner
            .coordinates()
            .into_iter()
            .map(|(f, i)| format!("{}{i}", f.label()))
            .collect()
    }

    fn field<'py>(&self, py: Python<'py>, label: &str) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let (family, index) = Family::parse_field(label).map_err(err)?;
        fractions(py, self.inner.field(family, index).map_err(err)?)
    }

    fn set_field(&mut self, label: &str, values: Vec<Bound<'_, PyAny>>) -> PyResult<()> {
        let (family, index) = Family::parse_field(label).map_err(err)?;
        let f = lattice(&values)?;
        if f.period() != self.inner.period() {
            return Err(value_err(format!("expected {} values, got {}", self.inner.period(), f.period())));
        }
        self.inner.set_field(family, index, f).map_err(err)
    }

    /// The hierarchy Hamiltonian named like "h2" or "hbar1".
    fn hamiltonian<'py>(&self, py: Python<'py>, label: &str) -> PyResult<Bound<'py, PyAny>> {
        let h: HamiltonianId = label.parse().map_err(err)?;
        to_fraction(py, &hierarchy::hamiltonian(h, &self.inner).map_err(err)?)
    }

    /// Coordinate velocities of a flow such as "t1" or "tbar2".
    fn velocity(&self, flow: &str) -> PyResult<State> {
        let flow: FlowSpec = flow.parse().map_err(err)?;
        Ok(State {
            inner: hierarchy::velocity(flow, &self.inner).map_err(err)?,
        })
    }

    /// The pair (L, L̄) as an element of the pair algebra.
    fn lax_pair(&self) -> Pair {
        Pair {
            inner: self.inner.lax_pair(),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "State(n={}, depth={}, depth_bar={})",
            self.inner.period(),
            self.inner.depth(),
            self.inner.depth_bar()
        )
    }

    fn __eq__(&self, other: &State) -> bool {
        self.inner == other.inner
    }
}

/// A difference operator with rational lattice-function coefficients.
#[pyclass(module = "toda2d_py", name = "DiffOp", skip_from_py_object)]
#[derive(Clone)]
struct PyDiffOp {
    inner: CoreOp<Rational>,
}

impl PyDiffOp {
    fn wrap(r: toda2d::Result<CoreOp<Rational>>) -> PyResult<Self> {
        Ok(Self { inner: r.map_err(err)? })
    }
}

#[pymethods]
impl PyDiffOp {
    /// `terms` maps a shift degree k to the N values of the coefficient of Λ^k.
    #[new]
    #[pyo3(signature = (n, terms=BTreeMap::new()))]
    fn new(n: usize, terms: BTreeMap<i64, Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let mut list = Vec::new();
        for (k, values) in terms {
            let f = lattice(&values)?;
            if f.period() != n {
                return Err(value_err(format!("coefficient of degree {k} has {} values, expected {n}", f.period())));
            }
            list.push((k, f));
        }
        Ok(Self {
            inner: CoreOp::from_terms(n, list),
        })
    }

    #[staticmethod]
    fn shift(n: usize, k: i64) -> Self {
        Self {
            inner: CoreOp::shift_op(n, k),
        }
    }

    #[getter]
    fn period(&self) -> usize {
        self.inner.period()
    }

    fn degrees(&self) -> Vec<i64> {
        self.inner.terms().map(|(k, _)| k).collect()
    }

    fn coefficient<'py>(&self, py: Python<'py>, k: i64) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, &self.inner.coefficient(k).map_err(err)?)
    }

    fn residue<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, &self.inner.residue().map_err(err)?)
    }

    fn trace<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_fraction(py, &self.inner.trace().map_err(err)?)
    }

    fn plus(&self) -> PyResult<Self> {
        Self::wrap(self.inner.plus())
    }

    fn minus(&self) -> PyResult<Self> {
        Self::wrap(self.inner.minus())
    }

    fn commutator(&self, other: &PyDiffOp) -> PyResult<Self> {
        Self::wrap(self.inner.commutator(&other.inner))
    }

    fn power(&self, p: u32) -> PyResult<Self> {
        Self::wrap(self.inner.power(p))
    }

    fn to_json(&self) -> String {
        io::diffop_to_json(&self.inner).to_string()
    }

    fn __add__(&self, other: &PyDiffOp) -> PyResult<Self> {
        Self::wrap(self.inner.checked_add(&other.inner))
    }

    fn __sub__(&self, other: &PyDiffOp) -> PyResult<Self> {
        Self::wrap(self.inner.checked_sub(&other.inner))
    }

    fn __mul__(&self, other: &PyDiffOp) -> PyResult<Self> {
        Self::wrap(self.inner.mul(&other.inner))
    }

    fn __neg__(&self) -> Self {
        Self { inner: -&self.inner }
    }

    fn __eq__(&self, other: &PyDiffOp) -> bool {
        self.inner.agrees_with(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.inner)
    }
}

/// An element (X, X̄) of the pair algebra.
#[pyclass(module = "toda2d_py", skip_from_py_object)]
#[derive(Clone)]
struct Pair {
    inner: PairElement<Rational>,
}

impl Pair {
    fn wrap(r: toda2d::Result<PairElement<Rational>>) -> PyResult<Self> {
        Ok(Self { inner: r.map_err(err)? })
    }
}

fn rmap(name: &str) -> PyResult<RMap> {
    match name {
        "R" => Ok(RMap::R),
        "A" => Ok(RMap::A),
        _ => Err(value_err(format!("unknown map {name:?}, expected R or A"))),
    }
}

#[pymethods]
impl Pair {
    #[new]
    fn new(plus: &PyDiffOp, minus: &PyDiffOp) -> PyResult<Self> {
        Self::wrap(PairElement::new(plus.inner.clone(), minus.inner.clone()))
    }

    #[getter]
    fn plus(&self) -> PyDiffOp {
        PyDiffOp {
            inner: self.inner.plus.clone(),
        }
    }

    #[getter]
    fn minus(&self) -> PyDiffOp {
        PyDiffOp {
            inner: self.inner.minus.clone(),
        }
    }

    fn r_matrix(&self) -> PyResult<Self> {
        Self::wrap(self.inner.r_matrix())
    }

    fn r_adjoint(&self) -> PyResult<Self> {
        Self::wrap(self.inner.r_adjoint())
    }

    fn skew_part(&self) -> PyResult<Self> {
        Self::wrap(self.inner.skew_part())
    }

    fn commutator(&self, other: &Pair) -> PyResult<Self> {
        Self::wrap(self.inner.commutator(&other.inner))
    }

    fn inner_product<'py>(&self, py: Python<'py>, other: &Pair) -> PyResult<Bound<'py, PyAny>> {
        to_fraction(py, &self.inner.inner(&other.inner).map_err(err)?)
    }

    /// Left side of the modified Yang–Baxter equation for `R` or `A`.
    #[staticmethod]
    #[pyo3(signature = (z, w, map="R"))]
    fn myb_residual(z: &Pair, w: &Pair, map: &str) -> PyResult<Self> {
        Self::wrap(PairElement::myb_residual(rmap(map)?, &z.inner, &w.inner))
    }

    fn is_zero(&self) -> bool {
        self.inner.vanishes_where_known()
    }

    fn to_json(&self) -> String {
        io::pair_to_json(&self.inner).to_string()
    }

    fn __add__(&self, other: &Pair) -> PyResult<Self> {
        self.inner.plus.same_period(&other.inner.plus).map_err(err)?;
        Ok(Self {
            inner: &self.inner + &other.inner,
        })
    }

    fn __sub__(&self, other: &Pair) -> PyResult<Self> {
        self.inner.plus.same_period(&other.inner.plus).map_err(err)?;
        Ok(Self {
            inner: &self.inner - &other.inner,
        })
    }

    fn __eq__(&self, other: &Pair) -> bool {
        self.inner.agrees_with(&other.inner)
    }
}

/// Term list of `{a(n), b(m)}_k` as a list of dicts.
#[pyfunction]
#[pyo3(signature = (k, a, b, transcription="corrected"))]
fn bracket_terms<'py>(py: Python<'py>, k: u8, a: &str, b: &str, transcription: &str) -> PyResult<Bound<'py, PyAny>> {
    let a = Family::parse_field(a).map_err(err)?;
    let b = Family::parse_field(b).map_err(err)?;
    let terms = brackets::bracket_terms_with(tensor(k)?, a, b, self::transcription(transcription)?).map_err(err)?;
    json_to_py(py, &brackets::terms_to_json(&terms))
}

/// `{a(n), b(m)}_k` evaluated from the coordinate formulas.
#[pyfunction]
#[pyo3(signature = (k, a, n, b, m, state, transcription="corrected"))]
#[allow(clippy::too_many_arguments)]
fn bracket<'py>(
    py: Python<'py>,
    k: u8,
    a: &str,
    n: i64,
    b: &str,
    m: i64,
    state: &State,
    transcription: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let v = brackets::evaluate_bracket_with(
        tensor(k)?,
        &coordinate(a, n)?,
        &coordinate(b, m)?,
        &state.inner,
        self::transcription(transcription)?,
    )
    .map_err(err)?;
    to_fraction(py, &v)
}

/// `{a(n), b(m)}_k` evaluated through the reduced tensor.
#[pyfunction]
fn tensor_bracket<'py>(py: Python<'py>, k: u8, a: &str, n: i64, b: &str, m: i64, state: &State) -> PyResult<Bound<'py, PyAny>> {
    let k = tensor(k)?;
    let v = brackets::tensor_bracket(k, &coordinate(a, n)?, &coordinate(b, m)?, &state.inner, TensorRoute::default_for(k))
        .map_err(err)?;
    to_fraction(py, &v)
}

/// The reduced tensor `P_k` at `state` applied to a covector in U*.
#[pyfunction]
#[pyo3(signature = (k, state, covector, boundary="periodic"))]
fn reduced_tensor(k: u8, state: &State, covector: &Pair, boundary: &str) -> PyResult<Pair> {
    Pair::wrap(reduction::reduced_tensor_with(
        tensor(k)?,
        &state.inner,
        &covector.inner,
        self::boundary(boundary)?,
    ))
}

/// Runs a verification suite and returns its report as a dict.
#[pyfunction]
#[pyo3(signature = (suite, n=7, depth=4, depth_bar=3, seed=1, mode="exact", tol=1e-9, samples=None, transcription="corrected"))]
#[allow(clippy::too_many_arguments)]
fn verify<'py>(
    py: Python<'py>,
    suite: &str,
    n: usize,
    depth: i64,
    depth_bar: i64,
    seed: u64,
    mode: &str,
    tol: f64,
    samples: Option<usize>,
    transcription: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let suite: Suite = suite.parse().map_err(err)?;
    let config = Config {
        n,
        depth,
        depth_bar,
        seed,
        mode: mode.parse::<Mode>().map_err(err)?,
        tol,
        samples,
        transcription: self::transcription(transcription)?,
    };
    config.validate().map_err(err)?;
    let report = py.detach(|| suites::run(suite, &config)).map_err(err)?;
    json_to_py(py, &report.to_json())
}

/// RK4 along one flow in float mode. Returns the trajectory as a dict.
#[pyfunction]
#[pyo3(signature = (flow, duration, step, state_json=None, n=7, depth=4, depth_bar=3, seed=1, ledger=vec![], stride=100))]
#[allow(clippy::too_many_arguments)]
fn evolve<'py>(
    py: Python<'py>,
    flow: &str,
    duration: f64,
    step: f64,
    state_json: Option<&str>,
    n: usize,
    depth: i64,
    depth_bar: i64,
    seed: u64,
    ledger: Vec<String>,
    stride: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let flow: FlowSpec = flow.parse().map_err(err)?;
    let ledger = ledger
        .iter()
        .map(|s| s.parse::<HamiltonianId>())
        .collect::<toda2d::Result<Vec<_>>>()
        .map_err(err)?;
    let initial: LaxState<f64> = match state_json {
        Some(text) => {
            let v: serde_json::Value = serde_json::from_str(text).map_err(|e| value_err(e.to_string()))?;
            io::state_from_json(&v).map_err(err)?
        }
        None => {
            LaxState::<f64>::zero(n, depth, depth_bar).map_err(err)?;
            Sampler::new(seed).float_state(n, depth, depth_bar, 0.5)
        }
    };
    let traj = py
        .detach(|| hierarchy::integrate(&[(flow, duration, step)], &initial, &ledger, stride))
        .map_err(err)?;
    json_to_py(py, &io::trajectory_to_json(&traj))
}

/// Second-order check of the two-dimensional Toda equation on random data.
#[pyfunction]
#[pyo3(signature = (n=32, depth=4, depth_bar=2, seed=1, step=1e-3, amplitude=1.0))]
fn toda_check<'py>(
    py: Python<'py>,
    n: usize,
    depth: i64,
    depth_bar: i64,
    seed: u64,
    step: f64,
    amplitude: f64,
) -> PyResult<Bound<'py, PyAny>> {
    LaxState::<f64>::zero(n, depth, depth_bar).map_err(err)?;
    let mut sampler = Sampler::new(seed);
    let u = sampler.float_profile(n, amplitude);
    let base = sampler.float_state(n, depth, depth_bar, amplitude);
    let (full, half) = py
        .detach(|| {
            Ok::<_, Error>((
                hierarchy::toda_equation_check(&u, &base, step)?,
                hierarchy::toda_equation_check(&u, &base, step / 2.0)?,
            ))
        })
        .map_err(err)?;
    let v = serde_json::json!({
        "step": step,
        "residual": full.relative_residual,
        "half_step_residual": half.relative_residual,
        "ratio": full.relative_residual / half.relative_residual,
    });
    json_to_py(py, &v)
}

#[pymodule]
fn toda2d_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<State>()?;
    m.add_class::<PyDiffOp>()?;
    m.add_class::<Pair>()?;
    m.add_function(wrap_pyfunction!(bracket_terms, m)?)?;
    m.add_function(wrap_pyfunction!(bracket, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_bracket, m)?)?;
    m.add_function(wrap_pyfunction!(reduced_tensor, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(toda_check, m)?)?;
    Ok(())
}
