//! JSON forms of lattice functions, operators, pairs, states and
//! trajectories. Rationals are written as `"num/den"` strings, floats as
//! numbers; either is accepted on input.

use num_traits::FromPrimitive;
use serde_json::{json, Map, Value};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::hierarchy::{FlowSpec, HamiltonianId, Snapshot, Trajectory};
use crate::lattice::LatticeFunction;
use crate::pair::PairElement;
use crate::scalar::{parse_rational, rational_to_string, Rational, Scalar};
use crate::state::{Family, LaxState};

/// Scalars with a JSON representation.
pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(value: &Value) -> Result<Self>;
}

impl JsonScalar for Rational {
    fn to_json(&self) -> Value {
        Value::String(rational_to_string(self))
    }

    fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::String(s) => parse_rational(s).ok_or_else(|| invalid(format!("not a rational: {s:?}"))),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Rational::from_integer(i.into()))
                } else {
                    n.as_f64()
                        .and_then(Rational::from_f64)
                        .ok_or_else(|| invalid(format!("not a finite number: {n}")))
                }
            }
            other => Err(invalid(format!("expected a rational, found {other}"))),
        }
    }
}

impl JsonScalar for f64 {
    fn to_json(&self) -> Value {
        json!(self)
    }

    fn from_json(value: &Value) -> Result<Self> {
        match value {
            Value::Number(n) => n.as_f64().ok_or_else(|| invalid(format!("not a number: {n}"))),
            Value::String(s) => parse_rational(s)
                .map(|r| r.to_f64())
                .ok_or_else(|| invalid(format!("not a number: {s:?}"))),
            other => Err(invalid(format!("expected a number, found {other}"))),
        }
    }
}

fn invalid(msg: String) -> Error {
    Error::Invalid(msg)
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| invalid(format!("missing field '{key}'")))
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| invalid(format!("'{what}' must be an integer")))
}

fn optional_i64(v: Option<&Value>, what: &str) -> Result<Option<i64>> {
    match v {
        None | Some(Value::Null) => Ok(None),
        Some(x) => as_i64(x, what).map(Some),
    }
}

fn values_to_json<S: JsonScalar>(f: &LatticeFunction<S>) -> Value {
    Value::Array(f.values().iter().map(JsonScalar::to_json).collect())
}

fn values_from_json<S: JsonScalar>(v: &Value, period: usize) -> Result<LatticeFunction<S>> {
    let items = v.as_array().ok_or_else(|| invalid("expected an array of values".into()))?;
    if items.len() != period {
        return Err(invalid(format!("expected {period} values, found {}", items.len())));
    }
    Ok(LatticeFunction::new(items.iter().map(S::from_json).collect::<Result<_>>()?))
}

/// `{"period": N, "values": [...]}`
pub fn lattice_to_json<S: JsonScalar>(f: &LatticeFunction<S>) -> Value {
    json!({ "period": f.period(), "values": values_to_json(f) })
}

pub fn lattice_from_json<S: JsonScalar>(v: &Value) -> Result<LatticeFunction<S>> {
    let period = as_i64(field(v, "period")?, "period")?;
    if period <= 0 {
        return Err(invalid("period must be positive".into()));
    }
    values_from_json(field(v, "values")?, period as usize)
}

/// `{"period": N, "hi": top degree or null, "acc": {"lower": .., "upper": ..},
/// "coeffs": {"degree": [...]}}`
pub fn diffop_to_json<S: JsonScalar>(op: &DiffOp<S>) -> Value {
    let coeffs: Map<String, Value> = op.terms().map(|(d, f)| (d.to_string(), values_to_json(f))).collect();
    json!({
        "period": op.period(),
        "hi": op.max_degree(),
        "acc": { "lower": op.lower_accuracy(), "upper": op.upper_accuracy() },
        "coeffs": coeffs,
    })
}

pub fn diffop_from_json<S: JsonScalar>(v: &Value) -> Result<DiffOp<S>> {
    let period = as_i64(field(v, "period")?, "period")?;
    if period <= 0 {
        return Err(invalid("period must be positive".into()));
    }
    let period = period as usize;
    let coeffs = field(v, "coeffs")?
        .as_object()
        .ok_or_else(|| invalid("'coeffs' must map degrees to value arrays".into()))?;
    let mut terms = Vec::new();
    for (k, vals) in coeffs {
        let d: i64 = k.parse().map_err(|_| invalid(format!("bad degree '{k}'")))?;
        terms.push((d, values_from_json(vals, period)?));
    }
    let mut op = DiffOp::from_terms(period, terms);
    if let Some(acc) = v.get("acc") {
        if let Some(lo) = optional_i64(acc.get("lower"), "acc.lower")? {
            op = op.with_lower_accuracy(lo);
        }
        if let Some(hi) = optional_i64(acc.get("upper"), "acc.upper")? {
            op = op.with_upper_accuracy(hi);
        }
    }
    Ok(op)
}

/// `{"plus": DiffOp, "minus": DiffOp}`
pub fn pair_to_json<S: JsonScalar>(p: &PairElement<S>) -> Value {
    json!({ "plus": diffop_to_json(&p.plus), "minus": diffop_to_json(&p.minus) })
}

pub fn pair_from_json<S: JsonScalar>(v: &Value) -> Result<PairElement<S>> {
    PairElement::new(diffop_from_json(field(v, "plus")?)?, diffop_from_json(field(v, "minus")?)?)
}

/// `{"N": .., "M": .., "Mbar": .., "u": {"0": [...], "-1": [...]},
/// "ubar": {"-1": [...], ...}}`
pub fn state_to_json<S: JsonScalar>(s: &LaxState<S>) -> Value {
    let mut u = Map::new();
    let mut ubar = Map::new();
    for (family, index) in s.coordinates() {
        let vals = values_to_json(s.field(family, index).expect("stored coordinate"));
        match family {
            Family::U => u.insert(index.to_string(), vals),
            Family::UBar => ubar.insert(index.to_string(), vals),
        };
    }
    json!({ "N": s.period(), "M": s.depth(), "Mbar": s.depth_bar(), "u": u, "ubar": ubar })
}

/// Coordinates missing from the file are zero.
pub fn state_from_json<S: JsonScalar>(v: &Value) -> Result<LaxState<S>> {
    let n = as_i64(field(v, "N")?, "N")?;
    if n <= 0 {
        return Err(invalid("N must be positive".into()));
    }
    let mut state = LaxState::zero(n as usize, as_i64(field(v, "M")?, "M")?, as_i64(field(v, "Mbar")?, "Mbar")?)?;
    for (key, family) in [("u", Family::U), ("ubar", Family::UBar)] {
        let Some(map) = v.get(key) else { continue };
        let map = map
            .as_object()
            .ok_or_else(|| invalid(format!("'{key}' must map indices to value arrays")))?;
        for (k, vals) in map {
            let index: i64 = k.parse().map_err(|_| invalid(format!("bad index '{key}{k}'")))?;
            state.set_field(family, index, values_from_json(vals, n as usize)?)?;
        }
    }
    Ok(state)
}

/// `{"ledger": ["h1", ...], "snapshots": [{"time", "flow", "state",
/// "hamiltonians"}]}`
pub fn trajectory_to_json(t: &Trajectory) -> Value {
    let snapshots: Vec<Value> = t
        .snapshots
        .iter()
        .map(|s| {
            json!({
                "time": s.time,
                "flow": s.flow.map(|f| f.to_string()),
                "state": state_to_json(&s.state),
                "hamiltonians": s.hamiltonians,
            })
        })
        .collect();
    json!({
        "ledger": t.ledger.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
        "snapshots": snapshots,
    })
}

pub fn trajectory_from_json(v: &Value) -> Result<Trajectory> {
    let ledger = field(v, "ledger")?
        .as_array()
        .ok_or_else(|| invalid("'ledger' must be an array".into()))?
        .iter()
        .map(|x| x.as_str().unwrap_or_default().parse::<HamiltonianId>())
        .collect::<Result<Vec<_>>>()?;
    let snapshots = field(v, "snapshots")?
        .as_array()
        .ok_or_else(|| invalid("'snapshots' must be an array".into()))?
        .iter()
        .map(|s| {
            let flow = match s.get("flow") {
                None | Some(Value::Null) => None,
                Some(Value::String(f)) => Some(f.parse::<FlowSpec>()?),
                Some(other) => return Err(invalid(format!("bad flow {other}"))),
            };
            let hamiltonians = field(s, "hamiltonians")?
                .as_array()
                .ok_or_else(|| invalid("'hamiltonians' must be an array".into()))?
                .iter()
                .map(f64::from_json)
                .collect::<Result<Vec<_>>>()?;
            Ok(Snapshot {
                time: f64::from_json(field(s, "time")?)?,
                flow,
                state: state_from_json(field(s, "state")?)?,
                hamiltonians,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { ledger, snapshots })
}
