//! JSON forms of problems, delta operators and residual reports. Rationals
//! travel as `"p/q"` strings (or `"p"`); bare JSON integers are accepted on input.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::discretize::{Problem, ResidualSweep};
use crate::error::{Error, Result};
use crate::series::{LinearOde, NonlinearOde, TaylorSeries};
use crate::umbral::DeltaOperator;
use crate::Rational;

/// A rational carried as a string in JSON.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct JsonRational(pub Rational);

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Json("empty rational".into()));
    }
    let r = Rational::from_str(t).map_err(|_| Error::Json(format!("not a rational: `{s}`")))?;
    Ok(r)
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

impl Serialize for JsonRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for JsonRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match Value::deserialize(d)? {
            Value::String(s) => parse_rational(&s)
                .map(JsonRational)
                .map_err(D::Error::custom),
            Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string())
                .map(JsonRational)
                .map_err(D::Error::custom),
            other => Err(D::Error::custom(format!(
                "expected a \"p/q\" string, got {other}"
            ))),
        }
    }
}

fn wrap(v: &[Rational]) -> Vec<JsonRational> {
    v.iter().cloned().map(JsonRational).collect()
}

fn unwrap(v: Vec<JsonRational>) -> Vec<Rational> {
    v.into_iter().map(|r| r.0).collect()
}

fn trimmed(v: &[Rational]) -> Vec<Rational> {
    let end = v
        .iter()
        .rposition(|c| *c != Rational::from_integer(0.into()))
        .map_or(0, |i| i + 1);
    v[..end].to_vec()
}

#[allow(non_snake_case)]
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum RawProblem {
    Linear {
        N: usize,
        a: Vec<Vec<JsonRational>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        c0: Vec<JsonRational>,
        #[serde(flatten)]
        extra: RawExtra,
    },
    Nonlinear {
        m: usize,
        N: usize,
        a: Vec<Vec<JsonRational>>,
        #[serde(flatten)]
        extra: RawExtra,
    },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct RawExtra {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    init: Option<Vec<JsonRational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    series: Option<Vec<JsonRational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u: Option<Vec<JsonRational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h: Option<JsonRational>,
}

/// An equation together with whatever solution data accompanied it.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDocument {
    pub problem: Problem<Rational>,
    /// Initial data `y(0), ..., y^(N-1)(0)` (linear) or `y^(m-1)(0)` (nonlinear).
    pub init: Option<Vec<Rational>>,
    /// Plain Taylor coefficients of a solution.
    pub series: Option<Vec<Rational>>,
    /// Lattice values to check.
    pub u: Option<Vec<Rational>>,
    pub h: Option<Rational>,
}

impl ProblemDocument {
    pub fn new(problem: Problem<Rational>) -> Self {
        Self {
            problem,
            init: None,
            series: None,
            u: None,
            h: None,
        }
    }
}

fn polynomial_order(a: &[Vec<Rational>], c0: &[Rational]) -> usize {
    a.iter()
        .map(Vec::len)
        .chain(std::iter::once(c0.len()))
        .max()
        .unwrap_or(1)
        .saturating_sub(1)
}

/// Parse a problem document. Malformed JSON yields [`Error::Json`]; well-formed
/// JSON describing an invalid equation yields the corresponding validation error.
pub fn parse_problem(text: &str) -> Result<ProblemDocument> {
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    problem_from_raw(raw)
}

pub fn problem_from_value(value: Value) -> Result<ProblemDocument> {
    let raw: RawProblem = serde_json::from_value(value).map_err(|e| Error::Json(e.to_string()))?;
    problem_from_raw(raw)
}

fn problem_from_raw(raw: RawProblem) -> Result<ProblemDocument> {
    let (problem, extra) = match raw {
        RawProblem::Linear { N, a, c0, extra } => {
            if a.len() != N + 1 {
                return Err(Error::InvalidArgument(format!(
                    "linear N = {N} needs {} coefficient arrays, got {}",
                    N + 1,
                    a.len()
                )));
            }
            let a: Vec<Vec<Rational>> = a.into_iter().map(unwrap).collect();
            let c0 = unwrap(c0);
            let order = polynomial_order(&a, &c0);
            (
                Problem::Linear(LinearOde::polynomial(&a, &c0, order)?),
                extra,
            )
        }
        RawProblem::Nonlinear { m, N, a, extra } => {
            if a.len() != N + 1 {
                return Err(Error::InvalidArgument(format!(
                    "nonlinear N = {N} needs {} coefficient arrays, got {}",
                    N + 1,
                    a.len()
                )));
            }
            let a: Vec<Vec<Rational>> = a.into_iter().map(unwrap).collect();
            let order = polynomial_order(&a, &[]);
            (
                Problem::Nonlinear(NonlinearOde::polynomial(m, &a, order)?),
                extra,
            )
        }
    };
    if let Some(h) = &extra.h {
        if h.0 <= Rational::from_integer(0.into()) {
            return Err(Error::NonPositiveSpacing);
        }
    }
    Ok(ProblemDocument {
        problem,
        init: extra.init.map(unwrap),
        series: extra.series.map(unwrap),
        u: extra.u.map(unwrap),
        h: extra.h.map(|h| h.0),
    })
}

/// Serialize a document; polynomial coefficients are written without trailing zeros.
pub fn problem_to_value(doc: &ProblemDocument) -> Value {
    let poly = |s: &TaylorSeries<Rational>| wrap(&trimmed(s.coeffs()));
    let extra = RawExtra {
        init: doc.init.as_deref().map(wrap),
        series: doc.series.as_deref().map(wrap),
        u: doc.u.as_deref().map(wrap),
        h: doc.h.clone().map(JsonRational),
    };
    let raw = match &doc.problem {
        Problem::Linear(ode) => RawProblem::Linear {
            N: ode.order(),
            a: ode.coefficients().iter().map(poly).collect(),
            c0: poly(ode.inhomogeneity()),
            extra,
        },
        Problem::Nonlinear(ode) => RawProblem::Nonlinear {
            m: ode.derivative_order(),
            N: ode.degree(),
            a: ode.coefficients().iter().map(poly).collect(),
            extra,
        },
    };
    serde_json::to_value(raw).expect("problem serializes")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDelta {
    sigma: JsonRational,
    alpha: BTreeMap<String, JsonRational>,
}

pub fn parse_delta_operator(text: &str) -> Result<DeltaOperator<Rational>> {
    let raw: RawDelta = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    delta_from_raw(raw)
}

pub fn delta_operator_from_value(value: Value) -> Result<DeltaOperator<Rational>> {
    let raw: RawDelta = serde_json::from_value(value).map_err(|e| Error::Json(e.to_string()))?;
    delta_from_raw(raw)
}

fn delta_from_raw(raw: RawDelta) -> Result<DeltaOperator<Rational>> {
    let alpha = raw
        .alpha
        .into_iter()
        .map(|(k, v)| {
            let k = k
                .trim()
                .parse::<i64>()
                .map_err(|_| Error::Json(format!("alpha key `{k}` is not an integer")))?;
            Ok((k, v.0))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(DeltaOperator::new(raw.sigma.0, alpha))
}

pub fn delta_operator_to_value(op: &DeltaOperator<Rational>) -> Value {
    let raw = RawDelta {
        sigma: JsonRational(op.sigma.clone()),
        alpha: op
            .alpha
            .iter()
            .map(|(k, v)| (k.to_string(), JsonRational(v.clone())))
            .collect(),
    };
    serde_json::to_value(raw).expect("delta operator serializes")
}

pub fn rationals_to_value(v: &[Rational]) -> Value {
    Value::Array(
        v.iter()
            .map(|r| Value::String(format_rational(r)))
            .collect(),
    )
}

pub fn rationals_from_value(value: &Value) -> Result<Vec<Rational>> {
    let v: Vec<JsonRational> =
        serde_json::from_value(value.clone()).map_err(|e| Error::Json(e.to_string()))?;
    Ok(unwrap(v))
}

/// `{"records": [{"n", "residual"}], "max_abs_residual", "verified_through", "first_failure"}`.
pub fn sweep_to_value(sweep: &ResidualSweep<Rational>) -> Value {
    let records: Vec<Value> = sweep
        .records
        .iter()
        .map(|(n, r)| serde_json::json!({ "n": n, "residual": format_rational(r) }))
        .collect();
    serde_json::json!({
        "records": records,
        "max_abs_residual": format_rational(&sweep.max_abs()),
        "verified_through": sweep.verified_through(),
        "first_failure": sweep.first_failure(),
    })
}
