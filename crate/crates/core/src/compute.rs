//! Stateless computation requests shared by the command line and the HTTP
//! service.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::fuzzy::{self, FuzzyError, PiecewiseMF};
use crate::io::{parse_json, parse_keyed, FieldError};
use crate::it2::{self, t1_admissible_order, It2Order, IT2MF};
use crate::mcdm::{self, DecisionProblem, McdmError, RankReport};
use crate::ErrorKind;

/// A membership function operand: type-1 or type-2, in full or as a
/// triangle or trapezoid shorthand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MfSpec {
    Triangle { triangle: [f64; 3] },
    Trapezoid { trapezoid: [f64; 4] },
    It2(IT2MF),
    T1(PiecewiseMF),
}

impl MfSpec {
    /// The type-1 function, or `None` for a type-2 operand.
    pub fn to_t1(&self) -> Result<Option<PiecewiseMF>, FuzzyError> {
        Ok(Some(match self {
            MfSpec::Triangle { triangle: [a, b, c] } => PiecewiseMF::triangular(*a, *b, *c)?,
            MfSpec::Trapezoid { trapezoid: [a, b, c, d] } => PiecewiseMF::trapezoidal(*a, *b, *c, *d)?,
            MfSpec::T1(m) => m.clone(),
            MfSpec::It2(_) => return Ok(None),
        }))
    }

    pub fn to_it2(&self) -> Result<IT2MF, FuzzyError> {
        match self {
            MfSpec::It2(m) => Ok(m.clone()),
            other => Ok(IT2MF::degenerate(other.to_t1()?.expect("type-1 operand"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum ComputeRequest {
    Add { a: MfSpec, b: MfSpec },
    Scale { r: f64, a: MfSpec },
    /// Weighted average with weights summing to one.
    Wa { items: Vec<MfSpec>, weights: Vec<f64> },
    /// Compares `a` with `b`; type-2 operands use the given order or both.
    Order {
        a: MfSpec,
        b: MfSpec,
        #[serde(default)]
        order: Option<It2Order>,
    },
    Rank {
        problem: DecisionProblem,
        #[serde(default)]
        order: Option<It2Order>,
    },
}

impl ComputeRequest {
    pub const OPS: [&'static str; 5] = ["add", "scale", "wa", "order", "rank"];
}

/// The requests keyed by operation, which lets a parser report field paths.
#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum KeyedRequest {
    Add(AddBody),
    Scale(ScaleBody),
    Wa(WaBody),
    Order(OrderBody),
    Rank(RankBody),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AddBody {
    a: MfSpec,
    b: MfSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScaleBody {
    r: f64,
    a: MfSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WaBody {
    items: Vec<MfSpec>,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OrderBody {
    a: MfSpec,
    b: MfSpec,
    #[serde(default)]
    order: Option<It2Order>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RankBody {
    problem: DecisionProblem,
    #[serde(default)]
    order: Option<It2Order>,
}

impl From<KeyedRequest> for ComputeRequest {
    fn from(k: KeyedRequest) -> Self {
        match k {
            KeyedRequest::Add(x) => ComputeRequest::Add { a: x.a, b: x.b },
            KeyedRequest::Scale(x) => ComputeRequest::Scale { r: x.r, a: x.a },
            KeyedRequest::Wa(x) => ComputeRequest::Wa { items: x.items, weights: x.weights },
            KeyedRequest::Order(x) => ComputeRequest::Order { a: x.a, b: x.b, order: x.order },
            KeyedRequest::Rank(x) => ComputeRequest::Rank { problem: x.problem, order: x.order },
        }
    }
}

/// Parses a request object tagged by `op`; errors name the offending field.
pub fn parse_request_value(value: serde_json::Value) -> Result<ComputeRequest, FieldError> {
    parse_keyed::<KeyedRequest>(value, "op").map(Into::into)
}

/// Parses the body of an `op` request, which carries no `op` field.
pub fn parse_request(op: &str, bytes: &[u8]) -> Result<ComputeRequest, FieldError> {
    let mut value: serde_json::Value = parse_json(bytes)?;
    match value.as_object_mut() {
        Some(obj) => {
            obj.insert("op".into(), serde_json::Value::String(op.to_string()));
        }
        None => return Err(FieldError::new(".", "expected an object")),
    }
    parse_request_value(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Less,
    Equal,
    Greater,
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderResult {
    /// `t1` for two type-1 operands, otherwise the type-2 order.
    pub order: String,
    pub result: Comparison,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MfResult {
    It2(IT2MF),
    T1(PiecewiseMF),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComputeResponse {
    Mf { result: MfResult },
    Order { comparisons: Vec<OrderResult> },
    Rank(RankReport),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ComputeError {
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Mcdm(#[from] McdmError),
}

impl ComputeError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            ComputeError::Fuzzy(_) => ErrorKind::Validation,
            ComputeError::Mcdm(e) => e.kind(),
        }
    }
}

fn all_t1(specs: &[&MfSpec]) -> Result<Option<Vec<PiecewiseMF>>, FuzzyError> {
    specs.iter().map(|s| s.to_t1()).collect()
}

pub fn compute(req: &ComputeRequest) -> Result<ComputeResponse, ComputeError> {
    let mf = |m: MfResult| ComputeResponse::Mf { result: m };
    Ok(match req {
        ComputeRequest::Add { a, b } => match all_t1(&[a, b])? {
            Some(t) => mf(MfResult::T1(fuzzy::add(&t[0], &t[1]))),
            None => mf(MfResult::It2(it2::it2_add(&a.to_it2()?, &b.to_it2()?))),
        },
        ComputeRequest::Scale { r, a } => match a.to_t1()? {
            Some(t) => mf(MfResult::T1(fuzzy::scale(*r, &t)?)),
            None => mf(MfResult::It2(it2::it2_scale(*r, &a.to_it2()?)?)),
        },
        ComputeRequest::Wa { items, weights } => {
            let refs: Vec<&MfSpec> = items.iter().collect();
            match all_t1(&refs)? {
                Some(t) => mf(MfResult::T1(fuzzy::weighted_average(&t, weights)?)),
                None => {
                    let it: Vec<IT2MF> = items.iter().map(MfSpec::to_it2).collect::<Result<_, _>>()?;
                    mf(MfResult::It2(it2::it2_weighted_average(&it, weights)?))
                }
            }
        }
        ComputeRequest::Order { a, b, order } => {
            let comparisons = match (all_t1(&[a, b])?, order) {
                (Some(t), None) => vec![OrderResult {
                    order: "t1".into(),
                    result: t1_admissible_order(&t[0], &t[1]).into(),
                }],
                _ => {
                    let (x, y) = (a.to_it2()?, b.to_it2()?);
                    let orders = order.map_or(vec![It2Order::Order1, It2Order::Order2], |o| vec![o]);
                    orders
                        .into_iter()
                        .map(|o| OrderResult { order: o.name().into(), result: o.compare(&x, &y).into() })
                        .collect()
                }
            };
            ComputeResponse::Order { comparisons }
        }
        ComputeRequest::Rank { problem, order } => ComputeResponse::Rank(mcdm::report(problem, *order)?),
    })
}
