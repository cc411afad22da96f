//! Browser demo over the core library. Each operation takes and returns
//! JSON text; the plain functions are the tested surface and the exported
//! wrappers only turn errors into JavaScript exceptions.

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use docit2_core::compute::{compute, parse_request};
use docit2_core::elicitation::{
    assemble, build_t1_side, enumerate_chains, envelope_it2, nonnormalized_values, normalize, uniform_breakpoints,
    CardChain, CardGap, CoreSupport, Side, SideFragment, DEFAULT_ENUMERATION_CAP,
};
use docit2_core::fuzzy::{Interval, PiecewiseMF};
use docit2_core::io::knot_list;
use docit2_core::rational::{self, Rational};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeRequest {
    pub support: Interval,
    pub core: Interval,
    /// Cards from the left support edge to the core; ignored when the edges
    /// coincide.
    #[serde(default)]
    pub left: Vec<CardGap>,
    /// Cards from the right support edge to the core.
    #[serde(default)]
    pub right: Vec<CardGap>,
    #[serde(default)]
    pub cap: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct SideRange {
    /// Smallest and largest membership of every item, from the support edge.
    pub lower: Vec<String>,
    pub upper: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct EnvelopeResponse {
    pub family_size: usize,
    pub members: Vec<Vec<(f64, f64)>>,
    pub lower: Vec<(f64, f64)>,
    pub upper: Vec<(f64, f64)>,
    pub left: SideRange,
    pub right: SideRange,
}

fn side_family(gaps: &[CardGap], side: Side, cs: &CoreSupport, cap: u64) -> Result<(Vec<SideFragment>, SideRange), String> {
    let (s, c) = side.edges(cs);
    let memberships: Vec<Vec<Rational>> = if s == c || gaps.is_empty() {
        vec![vec![rational::zero(), rational::one()]]
    } else {
        let chain = CardChain::anonymous(gaps.to_vec()).map_err(|e| e.to_string())?;
        enumerate_chains(&chain, cap)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|c| nonnormalized_values(c).and_then(|v| normalize(&v)))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?
    };
    let p = memberships[0].len();
    let breakpoints = uniform_breakpoints(p, side, cs);
    let fragments = memberships
        .iter()
        .map(|m| {
            let v: Vec<f64> = m.iter().map(rational::to_f64).collect();
            build_t1_side(&v, &breakpoints, side, cs).map_err(|e| e.to_string())
        })
        .collect::<Result<_, _>>()?;
    let pick = |f: fn(&Rational, &Rational) -> bool| -> Vec<String> {
        (0..p)
            .map(|r| {
                let best = memberships.iter().map(|m| &m[r]).reduce(|a, b| if f(b, a) { b } else { a });
                rational::format(best.expect("non-empty family"))
            })
            .collect()
    };
    Ok((fragments, SideRange { lower: pick(|a, b| a < b), upper: pick(|a, b| a > b) }))
}

/// Every type-1 function induced by the card intervals of both sides, and
/// their type-2 envelope.
pub fn hesitation_envelope(request: &str) -> Result<String, String> {
    let req: EnvelopeRequest = serde_json::from_str(request).map_err(|e| e.to_string())?;
    let cs = CoreSupport::new(req.support, req.core).map_err(|e| e.to_string())?;
    let cap = req.cap.unwrap_or(DEFAULT_ENUMERATION_CAP);
    let (left, left_range) = side_family(&req.left, Side::Left, &cs, cap)?;
    let (right, right_range) = side_family(&req.right, Side::Right, &cs, cap)?;
    if (left.len() as u64).saturating_mul(right.len() as u64) > cap {
        return Err(format!("{} x {} members exceed the cap of {cap}", left.len(), right.len()));
    }
    let mut family: Vec<PiecewiseMF> = Vec::new();
    for l in &left {
        for r in &right {
            family.push(assemble(l, r).map_err(|e| e.to_string())?);
        }
    }
    let env = envelope_it2(&family).map_err(|e| e.to_string())?;
    let out = EnvelopeResponse {
        family_size: family.len(),
        members: family.iter().map(knot_list).collect(),
        lower: knot_list(env.lower()),
        upper: knot_list(env.upper()),
        left: left_range,
        right: right_range,
    };
    Ok(serde_json::to_string(&out).expect("responses serialize"))
}

fn run(op: &str, request: &str) -> Result<String, String> {
    let req = parse_request(op, request.as_bytes()).map_err(|e| format!("{}: {}", e.path, e.message))?;
    let res = compute(&req).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&res).expect("responses serialize"))
}

/// `{"items": [...], "weights": [...]}` to the weighted average.
pub fn weighted_average(request: &str) -> Result<String, String> {
    run("wa", request)
}

/// `{"a": ..., "b": ..., "order"?: "order_1" | "order_2"}` to the
/// comparisons.
pub fn compare(request: &str) -> Result<String, String> {
    run("order", request)
}

#[wasm_bindgen(js_name = hesitationEnvelope)]
pub fn hesitation_envelope_js(request: &str) -> Result<String, JsError> {
    hesitation_envelope(request).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = weightedAverage)]
pub fn weighted_average_js(request: &str) -> Result<String, JsError> {
    weighted_average(request).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = compare)]
pub fn compare_js(request: &str) -> Result<String, JsError> {
    compare(request).map_err(|e| JsError::new(&e))
}
