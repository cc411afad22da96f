use std::sync::Arc;

use axum::body::{to_bytes, Body};
use axum::http::{Request, StatusCode};
use axum::Router;
use serde_json::{json, Value};
use tower::ServiceExt;

use docit2_core::elicitation::session::{LoggedEvent, SessionConfig};
use docit2_core::io::{save, SessionDocument};
use docit2_service::{router, Registry, ServiceConfig};

fn app() -> Router {
    router(Arc::new(Registry::new(ServiceConfig::default())))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or(Body::empty(), |b| Body::from(b.to_string())))
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    (status, to_bytes(res.into_body(), usize::MAX).await.unwrap().to_vec())
}

async fn call_json(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (s, b) = call(app, method, uri, body).await;
    (s, serde_json::from_slice(&b).unwrap())
}

async fn create(app: &Router) -> String {
    let (s, v) = call_json(app, "POST", "/sessions", None).await;
    assert_eq!(s, StatusCode::CREATED);
    v["id"].as_str().unwrap().to_string()
}

fn figure_events() -> Vec<Value> {
    vec![
        json!({"at": "t0", "type": "label_cards", "gaps": [1, 1]}),
        json!({"at": "t1", "type": "begin_label", "label": "medium"}),
        json!({"at": "t2", "type": "set_core_support", "support": [0.1, 0.9], "core": [0.45, 0.55]}),
        json!({"at": "t3", "type": "place_cards", "gaps": [1, 4]}),
        json!({"at": "t4", "type": "accept"}),
    ]
}

#[tokio::test]
async fn new_session_starts_with_label_values() {
    let app = app();
    let id = create(&app).await;
    let (s, v) = call_json(&app, "GET", &format!("/sessions/{id}"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["phase"], "label_values");
    assert_eq!(v["expected_events"], json!(["label_cards"]));
}

#[tokio::test]
async fn figure_cards_then_accept_show_memberships() {
    let app = app();
    let id = create(&app).await;
    let mut last = Value::Null;
    for e in figure_events() {
        let (s, v) = call_json(&app, "POST", &format!("/sessions/{id}/events"), Some(e)).await;
        assert_eq!(s, StatusCode::OK, "{v}");
        last = v;
    }
    assert_eq!(last["memberships"], json!(["0", "2/7", "1"]));

    // the export is the document a replay of the same log produces
    let (s, bytes) = call(&app, "GET", &format!("/sessions/{id}/export"), None).await;
    assert_eq!(s, StatusCode::OK);
    let events: Vec<LoggedEvent> = figure_events().into_iter().map(|e| serde_json::from_value(e).unwrap()).collect();
    let replayed = SessionDocument::from_events(SessionConfig::default(), events).unwrap();
    assert_eq!(bytes, save(&replayed));
}

#[tokio::test]
async fn ratio_edit_goes_through_adjusting() {
    let app = app();
    let id = create(&app).await;
    for e in &figure_events()[..4] {
        call_json(&app, "POST", &format!("/sessions/{id}/events"), Some(e.clone())).await;
    }
    let edit = json!({"type": "modify_ratios", "entries": [{"s": 3, "r": 2, "value": "3"}]});
    let (s, v) = call_json(&app, "POST", &format!("/sessions/{id}/events"), Some(edit)).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["phase"], "adjusting");
    assert_eq!(v["adjustment"]["table"]["entries"][0]["value"], "3");
    let (_, v) = call_json(&app, "POST", &format!("/sessions/{id}/events"), Some(json!({"type": "present_adjusted"}))).await;
    assert_eq!(v["phase"], "ratio_review");
    assert_eq!(v["memberships"], json!(["0", "1/3", "1"]));
}

#[tokio::test]
async fn wrong_phase_is_a_conflict() {
    let app = app();
    let id = create(&app).await;
    let (s, v) = call_json(&app, "POST", &format!("/sessions/{id}/events"), Some(json!({"type": "accept"}))).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["error"]["kind"], "protocol");
    assert_eq!(v["error"]["expected"], json!(["label_cards"]));
    // nothing was recorded
    let (_, bytes) = call(&app, "GET", &format!("/sessions/{id}/export"), None).await;
    let doc: Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(doc["events"], json!([]));
}

#[tokio::test]
async fn unknown_session_is_not_found() {
    let app = app();
    let (s, v) = call_json(&app, "GET", "/sessions/nope", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(v["error"]["kind"], "not_found");
    let (s, _) = call_json(&app, "POST", "/sessions/nope/events", Some(json!({"type": "accept"}))).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn validation_errors_name_the_field() {
    let app = app();
    let (s, v) = call_json(&app, "POST", "/sessions", Some(json!({"labels": ["a", "b"], "resolution": "fine"}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["path"], "resolution");
    let (s, v) = call_json(&app, "POST", "/sessions", Some(json!({"labels": ["a"]}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "{v}");

    let id = create(&app).await;
    let (s, v) = call_json(&app, "POST", &format!("/sessions/{id}/events"), Some(json!({"type": "label_cards", "gaps": [1, -2]}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "{v}");
    let (s, v) = call_json(&app, "POST", "/compute/wa", Some(json!({"items": [{"triangle": [0, 0.5, 1]}], "weights": "x"}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["path"], "weights");
}

#[tokio::test]
async fn compute_endpoints() {
    let app = app();
    let (s, v) = call_json(&app, "POST", "/compute/order", Some(json!({"a": {"triangle": [0, 1, 2]}, "b": {"triangle": [3, 4, 5]}}))).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v, json!({"comparisons": [{"order": "t1", "result": "less"}]}));
    let (s, v) = call_json(&app, "POST", "/compute/add", Some(json!({"a": {"triangle": [0, 1, 2]}, "b": {"triangle": [1, 2, 3]}}))).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["result"]["cuts"]["1"], json!([3.0, 3.0]));
    let (s, v) = call_json(&app, "POST", "/compute/scale", Some(json!({"r": 2, "a": {"triangle": [0, 1, 2]}}))).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["result"]["cuts"]["0"], json!([0.0, 4.0]));
    let (s, v) = call_json(&app, "POST", "/compute/wa", Some(json!({"items": [{"triangle": [0, 0.5, 1]}], "weights": [0.7]}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "{v}");
    let (s, _) = call_json(&app, "POST", "/compute/pow", Some(json!({}))).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    let problem = json!({
        "criteria": [{"name": "c"}],
        "alternatives": ["x", "y"],
        "matrix": [[{"triangle": [0.1, 0.2, 0.3]}], [{"triangle": [0.5, 0.6, 0.7]}]],
        "weights": [1.0]
    });
    let (s, v) = call_json(&app, "POST", "/compute/rank", Some(json!({"problem": problem}))).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["rankings"][0]["order"], "order_1");
    assert_eq!(v["rankings"][1]["classes"], json!([["y"], ["x"]]));
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_posts_are_serialized() {
    let app = app();
    let id = create(&app).await;
    let tasks: Vec<_> = (0..16)
        .map(|i| {
            let app = app.clone();
            let uri = format!("/sessions/{id}/events");
            tokio::spawn(async move {
                call_json(&app, "POST", &uri, Some(json!({"type": "label_cards", "gaps": [i % 3, 1]}))).await.0
            })
        })
        .collect();
    for t in tasks {
        assert_eq!(t.await.unwrap(), StatusCode::OK);
    }
    let (_, bytes) = call(&app, "GET", &format!("/sessions/{id}/export"), None).await;
    let doc: Value = serde_json::from_slice(&bytes).unwrap();
    let seqs: Vec<u64> = doc["state"]["audit_log"].as_array().unwrap().iter().map(|e| e["seq"].as_u64().unwrap()).collect();
    assert_eq!(seqs, (0..16).collect::<Vec<_>>());
    assert_eq!(doc["events"].as_array().unwrap().len(), 16);
}
