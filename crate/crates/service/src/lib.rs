//! REST API over elicitation sessions and stateless computations.
//!
//! Clients post events; the server owns every session document and answers
//! with a view of the new state. Requests to one session are applied one at
//! a time, different sessions and computations run in parallel.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;
use serde_json::{json, Value};

use docit2_core::compute::{compute, parse_request, ComputeRequest};
use docit2_core::elicitation::session::{parse_event, SessionConfig};
use docit2_core::elicitation::ElicitationError;
use docit2_core::io::{parse_json, save, FieldError, SessionDocument, SessionView};
use docit2_core::ErrorKind;

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Enumeration cap for sessions whose configuration does not set one.
    pub enumeration_cap: Option<u64>,
    /// Stamp events that arrive without a timestamp.
    pub stamp_events: bool,
}

type Session = Arc<tokio::sync::Mutex<SessionDocument>>;

#[derive(Default)]
pub struct Registry {
    sessions: Mutex<HashMap<String, Session>>,
    config: ServiceConfig,
}

impl Registry {
    pub fn new(config: ServiceConfig) -> Self {
        Registry { sessions: Mutex::default(), config }
    }

    fn get(&self, id: &str) -> Result<Session, ApiError> {
        self.sessions
            .lock()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(id))
    }

    fn insert(&self, doc: SessionDocument) -> String {
        let mut map = self.sessions.lock().unwrap();
        loop {
            let id = uuid::Uuid::new_v4().simple().to_string();
            if !map.contains_key(&id) {
                map.insert(id.clone(), Arc::new(tokio::sync::Mutex::new(doc)));
                return id;
            }
        }
    }
}

/// Error body `{"error": {"kind", "message", ...}}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, kind: &str, message: String) -> Self {
        ApiError { status, body: json!({ "error": { "kind": kind, "message": message } }) }
    }

    fn not_found(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "not_found", format!("no session {id:?}"))
    }

    fn from_kind(kind: ErrorKind, message: String) -> Self {
        match kind {
            ErrorKind::Validation => ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "validation", message),
            ErrorKind::Protocol => ApiError::new(StatusCode::CONFLICT, "protocol", message),
            ErrorKind::Internal => ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message),
        }
    }

    fn with(mut self, key: &str, value: Value) -> Self {
        self.body["error"][key] = value;
        self
    }
}

impl From<ElicitationError> for ApiError {
    fn from(e: ElicitationError) -> Self {
        let err = ApiError::from_kind(e.kind(), e.to_string());
        match e {
            ElicitationError::Protocol { phase, expected, got } => err
                .with("phase", json!(phase))
                .with("expected", json!(expected))
                .with("got", json!(got)),
            ElicitationError::Inconsistent { boundary, .. } => err.with("boundary", json!(boundary)),
            _ => err,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<FieldError> for ApiError {
    fn from(e: FieldError) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "validation", e.message).with("path", json!(e.path))
    }
}

#[derive(Serialize)]
struct SessionResponse {
    id: String,
    #[serde(flatten)]
    view: SessionView,
}

pub fn router(registry: Arc<Registry>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/events", post(post_event))
        .route("/sessions/{id}/export", get(export_session))
        .route("/compute/{op}", post(compute_op))
        .with_state(registry)
}

async fn create_session(State(reg): State<Arc<Registry>>, body: Bytes) -> Result<Response, ApiError> {
    let raw: &[u8] = if body.iter().all(u8::is_ascii_whitespace) { b"{}" } else { &body };
    let value: Value = parse_json(raw)?;
    let mut config: SessionConfig = parse_json(raw)?;
    if value.get("enumeration_cap").is_none() {
        if let Some(cap) = reg.config.enumeration_cap {
            config.enumeration_cap = cap;
        }
    }
    let doc = SessionDocument::new(config)?;
    let view = doc.view();
    let id = reg.insert(doc);
    Ok((StatusCode::CREATED, Json(SessionResponse { id, view })).into_response())
}

async fn get_session(State(reg): State<Arc<Registry>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let session = reg.get(&id)?;
    let view = session.lock().await.view();
    Ok(Json(SessionResponse { id, view }).into_response())
}

async fn post_event(
    State(reg): State<Arc<Registry>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let session = reg.get(&id)?;
    let mut event = parse_event(&body)?;
    if event.at.is_none() && reg.config.stamp_events {
        event.at = Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true));
    }
    let mut doc = session.lock().await;
    doc.apply(event)?;
    let view = doc.view();
    Ok(Json(SessionResponse { id, view }).into_response())
}

async fn export_session(State(reg): State<Arc<Registry>>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let session = reg.get(&id)?;
    let bytes = save(&*session.lock().await);
    Ok(([(header::CONTENT_TYPE, "application/json")], bytes).into_response())
}

async fn compute_op(Path(op): Path<String>, body: Bytes) -> Result<Response, ApiError> {
    if !ComputeRequest::OPS.contains(&op.as_str()) {
        return Err(ApiError::new(StatusCode::NOT_FOUND, "not_found", format!("no computation {op:?}"))
            .with("expected", json!(ComputeRequest::OPS)));
    }
    let req = parse_request(&op, &body)?;
    // computations can be long; keep them off the async workers
    let result = tokio::task::spawn_blocking(move || compute(&req))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?;
    match result {
        Ok(r) => Ok(Json(r).into_response()),
        Err(e) => Err(ApiError::from_kind(e.kind(), e.to_string())),
    }
}

/// Serves until the process ends.
pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(Arc::new(Registry::new(config)))).await
}
