#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;

use axum::body::{to_bytes, Body};
use axum::http::{Method, Request};
use tower::ServiceExt;

use docit2_service::{router, Registry, ServiceConfig};

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// A golden case: `NN-name.events.jsonl`, an optional `NN-name.config.json`
/// and the expected `NN-name.docit2.json`.
pub struct Golden {
    pub name: String,
    pub events: PathBuf,
    pub config: Option<PathBuf>,
    pub expected: PathBuf,
}

pub fn goldens() -> Vec<Golden> {
    let dir = golden_dir();
    let mut out: Vec<Golden> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| {
            let file = e.unwrap().file_name().into_string().unwrap();
            let name = file.strip_suffix(".events.jsonl")?.to_string();
            let config = dir.join(format!("{name}.config.json"));
            Some(Golden {
                events: dir.join(&file),
                config: config.exists().then_some(config),
                expected: dir.join(format!("{name}.docit2.json")),
                name,
            })
        })
        .collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

pub fn docit2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_docit2")).args(args).output().expect("the binary runs")
}

/// Document bytes of a CLI replay.
pub fn cli_replay(g: &Golden) -> Vec<u8> {
    let mut args = vec!["replay", "--input", g.events.to_str().unwrap()];
    if let Some(c) = &g.config {
        args.extend(["--config", c.to_str().unwrap()]);
    }
    let out = docit2(&args);
    assert!(out.status.success(), "{}: {}", g.name, String::from_utf8_lossy(&out.stderr));
    out.stdout
}

async fn call(app: &axum::Router, method: Method, uri: &str, body: Vec<u8>) -> (u16, Vec<u8>) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body))
        .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status().as_u16();
    (status, to_bytes(res.into_body(), usize::MAX).await.unwrap().to_vec())
}

/// Export bytes after posting every event of the log to a fresh session.
pub async fn service_replay(g: &Golden) -> Vec<u8> {
    let app = router(Arc::new(Registry::new(ServiceConfig::default())));
    let config = g.config.as_ref().map(|c| std::fs::read(c).unwrap()).unwrap_or_default();
    let (status, body) = call(&app, Method::POST, "/sessions", config).await;
    assert_eq!(status, 201, "{}", String::from_utf8_lossy(&body));
    let id = serde_json::from_slice::<serde_json::Value>(&body).unwrap()["id"].as_str().unwrap().to_string();
    let log = std::fs::read_to_string(&g.events).unwrap();
    for line in log.lines().filter(|l| !l.trim().is_empty()) {
        let (status, body) = call(&app, Method::POST, &format!("/sessions/{id}/events"), line.as_bytes().to_vec()).await;
        assert_eq!(status, 200, "{}: {}", g.name, String::from_utf8_lossy(&body));
    }
    let (status, body) = call(&app, Method::GET, &format!("/sessions/{id}/export"), Vec::new()).await;
    assert_eq!(status, 200);
    body
}

/// Compares against the stored document; `DOCIT2_UPDATE_GOLDEN=1` rewrites it.
pub fn check_golden(g: &Golden, actual: &[u8]) -> Result<(), String> {
    if std::env::var_os("DOCIT2_UPDATE_GOLDEN").is_some() {
        std::fs::write(&g.expected, actual).unwrap();
    }
    let expected = std::fs::read(&g.expected).map_err(|e| format!("{}: {e}", g.expected.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!("{}: replay differs from {}", g.name, g.expected.display()))
    }
}
