//! In-process client for the router. Every response body is checked against
//! the published schema for its endpoint (or the error schema).
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use medtriage_core::temporal::ManualClock;
use medtriage_core::{Instant, KnowledgePack, TemporalStore};
use medtriage_service::{router, AppState, ServiceConfig};
use serde_json::{json, Value};
use tower::ServiceExt;

/// 2025-01-01T00:00:00Z
pub const T0: i64 = 1_735_689_600;

pub struct TestApp {
    pub state: Arc<AppState>,
    pub router: Router,
    pub clock: ManualClock,
}

impl TestApp {
    pub fn new() -> Self {
        let clock = ManualClock::new(Instant(T0));
        let store = TemporalStore::in_memory(clock.clone());
        let state =
            AppState::new(Arc::new(KnowledgePack::demo()), store, Arc::new(clock.clone()), ServiceConfig::default())
                .unwrap();
        TestApp { router: router(state.clone()), state, clock }
    }

    pub async fn call(&self, method: Method, path: &str, body: Option<Value>) -> (StatusCode, Value) {
        call(&self.router, method, path, body).await
    }

    pub async fn get(&self, path: &str) -> (StatusCode, Value) {
        self.call(Method::GET, path, None).await
    }

    pub async fn post(&self, path: &str, body: Value) -> (StatusCode, Value) {
        self.call(Method::POST, path, Some(body)).await
    }

    pub async fn fingerprint(&self) -> u64 {
        self.state.store().read().await.fingerprint()
    }

    /// Starts a session and returns its id.
    pub async fn start(&self, patient: &str) -> String {
        let (status, body) = self.post("/sessions", json!({ "patient_id": patient })).await;
        assert_eq!(status, StatusCode::CREATED, "{body}");
        body["session_id"].as_str().unwrap().to_owned()
    }
}

pub async fn call(router: &Router, method: Method, path: &str, body: Option<Value>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(path);
    let body = match body {
        Some(v) => {
            req = req.header("content-type", "application/json");
            Body::from(v.to_string())
        }
        None => Body::empty(),
    };
    let resp = router.clone().oneshot(req.body(body).unwrap()).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value: Value = serde_json::from_slice(&bytes)
        .unwrap_or_else(|_| panic!("{path}: non-JSON body {:?}", String::from_utf8_lossy(&bytes)));
    check_schema(path, status, &value);
    (status, value)
}

pub fn patient_x() -> Value {
    json!({ "strange_smell": 0.1, "sneezing": 0.7, "nasal_congestion": 0.4, "runny_nose": 0.6 })
}

fn schemas() -> &'static HashMap<&'static str, jsonschema::Validator> {
    static CELL: OnceLock<HashMap<&'static str, jsonschema::Validator>> = OnceLock::new();
    CELL.get_or_init(|| {
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas");
        ["session", "parts", "subparts", "symptoms", "question", "diagnosis", "finalize", "tsql", "history", "error"]
            .into_iter()
            .map(|name| {
                let text = std::fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
                let schema: Value = serde_json::from_str(&text).unwrap();
                (name, jsonschema::validator_for(&schema).unwrap_or_else(|e| panic!("{name}: {e}")))
            })
            .collect()
    })
}

pub fn schema_for(path: &str, status: StatusCode) -> &'static str {
    if !status.is_success() {
        return "error";
    }
    let path = path.split('?').next().unwrap();
    let segs: Vec<&str> = path.trim_matches('/').split('/').collect();
    match segs.as_slice() {
        ["sessions"] | ["sessions", _] | ["sessions", _, "symptoms"] | ["sessions", _, "answers"] => "session",
        ["sessions", _, "question"] => "question",
        ["sessions", _, "diagnosis"] => "diagnosis",
        ["sessions", _, "finalize"] => "finalize",
        ["body", "parts"] => "parts",
        ["body", _, "subparts"] => "subparts",
        ["subparts", _, "symptoms"] => "symptoms",
        ["tsql"] => "tsql",
        ["patients", _, "history"] => "history",
        other => panic!("no schema for {other:?}"),
    }
}

pub fn check_schema(path: &str, status: StatusCode, body: &Value) {
    let name = schema_for(path, status);
    let v = &schemas()[name];
    let errors: Vec<String> = v.iter_errors(body).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{path} ({status}) violates {name}.json: {errors:?}\n{body}");
}
