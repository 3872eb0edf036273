//! Stand-in for a competition judging endpoint.
//!
//! `POST /submit` with `{id, timestamp}` answers 200 when the id is one of
//! the configured targets (or no targets are configured) and 400 otherwise.

use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::StatusCode;
use axum::routing::post;
use axum::{Json, Router};
use serde_json::{json, Value};

use crate::submit::Submission;

#[derive(Debug, Default)]
pub struct MockJudge {
    targets: BTreeSet<String>,
    received: Mutex<Vec<Submission>>,
}

impl MockJudge {
    pub fn new(targets: impl IntoIterator<Item = String>) -> Arc<Self> {
        Arc::new(MockJudge {
            targets: targets.into_iter().collect(),
            received: Mutex::new(Vec::new()),
        })
    }

    /// Well-formed submissions received so far, in arrival order.
    pub fn received(&self) -> Vec<Submission> {
        self.received.lock().expect("mock log lock").clone()
    }

    fn judge(&self, id: &str) -> bool {
        self.targets.is_empty() || self.targets.contains(id)
    }
}

pub fn router(judge: Arc<MockJudge>) -> Router {
    Router::new()
        .route("/submit", post(submit))
        .with_state(judge)
}

async fn submit(
    State(judge): State<Arc<MockJudge>>,
    body: Result<Json<Submission>, JsonRejection>,
) -> (StatusCode, Json<Value>) {
    let Json(sub) = match body {
        Ok(b) => b,
        Err(e) => {
            return (
                StatusCode::BAD_REQUEST,
                Json(json!({ "verdict": "malformed", "message": e.body_text() })),
            )
        }
    };
    let correct = judge.judge(&sub.id);
    tracing::info!(id = %sub.id, correct, "mock judge received submission");
    judge.received.lock().expect("mock log lock").push(sub.clone());
    if correct {
        (StatusCode::OK, Json(json!({ "verdict": "correct", "id": sub.id })))
    } else {
        (StatusCode::BAD_REQUEST, Json(json!({ "verdict": "wrong", "id": sub.id })))
    }
}
