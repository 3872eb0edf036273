#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use lifelog_core::corpus::{ingest_corpus, IngestConfig};
use lifelog_core::engine::{EngineSettings, IndexSet};
use lifelog_server::api::{self, AppState};
use lifelog_server::submit::Submitter;
use tokio::net::TcpListener;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn demo_index() -> Arc<IndexSet> {
    let corpus = ingest_corpus(&data_dir().join("demo.jsonl"), &IngestConfig::default())
        .expect("bundled demo corpus ingests");
    Arc::new(IndexSet::build(Arc::new(corpus), EngineSettings::default()))
}

/// Serves `app` on an ephemeral port and returns its base URL.
pub async fn spawn(app: axum::Router) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move {
        axum::serve(listener, app).await.unwrap();
    });
    format!("http://{addr}")
}

pub async fn spawn_api(idx: Arc<IndexSet>, submitter: Submitter) -> String {
    spawn(api::router(AppState::new(idx, submitter, 200), None)).await
}
