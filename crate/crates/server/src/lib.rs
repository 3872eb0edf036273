//! HTTP service, submission client and command line for the lifelog engine.

pub mod api;
pub mod cli;
pub mod config;
pub mod mock;
pub mod service;
pub mod submit;

use std::net::SocketAddr;
use std::sync::Arc;

use anyhow::Context;
use tokio::net::TcpListener;

pub use config::ApiConfig;

/// Loads the corpus named in `config` and serves the API until Ctrl-C.
pub async fn serve(config: ApiConfig) -> anyhow::Result<()> {
    let idx = Arc::new(config.build_index()?);
    tracing::info!(
        records = idx.len(),
        days = idx.days().count(),
        corpus = %config.corpus.display(),
        "corpus loaded"
    );
    if config.submit_url.is_none() {
        tracing::info!("no submit_url configured; submissions run in practice mode");
    }
    let listener = TcpListener::bind(&config.bind)
        .await
        .with_context(|| format!("binding {}", config.bind))?;
    let state = api::AppState::from_config(idx, &config);
    let app = api::router(state, config.assets_dir.as_deref());
    tracing::info!(addr = %listener.local_addr()?, "listening");
    axum::serve(listener, app)
        .with_graceful_shutdown(shutdown_signal())
        .await
        .context("serving http")
}

/// Runs the mock judging endpoint until Ctrl-C.
pub async fn serve_mock(bind: SocketAddr, targets: Vec<String>) -> anyhow::Result<()> {
    let listener = TcpListener::bind(bind)
        .await
        .with_context(|| format!("binding {bind}"))?;
    tracing::info!(addr = %listener.local_addr()?, targets = targets.len(), "mock judge listening");
    axum::serve(listener, mock::router(mock::MockJudge::new(targets)))
        .with_graceful_shutdown(shutdown_signal())
        .await
        .context("serving mock judge")
}

async fn shutdown_signal() {
    if tokio::signal::ctrl_c().await.is_err() {
        std::future::pending::<()>().await;
    }
}
