use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use chrono::Duration;
use lifelog_core::corpus::{ingest_corpus, ClusterParams, IngestConfig, NamedTimeTable, TimeWindow};
use lifelog_core::engine::{EngineSettings, IndexSet, DEFAULT_COORDINATE_RADIUS_KM};
use lifelog_core::explore::DEFAULT_HISTORY_CAPACITY;
use serde::Deserialize;

use crate::service::OptionsInput;

pub const DEFAULT_BIND: &str = "127.0.0.1:8080";

/// Service configuration, read from a TOML file. Relative paths are
/// resolved against the directory holding the file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApiConfig {
    pub corpus: PathBuf,
    #[serde(default = "default_bind")]
    pub bind: String,
    /// Directory of image files named `<id>.<asset_extension>`.
    #[serde(default)]
    pub assets_dir: Option<PathBuf>,
    #[serde(default = "default_extension")]
    pub asset_extension: String,
    /// Submission endpoint; practice mode when absent.
    #[serde(default)]
    pub submit_url: Option<String>,
    #[serde(default = "default_timeout")]
    pub submit_timeout_ms: u64,
    #[serde(default = "default_capacity")]
    pub history_capacity: usize,
    #[serde(default = "default_radius")]
    pub coordinate_radius_km: f64,
    #[serde(default)]
    pub clustering: ClusteringConfig,
    /// Extra or replacement named times, `name = "HH:MM-HH:MM"`.
    #[serde(default)]
    pub time_names: BTreeMap<String, String>,
    /// Result options applied when a request leaves them unset.
    #[serde(default)]
    pub defaults: OptionsInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusteringConfig {
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default = "default_gap")]
    pub max_gap_secs: i64,
}

impl Default for ClusteringConfig {
    fn default() -> Self {
        ClusteringConfig {
            threshold: default_threshold(),
            max_gap_secs: default_gap(),
        }
    }
}

fn default_bind() -> String {
    DEFAULT_BIND.to_owned()
}
fn default_extension() -> String {
    "jpg".to_owned()
}
fn default_timeout() -> u64 {
    5000
}
fn default_capacity() -> usize {
    DEFAULT_HISTORY_CAPACITY
}
fn default_radius() -> f64 {
    DEFAULT_COORDINATE_RADIUS_KM
}
fn default_threshold() -> f64 {
    lifelog_core::corpus::DEFAULT_THRESHOLD
}
fn default_gap() -> i64 {
    lifelog_core::corpus::DEFAULT_MAX_GAP_SECS
}

impl ApiConfig {
    /// A configuration serving `corpus` with every other setting at its default.
    pub fn for_corpus(corpus: impl Into<PathBuf>) -> Self {
        ApiConfig {
            corpus: corpus.into(),
            bind: default_bind(),
            assets_dir: None,
            asset_extension: default_extension(),
            submit_url: None,
            submit_timeout_ms: default_timeout(),
            history_capacity: default_capacity(),
            coordinate_radius_km: default_radius(),
            clustering: ClusteringConfig::default(),
            time_names: BTreeMap::new(),
            defaults: OptionsInput::default(),
        }
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut config: ApiConfig =
            toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.corpus = base.join(&config.corpus);
        config.assets_dir = config.assets_dir.map(|d| base.join(d));
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.history_capacity == 0 {
            bail!("history_capacity must be at least 1");
        }
        if !(self.coordinate_radius_km.is_finite() && self.coordinate_radius_km > 0.0) {
            bail!("coordinate_radius_km must be positive");
        }
        if self.clustering.max_gap_secs < 0 {
            bail!("clustering.max_gap_secs must not be negative");
        }
        self.time_table()?;
        self.defaults
            .resolve()
            .map_err(|e| anyhow::anyhow!("defaults: {e}"))?;
        Ok(())
    }

    pub fn time_table(&self) -> anyhow::Result<NamedTimeTable> {
        let mut table = NamedTimeTable::default();
        for (name, window) in &self.time_names {
            let w: TimeWindow = window
                .parse()
                .map_err(|e: String| anyhow::anyhow!("time_names.{name}: {e}"))?;
            table.set(name, w);
        }
        Ok(table)
    }

    pub fn ingest_config(&self) -> IngestConfig {
        IngestConfig {
            cluster: ClusterParams {
                threshold: self.clustering.threshold,
                max_gap: Duration::seconds(self.clustering.max_gap_secs),
            },
        }
    }

    pub fn engine_settings(&self) -> anyhow::Result<EngineSettings> {
        Ok(EngineSettings {
            time_table: self.time_table()?,
            coordinate_radius_km: self.coordinate_radius_km,
        })
    }

    /// Loads the corpus and builds the indexes.
    pub fn build_index(&self) -> anyhow::Result<IndexSet> {
        let corpus = ingest_corpus(&self.corpus, &self.ingest_config())
            .with_context(|| format!("loading corpus {}", self.corpus.display()))?;
        Ok(IndexSet::build(Arc::new(corpus), self.engine_settings()?))
    }
}
