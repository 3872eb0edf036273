//! Lifelog data model, ingestion, near-duplicate clustering and the
//! synthetic corpus generator.

mod cluster;
mod ingest;
mod model;
pub mod synth;

pub use cluster::{
    cluster_similar, cosine_similarity, ClusterParams, DEFAULT_MAX_GAP_SECS, DEFAULT_THRESHOLD,
};
pub use ingest::{
    ingest_corpus, ingest_reader, ingest_str, to_metadata_line, IngestConfig, MetadataDetection,
    MetadataLine, FEATURE_NORM_TOLERANCE,
};
pub use model::{
    weekday_name, BoundingBox, Corpus, Detection, DetectionKind, GeoPoint, ImageRecord,
    NamedTimeTable, TimeWindow,
};

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: field `{field}`: {message}")]
    Malformed {
        line: usize,
        field: String,
        message: String,
    },
    #[error("line {line}: duplicate record id '{id}'")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: field `{field}` out of range: {value}")]
    OutOfRange {
        line: usize,
        field: String,
        value: f64,
    },
    #[error("record '{id}': feature dimension {found} does not match corpus dimension {expected}")]
    FeatureDimension {
        id: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
