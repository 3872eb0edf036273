//! Test support for the lifelog engine: brute-force reference
//! implementations, a replay model of the query history, and random
//! generators for corpora and queries.
//!
//! The oracles only look at raw `ImageRecord` fields and recompute every
//! derived value (weekday, distance, time window membership) on their own.

pub mod gen;
pub mod history_model;
pub mod oracle;

use lifelog_core::corpus::synth::{generate_synthetic, Manifest, SynthParams};
use lifelog_core::corpus::{ingest_str, Corpus, IngestConfig};

/// Generates a synthetic corpus and ingests it through the normal path.
pub fn synthetic(params: &SynthParams) -> (Corpus, Manifest) {
    let synth = generate_synthetic(params).expect("valid synthetic parameters");
    let corpus = ingest_str(&synth.to_jsonl(), &IngestConfig::default())
        .expect("generated corpus ingests cleanly");
    (corpus, synth.manifest)
}
