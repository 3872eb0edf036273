//! Near-duplicate grouping used by the Reduced result mode.
//!
//! Records are walked in chronological order and each one either joins the
//! cluster of its predecessor or opens a new one. A record joins iff both
//! records carry feature vectors, their cosine similarity reaches the
//! threshold, the time gap is at most `max_gap`, and both fall on the same
//! local calendar date. Records without features are always singletons.

use chrono::Duration;

use super::model::ImageRecord;
use super::CorpusError;

pub const DEFAULT_THRESHOLD: f64 = 0.95;
pub const DEFAULT_MAX_GAP_SECS: i64 = 120;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterParams {
    pub threshold: f64,
    pub max_gap: Duration,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams {
            threshold: DEFAULT_THRESHOLD,
            max_gap: Duration::seconds(DEFAULT_MAX_GAP_SECS),
        }
    }
}

pub fn cosine_similarity(a: &[f64], b: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot / (na.sqrt() * nb.sqrt())
}

/// Returns one cluster id per record, numbered from 0 in order of first
/// appearance. `records` must already be sorted by timestamp.
pub fn cluster_similar(
    records: &[ImageRecord],
    params: ClusterParams,
) -> Result<Vec<u32>, CorpusError> {
    if !(params.threshold > 0.0 && params.threshold <= 1.0) {
        return Err(CorpusError::InvalidParameter(format!(
            "cluster threshold must lie in (0, 1], got {}",
            params.threshold
        )));
    }

    let mut dim: Option<usize> = None;
    let mut ids = Vec::with_capacity(records.len());
    let mut next = 0u32;

    for (i, rec) in records.iter().enumerate() {
        if let Some(f) = &rec.feature {
            match dim {
                None => dim = Some(f.len()),
                Some(d) if d != f.len() => {
                    return Err(CorpusError::FeatureDimension {
                        id: rec.id.clone(),
                        expected: d,
                        found: f.len(),
                    })
                }
                Some(_) => {}
            }
        }

        let joins = i > 0 && {
            let prev = &records[i - 1];
            match (&prev.feature, &rec.feature) {
                (Some(a), Some(b)) => {
                    prev.local_date() == rec.local_date()
                        && rec.timestamp - prev.timestamp <= params.max_gap
                        && cosine_similarity(a, b) >= params.threshold
                }
                _ => false,
            }
        };

        if joins {
            ids.push(ids[i - 1]);
        } else {
            ids.push(next);
            next += 1;
        }
    }
    Ok(ids)
}
