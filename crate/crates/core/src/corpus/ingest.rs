//! JSON-lines metadata ingestion.
//!
//! Each non-blank line holds one object:
//!
//! ```text
//! {"id":"20160905_081512","ts":"2016-09-05T08:15:12+01:00","lat":53.38,"lon":-6.59,
//!  "loc":"Home","detections":[{"kind":"object","term":"person","score":0.81,
//!  "bbox":{"x":0.1,"y":0.2,"w":0.3,"h":0.4}}],"feat":[0.1,0.2]}
//! ```
//!
//! `lat`/`lon` must appear together; `loc`, `detections`, `feat` are optional.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use chrono::DateTime;
use serde::{Deserialize, Serialize};

use super::cluster::{cluster_similar, ClusterParams};
use super::model::{BoundingBox, Corpus, Detection, DetectionKind, GeoPoint, ImageRecord};
use super::CorpusError;

/// Tolerance for the unit-norm invariant on stored feature vectors.
pub const FEATURE_NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IngestConfig {
    pub cluster: ClusterParams,
}

/// One line of the metadata file, as it appears on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetadataLine {
    pub id: String,
    pub ts: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loc: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub detections: Vec<MetadataDetection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feat: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetadataDetection {
    pub kind: DetectionKind,
    pub term: String,
    pub score: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bbox: Option<BoundingBox>,
}

pub fn ingest_corpus(path: &Path, config: &IngestConfig) -> Result<Corpus, CorpusError> {
    let file = File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    ingest_reader(BufReader::new(file), config)
}

pub fn ingest_str(text: &str, config: &IngestConfig) -> Result<Corpus, CorpusError> {
    ingest_reader(text.as_bytes(), config)
}

pub fn ingest_reader<R: Read>(reader: R, config: &IngestConfig) -> Result<Corpus, CorpusError> {
    let reader = BufReader::new(reader);
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    let mut feature_dim: Option<usize> = None;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| CorpusError::Io {
            path: format!("line {line_no}"),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let mut de = serde_json::Deserializer::from_str(&line);
        let raw: MetadataLine = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let field = e.path().to_string();
            CorpusError::Malformed {
                line: line_no,
                field: if field == "." { "<record>".into() } else { field },
                message: e.into_inner().to_string(),
            }
        })?;
        let record = validate(raw, line_no)?;
        if let Some(f) = &record.feature {
            match feature_dim {
                None => feature_dim = Some(f.len()),
                Some(d) if d != f.len() => {
                    return Err(CorpusError::FeatureDimension {
                        id: record.id.clone(),
                        expected: d,
                        found: f.len(),
                    })
                }
                Some(_) => {}
            }
        }
        if !seen.insert(record.id.clone()) {
            return Err(CorpusError::DuplicateId {
                line: line_no,
                id: record.id,
            });
        }
        records.push(record);
    }

    records.sort_by(|a, b| {
        a.timestamp
            .cmp(&b.timestamp)
            .then_with(|| a.id.cmp(&b.id))
    });
    let clusters = cluster_similar(&records, config.cluster)?;
    for (rec, cid) in records.iter_mut().zip(clusters) {
        rec.cluster_id = cid;
    }
    Ok(Corpus::from_sorted(records, feature_dim))
}

fn malformed(line: usize, field: impl Into<String>, message: impl Into<String>) -> CorpusError {
    CorpusError::Malformed {
        line,
        field: field.into(),
        message: message.into(),
    }
}

fn out_of_range(line: usize, field: impl Into<String>, value: f64) -> CorpusError {
    CorpusError::OutOfRange {
        line,
        field: field.into(),
        value,
    }
}

fn validate(raw: MetadataLine, line: usize) -> Result<ImageRecord, CorpusError> {
    if raw.id.trim().is_empty() {
        return Err(malformed(line, "id", "id must not be empty"));
    }
    let timestamp = DateTime::parse_from_rfc3339(&raw.ts)
        .map_err(|e| malformed(line, "ts", format!("expected RFC-3339 timestamp: {e}")))?;
    if timestamp.timestamp_subsec_nanos() != 0 {
        return Err(malformed(line, "ts", "timestamps have second precision"));
    }

    let geo = match (raw.lat, raw.lon) {
        (None, None) => None,
        (Some(lat), Some(lon)) => {
            if !(-90.0..=90.0).contains(&lat) {
                return Err(out_of_range(line, "lat", lat));
            }
            if !(-180.0..=180.0).contains(&lon) {
                return Err(out_of_range(line, "lon", lon));
            }
            Some(GeoPoint { lat, lon })
        }
        (Some(_), None) => return Err(malformed(line, "lon", "lat given without lon")),
        (None, Some(_)) => return Err(malformed(line, "lat", "lon given without lat")),
    };

    let named_location = match raw.loc {
        Some(l) if l.trim().is_empty() => None,
        Some(l) => Some(l.trim().to_owned()),
        None => None,
    };

    let mut detections = Vec::with_capacity(raw.detections.len());
    for (i, d) in raw.detections.into_iter().enumerate() {
        let term = d.term.trim().to_lowercase();
        if term.is_empty() {
            return Err(malformed(
                line,
                format!("detections[{i}].term"),
                "term must not be empty",
            ));
        }
        if !(0.0..=1.0).contains(&d.score) {
            return Err(out_of_range(line, format!("detections[{i}].score"), d.score));
        }
        if let Some(b) = d.bbox {
            if d.kind != DetectionKind::Object {
                return Err(malformed(
                    line,
                    format!("detections[{i}].bbox"),
                    "bounding boxes are only allowed on object detections",
                ));
            }
            for (name, v) in [("x", b.x), ("y", b.y), ("w", b.w), ("h", b.h)] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(out_of_range(line, format!("detections[{i}].bbox.{name}"), v));
                }
            }
        }
        detections.push(Detection {
            kind: d.kind,
            term,
            score: d.score,
            bbox: d.bbox,
        });
    }

    let feature = match raw.feat {
        None => None,
        Some(f) => Some(normalize_feature(f).map_err(|msg| malformed(line, "feat", msg))?),
    };

    Ok(ImageRecord {
        id: raw.id,
        timestamp,
        geo,
        named_location,
        detections,
        feature,
        cluster_id: 0,
    })
}

fn normalize_feature(mut f: Vec<f64>) -> Result<Vec<f64>, String> {
    if f.is_empty() {
        return Err("feature vector must not be empty".into());
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err("feature vector contains non-finite values".into());
    }
    let norm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err("feature vector has zero norm".into());
    }
    if (norm - 1.0).abs() > FEATURE_NORM_TOLERANCE {
        for v in &mut f {
            *v /= norm;
        }
    }
    Ok(f)
}

/// Serializes a record back into its on-disk line form.
pub fn to_metadata_line(rec: &ImageRecord) -> MetadataLine {
    MetadataLine {
        id: rec.id.clone(),
        ts: rec
            .timestamp
            .to_rfc3339_opts(chrono::SecondsFormat::Secs, false),
        lat: rec.geo.map(|g| g.lat),
        lon: rec.geo.map(|g| g.lon),
        loc: rec.named_location.clone(),
        detections: rec
            .detections
            .iter()
            .map(|d| MetadataDetection {
                kind: d.kind,
                term: d.term.clone(),
                score: d.score,
                bbox: d.bbox,
            })
            .collect(),
        feat: rec.feature.clone(),
    }
}
