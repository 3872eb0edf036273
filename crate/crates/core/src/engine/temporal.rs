//! Chained queries: find chronologically ordered tuples `(r1, ..., rn)` where
//! `ri` matches stage `i`, timestamps strictly increase, consecutive gaps stay
//! within the span policy and, by default, all elements share a date.
//!
//! Results are presented once per first element with its earliest-completion
//! tuple: the valid tuple whose reversed ordinal sequence `(rn, ..., r2)` is
//! lexicographically smallest, i.e. the one that finishes first, with ties
//! resolved by the earliest preceding elements.

use chrono::Duration;
use serde::{Deserialize, Serialize};

use super::evaluate::Hit;
use super::index::IndexSet;
use super::EngineError;
use crate::dsl::{canonical_text, options_key, stable_hash, FilterQuery};

/// Upper bound on the instant difference of two records sharing a local date
/// (24 h plus the widest possible spread of UTC offsets).
const SAME_DATE_MAX_SECS: i64 = 52 * 3600;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanPolicy {
    /// Maximum gap between consecutive elements, in seconds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_span_secs: Option<i64>,
    /// Require consecutive elements to share a local calendar date.
    pub same_day: bool,
}

impl Default for SpanPolicy {
    fn default() -> Self {
        SpanPolicy {
            max_span_secs: None,
            same_day: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalQuery {
    pub stages: Vec<FilterQuery>,
    #[serde(default)]
    pub policy: SpanPolicy,
}

impl TemporalQuery {
    pub fn new(stages: Vec<FilterQuery>, policy: SpanPolicy) -> Result<Self, EngineError> {
        let tq = TemporalQuery { stages, policy };
        tq.validate()?;
        Ok(tq)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.stages.len() < 2 {
            return Err(EngineError::TooFewStages(self.stages.len()));
        }
        if let Some(s) = self.policy.max_span_secs {
            if s < 0 {
                return Err(EngineError::InvalidParameter(format!(
                    "max_span must not be negative, got {s}"
                )));
            }
        }
        Ok(())
    }

    /// Canonical stage strings and a stable id covering stages, per-stage
    /// options and the span policy.
    pub fn canonical(&self) -> (Vec<String>, String) {
        let texts: Vec<String> = self.stages.iter().map(canonical_text).collect();
        let mut parts: Vec<String> = Vec::new();
        for (t, s) in texts.iter().zip(&self.stages) {
            parts.push(t.clone());
            parts.push(options_key(&s.options));
        }
        parts.push(format!(
            "span={};same_day={}",
            self.policy
                .max_span_secs
                .map_or_else(|| "none".to_owned(), |s| s.to_string()),
            self.policy.same_day
        ));
        let refs: Vec<&str> = parts.iter().map(String::as_str).collect();
        (texts, stable_hash(&refs))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemporalMatch {
    /// One hit per stage, in stage order.
    pub hits: Vec<Hit>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct TemporalPage {
    pub matches: Vec<TemporalMatch>,
    pub total_before_limit: usize,
}

impl IndexSet {
    fn links(&self, a: u32, b: u32, policy: SpanPolicy) -> bool {
        let (ra, rb) = (self.record(a), self.record(b));
        if rb.timestamp <= ra.timestamp {
            return false;
        }
        if let Some(span) = policy.max_span_secs {
            if rb.timestamp - ra.timestamp > Duration::seconds(span) {
                return false;
            }
        }
        !policy.same_day || ra.local_date() == rb.local_date()
    }

    /// Index range of `next` (sorted ordinals) that can follow `from`,
    /// before the date and strictness checks.
    fn successor_window(&self, from: u32, next: &[u32], policy: SpanPolicy) -> std::ops::Range<usize> {
        let t = self.record(from).timestamp;
        let lo = next.partition_point(|&o| self.record(o).timestamp <= t);
        let bound = match (policy.max_span_secs, policy.same_day) {
            (Some(s), true) => Some(s.min(SAME_DATE_MAX_SECS)),
            (Some(s), false) => Some(s),
            (None, true) => Some(SAME_DATE_MAX_SECS),
            (None, false) => None,
        };
        let hi = match bound {
            Some(secs) => {
                let limit = t + Duration::seconds(secs);
                lo + next[lo..].partition_point(|&o| self.record(o).timestamp <= limit)
            }
            None => next.len(),
        };
        lo..hi
    }

    fn stage_hits(&self, tq: &TemporalQuery) -> Vec<Vec<Hit>> {
        tq.stages.iter().map(|q| self.collect_hits(q)).collect()
    }

    pub fn evaluate_temporal(&self, tq: &TemporalQuery) -> Result<TemporalPage, EngineError> {
        tq.validate()?;
        let stage_hits = self.stage_hits(tq);
        let ords: Vec<Vec<u32>> = stage_hits
            .iter()
            .map(|hs| hs.iter().map(|h| h.ordinal).collect())
            .collect();
        let n = ords.len();

        // best[i][j]: earliest-completion path (indices into stage hit lists)
        // starting at stage i's j-th hit.
        let mut best: Vec<Vec<Option<Vec<usize>>>> = vec![Vec::new(); n];
        best[n - 1] = (0..ords[n - 1].len()).map(|j| Some(vec![j])).collect();
        for i in (0..n - 1).rev() {
            let (next_ords, next_best) = (&ords[i + 1], &best[i + 1]);
            let row: Vec<Option<Vec<usize>>> = ords[i]
                .iter()
                .map(|&from| {
                    let mut chosen: Option<&Vec<usize>> = None;
                    for k in self.successor_window(from, next_ords, tq.policy) {
                        let Some(path) = &next_best[k] else { continue };
                        if !self.links(from, next_ords[k], tq.policy) {
                            continue;
                        }
                        let better = chosen.is_none_or(|c| {
                            completes_earlier(path, c, &ords[i + 1..])
                        });
                        if better {
                            chosen = Some(path);
                        }
                    }
                    chosen.cloned()
                })
                .collect();
            best[i] = row.into_iter().enumerate().map(|(j, p)| {
                p.map(|mut rest| {
                    rest.insert(0, j);
                    rest
                })
            }).collect();
        }

        let mut matches: Vec<TemporalMatch> = best[0]
            .iter()
            .flatten()
            .map(|path| TemporalMatch {
                hits: path
                    .iter()
                    .enumerate()
                    .map(|(stage, &j)| stage_hits[stage][j].clone())
                    .collect(),
            })
            .collect();
        matches.sort_by(|a, b| {
            let (x, y) = (&a.hits[0], &b.hits[0]);
            x.timestamp.cmp(&y.timestamp).then_with(|| x.id.cmp(&y.id))
        });
        let total_before_limit = matches.len();
        let limit = tq.stages.last().expect("at least two stages").options.limit;
        matches.truncate(limit);
        Ok(TemporalPage {
            matches,
            total_before_limit,
        })
    }

    /// Every valid tuple, as record ids, in lexicographic ordinal order.
    /// Stops with an error once more than `max_tuples` are found.
    pub fn enumerate_temporal(
        &self,
        tq: &TemporalQuery,
        max_tuples: usize,
    ) -> Result<Vec<Vec<String>>, EngineError> {
        tq.validate()?;
        let ords: Vec<Vec<u32>> = self
            .stage_hits(tq)
            .iter()
            .map(|hs| hs.iter().map(|h| h.ordinal).collect())
            .collect();
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(ords.len());
        for &first in &ords[0] {
            path.push(first);
            self.extend_tuples(&ords, tq.policy, &mut path, &mut out, max_tuples)?;
            path.pop();
        }
        Ok(out)
    }

    fn extend_tuples(
        &self,
        ords: &[Vec<u32>],
        policy: SpanPolicy,
        path: &mut Vec<u32>,
        out: &mut Vec<Vec<String>>,
        max_tuples: usize,
    ) -> Result<(), EngineError> {
        if path.len() == ords.len() {
            if out.len() == max_tuples {
                return Err(EngineError::TooManyTuples(max_tuples));
            }
            out.push(path.iter().map(|&o| self.record(o).id.clone()).collect());
            return Ok(());
        }
        let last = *path.last().expect("path starts non-empty");
        let next = &ords[path.len()];
        for k in self.successor_window(last, next, policy) {
            if self.links(last, next[k], policy) {
                path.push(next[k]);
                self.extend_tuples(ords, policy, path, out, max_tuples)?;
                path.pop();
            }
        }
        Ok(())
    }
}

/// Compares two completion paths (indices into the stage lists `ords`) by
/// their reversed ordinal sequences.
fn completes_earlier(a: &[usize], b: &[usize], ords: &[Vec<u32>]) -> bool {
    for stage in (0..a.len()).rev() {
        let (x, y) = (ords[stage][a[stage]], ords[stage][b[stage]]);
        if x != y {
            return x < y;
        }
    }
    false
}
