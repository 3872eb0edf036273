//! Filter query evaluation.
//!
//! A record matches when it satisfies every clause. Hits carry a relevance
//! score, the mean of the matched detection scores over all scored terms
//! (1.0 when the query has no scored clause). Every sort falls back to
//! timestamp ascending, then record id ascending.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::str::FromStr;

use chrono::{DateTime, FixedOffset, NaiveDate, Weekday};
use serde::Serialize;

use super::geo::haversine_km;
use super::index::IndexSet;
use crate::corpus::{DetectionKind, GeoPoint};
use crate::dsl::{Clause, FilterQuery, Keyword, SortKey};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatchedTerm {
    pub kind: DetectionKind,
    pub term: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hit {
    pub id: String,
    #[serde(skip)]
    pub ordinal: u32,
    pub timestamp: DateTime<FixedOffset>,
    pub score: f64,
    pub matched: Vec<MatchedTerm>,
    pub cluster_id: u32,
    pub object_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance_km: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ResultPage {
    pub hits: Vec<Hit>,
    pub total_before_limit: usize,
}

impl ResultPage {
    pub fn ids(&self) -> Vec<&str> {
        self.hits.iter().map(|h| h.id.as_str()).collect()
    }

    pub fn truncate(mut self, limit: usize) -> Self {
        self.hits.truncate(limit);
        self
    }
}

pub(crate) fn parse_weekday(text: &str) -> Option<Weekday> {
    Weekday::from_str(text).ok()
}

pub(crate) fn parse_date_term(text: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(text, "%Y/%m/%d").ok()
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn sorted_union(mut parts: Vec<u32>) -> Vec<u32> {
    parts.sort_unstable();
    parts.dedup();
    parts
}

impl IndexSet {
    /// Ordinals satisfying one clause, ascending.
    fn clause_ordinals(&self, clause: &Clause, global_score: f64) -> Vec<u32> {
        match clause.keyword {
            Keyword::Concepts | Keyword::Objects | Keyword::Attributes => {
                let kind = clause.keyword.detection_kind().expect("detection keyword");
                let mut acc: Option<Vec<u32>> = None;
                for term in &clause.terms {
                    let threshold = term.min_score.unwrap_or(global_score);
                    let ords: Vec<u32> = self
                        .postings(kind, &term.text)
                        .iter()
                        .filter(|p| p.score >= threshold)
                        .map(|p| p.ordinal)
                        .collect();
                    acc = Some(match acc {
                        None => ords,
                        Some(prev) => intersect(&prev, &ords),
                    });
                    if acc.as_ref().is_some_and(Vec::is_empty) {
                        break;
                    }
                }
                acc.unwrap_or_default()
            }
            Keyword::Weekdays => {
                let mut out = Vec::new();
                for term in &clause.terms {
                    if let Some(wd) = parse_weekday(&term.text) {
                        for date in self.dates_on(wd) {
                            out.extend_from_slice(self.day(date));
                        }
                    }
                }
                sorted_union(out)
            }
            Keyword::Timename => {
                let mut out = Vec::new();
                for term in &clause.terms {
                    if let Some(ords) = self.in_timename(&term.text) {
                        out.extend_from_slice(ords);
                    }
                }
                sorted_union(out)
            }
            Keyword::Location => {
                let radius = self.settings().coordinate_radius_km;
                let mut out = Vec::new();
                for term in &clause.terms {
                    match term.coordinate() {
                        Some((lat, lon)) => {
                            let center = GeoPoint { lat, lon };
                            out.extend(self.geo_list().iter().copied().filter(|&o| {
                                let g = self.record(o).geo.expect("geo_list has coordinates");
                                haversine_km(center, g) <= radius
                            }));
                        }
                        None => out.extend_from_slice(self.at_location(&term.text)),
                    }
                }
                sorted_union(out)
            }
            Keyword::Date => {
                let mut out = Vec::new();
                for term in &clause.terms {
                    if let Some(date) = parse_date_term(&term.text) {
                        out.extend_from_slice(self.day(date));
                    }
                }
                sorted_union(out)
            }
        }
    }

    /// Ordinals matching every clause, ascending. Ignores Reduced and limit.
    pub fn matching_ordinals(&self, q: &FilterQuery) -> Vec<u32> {
        let mut clauses: Vec<&Clause> = q.clauses.iter().collect();
        // detection clauses first: their postings are usually the most selective
        clauses.sort_by_key(|c| c.keyword.detection_kind().is_none());
        let mut acc: Option<Vec<u32>> = None;
        for clause in clauses {
            let ords = self.clause_ordinals(clause, q.options.global_score);
            acc = Some(match acc {
                None => ords,
                Some(prev) => intersect(&prev, &ords),
            });
            if acc.as_ref().is_some_and(Vec::is_empty) {
                break;
            }
        }
        acc.unwrap_or_else(|| (0..self.len() as u32).collect())
    }

    pub(crate) fn make_hit(&self, ordinal: u32, q: &FilterQuery) -> Hit {
        let rec = self.record(ordinal);
        let mut matched = Vec::new();
        let mut sum = 0.0;
        for clause in &q.clauses {
            let Some(kind) = clause.keyword.detection_kind() else {
                continue;
            };
            for term in &clause.terms {
                let score = rec
                    .detection_score(kind, &term.text)
                    .expect("matched records carry every required term");
                sum += score;
                matched.push(MatchedTerm {
                    kind,
                    term: term.text.clone(),
                    score,
                });
            }
        }
        let score = if matched.is_empty() {
            1.0
        } else {
            sum / matched.len() as f64
        };
        let object_count = rec
            .detections
            .iter()
            .filter(|d| d.kind == DetectionKind::Object && d.score >= q.options.global_score)
            .count();
        Hit {
            id: rec.id.clone(),
            ordinal,
            timestamp: rec.timestamp,
            score,
            matched,
            cluster_id: rec.cluster_id,
            object_count,
            distance_km: None,
        }
    }

    /// Hits for the query after Reduced, in chronological order, unlimited.
    pub(crate) fn collect_hits(&self, q: &FilterQuery) -> Vec<Hit> {
        let hits: Vec<Hit> = self
            .matching_ordinals(q)
            .into_iter()
            .map(|o| self.make_hit(o, q))
            .collect();
        if q.options.reduced {
            reduce(hits)
        } else {
            hits
        }
    }

    pub fn evaluate(&self, q: &FilterQuery) -> ResultPage {
        let mut hits = self.collect_hits(q);
        sort_hits(&mut hits, q.options.sort);
        let total_before_limit = hits.len();
        hits.truncate(q.options.limit);
        ResultPage {
            hits,
            total_before_limit,
        }
    }
}

/// Keeps the best hit of each cluster: highest relevance, then earliest.
/// Input and output are in chronological order.
fn reduce(hits: Vec<Hit>) -> Vec<Hit> {
    let mut best: BTreeMap<u32, usize> = BTreeMap::new();
    for (i, h) in hits.iter().enumerate() {
        best.entry(h.cluster_id)
            .and_modify(|b| {
                if h.score > hits[*b].score {
                    *b = i;
                }
            })
            .or_insert(i);
    }
    let mut keep: Vec<usize> = best.into_values().collect();
    keep.sort_unstable();
    let mut hits: Vec<Option<Hit>> = hits.into_iter().map(Some).collect();
    keep.into_iter()
        .map(|i| hits[i].take().expect("each index kept once"))
        .collect()
}

fn chronological(a: &Hit, b: &Hit) -> Ordering {
    a.timestamp.cmp(&b.timestamp).then_with(|| a.id.cmp(&b.id))
}

pub(crate) fn sort_hits(hits: &mut [Hit], sort: SortKey) {
    match sort {
        SortKey::Date => hits.sort_by(chronological),
        SortKey::Confidence => hits.sort_by(|a, b| {
            b.score
                .total_cmp(&a.score)
                .then_with(|| chronological(a, b))
        }),
        SortKey::ObjectCount => hits.sort_by(|a, b| {
            b.object_count
                .cmp(&a.object_count)
                .then_with(|| chronological(a, b))
        }),
    }
}
