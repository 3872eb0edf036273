//! Linear-scan reference implementations.

use std::collections::BTreeMap;

use chrono::{Datelike, Timelike};
use lifelog_core::corpus::{DetectionKind, ImageRecord, NamedTimeTable};
use lifelog_core::dsl::{FilterQuery, Keyword, SortKey};
use lifelog_core::engine::SpanPolicy;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleHit {
    pub index: usize,
    pub id: String,
    pub score: f64,
    pub object_count: usize,
}

/// Day of week by Sakamoto's method, 0 = Sunday.
pub fn sakamoto(year: i32, month: u32, day: u32) -> u32 {
    const T: [i32; 12] = [0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4];
    let y = if month < 3 { year - 1 } else { year };
    (y + y / 4 - y / 100 + y / 400 + T[month as usize - 1] + day as i32).rem_euclid(7) as u32
}

const DAY_NAMES: [&str; 7] = [
    "sunday",
    "monday",
    "tuesday",
    "wednesday",
    "thursday",
    "friday",
    "saturday",
];

fn local_parts(rec: &ImageRecord) -> (i32, u32, u32, u32) {
    let local = rec.timestamp.naive_local();
    (
        local.year(),
        local.month(),
        local.day(),
        local.num_seconds_from_midnight(),
    )
}

fn weekday_matches(rec: &ImageRecord, term: &str) -> bool {
    let (y, m, d, _) = local_parts(rec);
    let name = DAY_NAMES[sakamoto(y, m, d) as usize];
    term == name || term == &name[..3]
}

fn date_matches(rec: &ImageRecord, term: &str) -> bool {
    let (y, m, d, _) = local_parts(rec);
    term == format!("{y:04}/{m:02}/{d:02}")
}

fn in_window(secs: u32, start: u32, end: u32) -> bool {
    if start < end {
        secs >= start && secs < end
    } else {
        secs >= start || secs < end
    }
}

fn timename_matches(rec: &ImageRecord, table: &NamedTimeTable, term: &str) -> bool {
    let Some(w) = table.get(term) else {
        return false;
    };
    let (_, _, _, secs) = local_parts(rec);
    in_window(
        secs,
        w.start.num_seconds_from_midnight(),
        w.end.num_seconds_from_midnight(),
    )
}

/// Haversine distance written out step by step.
pub fn distance_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let rad = std::f64::consts::PI / 180.0;
    let phi1 = lat1 * rad;
    let phi2 = lat2 * rad;
    let dphi = (lat2 - lat1) * rad;
    let dlambda = (lon2 - lon1) * rad;
    let s1 = (dphi / 2.0).sin();
    let s2 = (dlambda / 2.0).sin();
    let a = s1 * s1 + phi1.cos() * phi2.cos() * s2 * s2;
    2.0 * 6371.0 * a.sqrt().min(1.0).asin()
}

fn coordinate(text: &str) -> Option<(f64, f64)> {
    let (a, b) = text.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn location_matches(rec: &ImageRecord, term: &str, radius_km: f64) -> bool {
    match coordinate(term) {
        Some((lat, lon)) => rec
            .geo
            .is_some_and(|g| distance_km(lat, lon, g.lat, g.lon) <= radius_km),
        None => rec
            .named_location
            .as_ref()
            .is_some_and(|n| n.to_lowercase() == term),
    }
}

fn best_score(rec: &ImageRecord, kind: DetectionKind, term: &str) -> Option<f64> {
    let mut best: Option<f64> = None;
    for d in &rec.detections {
        if d.kind == kind && d.term == term {
            best = Some(best.map_or(d.score, |b: f64| b.max(d.score)));
        }
    }
    best
}

fn detection_kind(k: Keyword) -> Option<DetectionKind> {
    match k {
        Keyword::Concepts => Some(DetectionKind::Concept),
        Keyword::Objects => Some(DetectionKind::Object),
        Keyword::Attributes => Some(DetectionKind::Attribute),
        _ => None,
    }
}

/// Scores `rec` against `q`; `None` when it does not match.
fn score_record(
    rec: &ImageRecord,
    q: &FilterQuery,
    table: &NamedTimeTable,
    radius_km: f64,
) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for clause in &q.clauses {
        match detection_kind(clause.keyword) {
            Some(kind) => {
                for t in &clause.terms {
                    let s = best_score(rec, kind, &t.text)?;
                    if s < t.min_score.unwrap_or(q.options.global_score) {
                        return None;
                    }
                    sum += s;
                    n += 1;
                }
            }
            None => {
                let any = clause.terms.iter().any(|t| match clause.keyword {
                    Keyword::Weekdays => weekday_matches(rec, &t.text),
                    Keyword::Timename => timename_matches(rec, table, &t.text),
                    Keyword::Location => location_matches(rec, &t.text, radius_km),
                    Keyword::Date => date_matches(rec, &t.text),
                    _ => unreachable!(),
                });
                if !any {
                    return None;
                }
            }
        }
    }
    Some(if n == 0 { 1.0 } else { sum / n as f64 })
}

/// Matching records in corpus order, after Reduced but before sorting.
pub fn matches(
    records: &[ImageRecord],
    q: &FilterQuery,
    table: &NamedTimeTable,
    radius_km: f64,
) -> Vec<OracleHit> {
    let mut hits: Vec<OracleHit> = records
        .iter()
        .enumerate()
        .filter_map(|(index, rec)| {
            score_record(rec, q, table, radius_km).map(|score| OracleHit {
                index,
                id: rec.id.clone(),
                score,
                object_count: rec
                    .detections
                    .iter()
                    .filter(|d| d.kind == DetectionKind::Object && d.score >= q.options.global_score)
                    .count(),
            })
        })
        .collect();
    if q.options.reduced {
        let mut keep: BTreeMap<u32, OracleHit> = BTreeMap::new();
        for h in hits {
            let cluster = records[h.index].cluster_id;
            match keep.get(&cluster) {
                Some(prev) if prev.score >= h.score => {}
                _ => {
                    keep.insert(cluster, h);
                }
            }
        }
        hits = keep.into_values().collect();
        hits.sort_by_key(|h| h.index);
    }
    hits
}

/// Full evaluation: matches, sorted and limited. Returns the page and the
/// number of hits before the limit.
pub fn evaluate(
    records: &[ImageRecord],
    q: &FilterQuery,
    table: &NamedTimeTable,
    radius_km: f64,
) -> (Vec<OracleHit>, usize) {
    let mut hits = matches(records, q, table, radius_km);
    // corpus order is chronological, so a stable sort keeps the tie-break
    match q.options.sort {
        SortKey::Date => {}
        SortKey::Confidence => hits.sort_by(|a, b| b.score.partial_cmp(&a.score).unwrap()),
        SortKey::ObjectCount => hits.sort_by_key(|h| std::cmp::Reverse(h.object_count)),
    }
    let total = hits.len();
    hits.truncate(q.options.limit);
    (hits, total)
}

fn can_follow(a: &ImageRecord, b: &ImageRecord, policy: SpanPolicy) -> bool {
    if b.timestamp <= a.timestamp {
        return false;
    }
    let gap = b.timestamp.timestamp() - a.timestamp.timestamp();
    if policy.max_span_secs.is_some_and(|s| gap > s) {
        return false;
    }
    if policy.same_day {
        let (ya, ma, da, _) = local_parts(a);
        let (yb, mb, db, _) = local_parts(b);
        if (ya, ma, da) != (yb, mb, db) {
            return false;
        }
    }
    true
}

/// Every valid tuple as record indices, by exhaustive nested enumeration.
pub fn temporal_tuples(
    records: &[ImageRecord],
    stages: &[FilterQuery],
    policy: SpanPolicy,
    table: &NamedTimeTable,
    radius_km: f64,
) -> Vec<Vec<usize>> {
    let lists: Vec<Vec<usize>> = stages
        .iter()
        .map(|q| matches(records, q, table, radius_km).iter().map(|h| h.index).collect())
        .collect();
    let mut out = Vec::new();
    let mut path = Vec::new();
    fn walk(
        records: &[ImageRecord],
        lists: &[Vec<usize>],
        policy: SpanPolicy,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let stage = path.len();
        if stage == lists.len() {
            out.push(path.clone());
            return;
        }
        for &cand in &lists[stage] {
            if stage > 0 && !can_follow(&records[path[stage - 1]], &records[cand], policy) {
                continue;
            }
            path.push(cand);
            walk(records, lists, policy, path, out);
            path.pop();
        }
    }
    walk(records, &lists, policy, &mut path, &mut out);
    out
}

/// One tuple per first element: the one whose reversed sequence is
/// smallest. Ordered by first element, truncated to `limit`. Also returns
/// the count before truncation.
pub fn temporal_presentation(tuples: &[Vec<usize>], limit: usize) -> (Vec<Vec<usize>>, usize) {
    let mut best: BTreeMap<usize, &Vec<usize>> = BTreeMap::new();
    for t in tuples {
        let rev: Vec<usize> = t.iter().rev().copied().collect();
        match best.get(&t[0]) {
            Some(b) if b.iter().rev().copied().collect::<Vec<_>>() <= rev => {}
            _ => {
                best.insert(t[0], t);
            }
        }
    }
    let total = best.len();
    let page = best.into_values().take(limit).cloned().collect();
    (page, total)
}

/// Records within `radius_km`, nearest first, as `(index, distance)`.
pub fn radius(records: &[ImageRecord], lat: f64, lon: f64, radius_km: f64) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = records
        .iter()
        .enumerate()
        .filter_map(|(i, r)| {
            let g = r.geo?;
            let d = distance_km(lat, lon, g.lat, g.lon);
            (d <= radius_km).then_some((i, d))
        })
        .collect();
    // stable: equal distances stay chronological
    out.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    out
}

/// Pairwise cosine neighbours of `records[index]`, best first, ties by id.
pub fn neighbors(records: &[ImageRecord], index: usize, k: usize) -> Vec<(String, f64)> {
    let Some(q) = &records[index].feature else {
        return Vec::new();
    };
    let mut out: Vec<(String, f64)> = records
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != index)
        .filter_map(|(_, r)| {
            let f = r.feature.as_ref()?;
            let dot: f64 = q.iter().zip(f).map(|(a, b)| a * b).sum();
            let na: f64 = q.iter().map(|a| a * a).sum::<f64>().sqrt();
            let nb: f64 = f.iter().map(|b| b * b).sum::<f64>().sqrt();
            Some((r.id.clone(), dot / (na * nb)))
        })
        .collect();
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    out.truncate(k);
    out
}

/// Cluster labels recomputed from scratch: positions that start a new
/// cluster, in corpus order.
pub fn cluster_starts(records: &[ImageRecord], threshold: f64, max_gap_secs: i64) -> Vec<bool> {
    (0..records.len())
        .map(|i| {
            if i == 0 {
                return true;
            }
            let (a, b) = (&records[i - 1], &records[i]);
            let (Some(fa), Some(fb)) = (&a.feature, &b.feature) else {
                return true;
            };
            let dot: f64 = fa.iter().zip(fb).map(|(x, y)| x * y).sum();
            let na: f64 = fa.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nb: f64 = fb.iter().map(|x| x * x).sum::<f64>().sqrt();
            let same_date = {
                let (ya, ma, da, _) = local_parts(a);
                let (yb, mb, db, _) = local_parts(b);
                (ya, ma, da) == (yb, mb, db)
            };
            let gap = b.timestamp.timestamp() - a.timestamp.timestamp();
            !(dot / (na * nb) >= threshold && gap <= max_gap_secs && same_date)
        })
        .collect()
}
