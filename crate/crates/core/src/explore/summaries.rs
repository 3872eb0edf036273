use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use chrono::{NaiveDate, Weekday};
use serde::Serialize;

use super::Facet;
use crate::corpus::weekday_name;
use crate::engine::IndexSet;

pub const DEFAULT_TOP_K: usize = 5;
pub const DEFAULT_IMAGES_PER_DAY: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum SummarySort {
    #[default]
    DateAsc,
    /// Days with the most images carrying `term` first; ties by date.
    TermFrequency { facet: Facet, term: String },
}

impl FromStr for SummarySort {
    type Err = String;

    /// `date`, or `<facet>:<term>` such as `object:car` or `location:home`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("date") || s.is_empty() {
            return Ok(SummarySort::DateAsc);
        }
        let (facet, term) = s
            .split_once(':')
            .ok_or_else(|| format!("unknown sort '{s}' (expected 'date' or '<kind>:<term>')"))?;
        let term = term.trim().to_lowercase();
        if term.is_empty() {
            return Err(format!("sort '{s}' has an empty term"));
        }
        Ok(SummarySort::TermFrequency {
            facet: facet.parse()?,
            term,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRequest {
    pub page: usize,
    pub page_size: usize,
    pub weekdays: Option<Vec<Weekday>>,
    pub sort: SummarySort,
    pub images_per_day: usize,
    pub top_k: usize,
}

impl Default for SummaryRequest {
    fn default() -> Self {
        SummaryRequest {
            page: 0,
            page_size: 6,
            weekdays: None,
            sort: SummarySort::DateAsc,
            images_per_day: DEFAULT_IMAGES_PER_DAY,
            top_k: DEFAULT_TOP_K,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TermCount {
    pub term: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DaySummary {
    pub date: NaiveDate,
    pub weekday: &'static str,
    pub image_count: usize,
    pub representatives: Vec<String>,
    pub top_locations: Vec<TermCount>,
    pub top_concepts: Vec<TermCount>,
    pub top_objects: Vec<TermCount>,
    /// Image count for the sort term, when sorting by term frequency.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sort_count: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryPage {
    pub total_days: usize,
    pub page: usize,
    pub page_size: usize,
    pub days: Vec<DaySummary>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct SummaryError(String);

pub fn day_summaries(req: &SummaryRequest, idx: &IndexSet) -> Result<SummaryPage, SummaryError> {
    if req.page_size == 0 {
        return Err(SummaryError("page_size must be at least 1".into()));
    }
    let mut days: Vec<(NaiveDate, Option<usize>)> = idx
        .days()
        .filter(|(d, _)| {
            req.weekdays
                .as_ref()
                .is_none_or(|set| set.contains(&chrono::Datelike::weekday(d)))
        })
        .map(|(d, ords)| {
            let count = match &req.sort {
                SummarySort::DateAsc => None,
                SummarySort::TermFrequency { facet, term } => {
                    Some(count_in_day(idx, *facet, term, ords))
                }
            };
            (d, count)
        })
        .collect();
    if let SummarySort::TermFrequency { .. } = req.sort {
        days.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    }

    let total_days = days.len();
    let page_days = days
        .into_iter()
        .skip(req.page.saturating_mul(req.page_size))
        .take(req.page_size)
        .map(|(date, sort_count)| summarize_day(idx, date, req, sort_count))
        .collect();
    Ok(SummaryPage {
        total_days,
        page: req.page,
        page_size: req.page_size,
        days: page_days,
    })
}

/// Number of the day's images that carry `term` for `facet`.
fn count_in_day(idx: &IndexSet, facet: Facet, term: &str, day: &[u32]) -> usize {
    facet
        .ordinals(idx, term)
        .iter()
        .filter(|o| day.binary_search(o).is_ok())
        .count()
}

fn top_terms<'a>(terms: impl Iterator<Item = &'a str>, k: usize) -> Vec<TermCount> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in terms {
        *counts.entry(t).or_default() += 1;
    }
    let mut list: Vec<TermCount> = counts
        .into_iter()
        .map(|(term, count)| TermCount {
            term: term.to_owned(),
            count,
        })
        .collect();
    list.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.term.cmp(&b.term)));
    list.truncate(k);
    list
}

fn summarize_day(
    idx: &IndexSet,
    date: NaiveDate,
    req: &SummaryRequest,
    sort_count: Option<usize>,
) -> DaySummary {
    let ords = idx.day(date);
    let records = || ords.iter().map(|&o| idx.record(o));

    // first image of every cluster, chronologically
    let mut seen = BTreeSet::new();
    let heads: Vec<&str> = records()
        .filter(|r| seen.insert(r.cluster_id))
        .map(|r| r.id.as_str())
        .collect();
    let n = req.images_per_day.min(heads.len());
    let representatives = (0..n)
        .map(|i| heads[i * heads.len() / n].to_owned())
        .collect();

    let distinct_terms = |kind| {
        records()
            .flat_map(move |r| {
                r.detections
                    .iter()
                    .filter(move |d| d.kind == kind)
                    .map(|d| d.term.as_str())
                    .collect::<BTreeSet<_>>()
            })
            .collect::<Vec<_>>()
    };

    DaySummary {
        date,
        weekday: weekday_name(chrono::Datelike::weekday(&date)),
        image_count: ords.len(),
        representatives,
        top_locations: top_terms(records().filter_map(|r| r.named_location.as_deref()), req.top_k),
        top_concepts: top_terms(
            distinct_terms(crate::corpus::DetectionKind::Concept).into_iter(),
            req.top_k,
        ),
        top_objects: top_terms(
            distinct_terms(crate::corpus::DetectionKind::Object).into_iter(),
            req.top_k,
        ),
        sort_count,
    }
}
