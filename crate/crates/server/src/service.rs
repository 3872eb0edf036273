//! Request handling shared by the HTTP API and the command line, so both
//! produce identical results for identical inputs.

use std::collections::BTreeMap;

use chrono::{NaiveDate, NaiveTime};
use lifelog_core::corpus::{weekday_name, GeoPoint, ImageRecord};
use lifelog_core::dsl::{canonicalize, parse, FilterQuery, ParseError, QueryOptions, SortKey};
use lifelog_core::engine::{
    EngineError, Hit, IndexSet, Neighbor, SpanPolicy, TemporalMatch, TemporalQuery, LINK_NEIGHBORS,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ServiceError {
    #[error("{error}")]
    Parse {
        error: ParseError,
        stage: Option<usize>,
    },
    #[error("{0}")]
    NotFound(String),
    #[error("{0}")]
    BadRequest(String),
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::Parse { .. } => "parse_error",
            ServiceError::NotFound(_) => "not_found",
            ServiceError::BadRequest(_) => "bad_request",
        }
    }
}

impl From<EngineError> for ServiceError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::UnknownId(_) => ServiceError::NotFound(e.to_string()),
            _ => ServiceError::BadRequest(e.to_string()),
        }
    }
}

/// Result-shaping settings as they arrive from a client; unset fields take
/// the engine defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsInput {
    #[serde(default)]
    pub score: Option<f64>,
    #[serde(default)]
    pub limit: Option<usize>,
    #[serde(default)]
    pub reduced: Option<bool>,
    #[serde(default)]
    pub sort: Option<SortKey>,
}

impl OptionsInput {
    /// Fills every unset field from `fallback`.
    pub fn or(self, fallback: OptionsInput) -> OptionsInput {
        OptionsInput {
            score: self.score.or(fallback.score),
            limit: self.limit.or(fallback.limit),
            reduced: self.reduced.or(fallback.reduced),
            sort: self.sort.or(fallback.sort),
        }
    }

    pub fn resolve(&self) -> Result<QueryOptions, ServiceError> {
        let d = QueryOptions::default();
        let o = QueryOptions {
            global_score: self.score.unwrap_or(d.global_score),
            limit: self.limit.unwrap_or(d.limit),
            reduced: self.reduced.unwrap_or(d.reduced),
            sort: self.sort.unwrap_or(d.sort),
        };
        o.validate().map_err(ServiceError::BadRequest)?;
        Ok(o)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResponse {
    /// Canonical form of the query text.
    pub query: String,
    /// Stable id of query plus options; also the history entry id.
    pub hash: String,
    pub options: QueryOptions,
    pub total: usize,
    pub returned: usize,
    pub hits: Vec<Hit>,
}

pub fn parse_query(text: &str, options: &OptionsInput) -> Result<FilterQuery, ServiceError> {
    let q = parse(text).map_err(|error| ServiceError::Parse { error, stage: None })?;
    Ok(q.with_options(options.resolve()?))
}

pub fn search(idx: &IndexSet, q: &FilterQuery) -> SearchResponse {
    let c = canonicalize(q);
    let page = idx.evaluate(q);
    SearchResponse {
        query: c.text,
        hash: c.hash,
        options: q.options,
        total: page.total_before_limit,
        returned: page.hits.len(),
        hits: page.hits,
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemporalRequest {
    pub stages: Vec<String>,
    #[serde(default)]
    pub max_span_secs: Option<i64>,
    #[serde(default)]
    pub same_day: Option<bool>,
    #[serde(default)]
    pub options: OptionsInput,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TemporalResponse {
    pub stages: Vec<String>,
    pub hash: String,
    pub policy: SpanPolicy,
    pub options: QueryOptions,
    pub total: usize,
    pub returned: usize,
    pub matches: Vec<TemporalMatch>,
}

pub fn parse_temporal(req: &TemporalRequest) -> Result<TemporalQuery, ServiceError> {
    let options = req.options.resolve()?;
    let stages = req
        .stages
        .iter()
        .enumerate()
        .map(|(i, text)| {
            parse(text)
                .map(|q| q.with_options(options))
                .map_err(|error| ServiceError::Parse {
                    error,
                    stage: Some(i),
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let policy = SpanPolicy {
        max_span_secs: req.max_span_secs,
        same_day: req.same_day.unwrap_or(SpanPolicy::default().same_day),
    };
    Ok(TemporalQuery::new(stages, policy)?)
}

pub fn search_temporal(idx: &IndexSet, tq: &TemporalQuery) -> Result<TemporalResponse, ServiceError> {
    let page = idx.evaluate_temporal(tq)?;
    let (stages, hash) = tq.canonical();
    Ok(TemporalResponse {
        stages,
        hash,
        policy: tq.policy,
        options: tq.stages[0].options,
        total: page.total_before_limit,
        returned: page.matches.len(),
        matches: page.matches,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImageResponse {
    pub record: ImageRecord,
    pub local_date: NaiveDate,
    pub local_time: NaiveTime,
    pub weekday: &'static str,
    /// Named times whose window contains the capture time.
    pub time_names: Vec<String>,
    pub neighbors: Vec<Neighbor>,
    /// Follow-up queries as canonical query text.
    pub links: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image_url: Option<String>,
}

pub fn image(idx: &IndexSet, id: &str, image_url: Option<String>) -> Result<ImageResponse, ServiceError> {
    let rec = idx
        .record_by_id(id)
        .ok_or_else(|| ServiceError::NotFound(format!("unknown record id '{id}'")))?;
    let links = idx
        .link_queries(id)?
        .into_iter()
        .map(|(name, q)| (name, canonicalize(&q).text))
        .collect();
    let time = rec.local_time();
    Ok(ImageResponse {
        record: rec.clone(),
        local_date: rec.local_date(),
        local_time: time,
        weekday: weekday_name(rec.weekday()),
        time_names: idx
            .settings()
            .time_table
            .iter()
            .filter(|(_, w)| w.contains(time))
            .map(|(n, _)| n.to_owned())
            .collect(),
        neighbors: idx.neighbors(id, LINK_NEIGHBORS)?,
        links,
        image_url,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeoResponse {
    pub center: GeoPoint,
    pub radius_km: f64,
    pub total: usize,
    pub returned: usize,
    pub hits: Vec<Hit>,
}

pub fn geo(
    idx: &IndexSet,
    lat: f64,
    lon: f64,
    radius_km: f64,
    limit: Option<usize>,
) -> Result<GeoResponse, ServiceError> {
    let center = GeoPoint::new(lat, lon).ok_or_else(|| {
        ServiceError::BadRequest(format!("center ({lat}, {lon}) is not a valid coordinate"))
    })?;
    if limit == Some(0) {
        return Err(ServiceError::BadRequest("limit must be positive".into()));
    }
    let page = idx.radius_search(center, radius_km)?;
    let total = page.total_before_limit;
    let page = page.truncate(limit.unwrap_or(usize::MAX));
    Ok(GeoResponse {
        center,
        radius_km,
        total,
        returned: page.hits.len(),
        hits: page.hits,
    })
}
