//! HTTP/JSON endpoints.
//!
//! Every error is answered with `{"error": {"kind", "message", ...}}`:
//! query-language errors and malformed parameters with 400, unknown record
//! or history ids with 404.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::{HeaderMap, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::{Utc, Weekday};
use lifelog_core::dsl::{list_keywords, SortKey};
use lifelog_core::engine::IndexSet;
use lifelog_core::explore::{
    autocomplete, day_summaries, Completion, Facet, HistoryEntry, HistoryError, HistoryQuery,
    HistoryStore, SummaryRequest, SummarySort, DEFAULT_IMAGES_PER_DAY, DEFAULT_TOP_K,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use tower_http::services::ServeDir;
use tower_http::trace::TraceLayer;

use crate::config::ApiConfig;
use crate::service::{self, OptionsInput, ServiceError, TemporalRequest};
use crate::submit::{SubmitError, Submitter};

pub const SESSION_HEADER: &str = "x-session-id";
pub const DEFAULT_SESSION: &str = "default";
pub const DEFAULT_SUGGESTIONS: usize = 80;
pub const DEFAULT_PAGE_SIZE: usize = 6;

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    idx: Arc<IndexSet>,
    submitter: Submitter,
    histories: Mutex<HashMap<String, HistoryStore>>,
    history_capacity: usize,
    asset_extension: Option<String>,
    defaults: OptionsInput,
}

impl AppState {
    pub fn new(idx: Arc<IndexSet>, submitter: Submitter, history_capacity: usize) -> Self {
        AppState {
            inner: Arc::new(Inner {
                idx,
                submitter,
                histories: Mutex::new(HashMap::new()),
                history_capacity,
                asset_extension: None,
                defaults: OptionsInput::default(),
            }),
        }
    }

    /// State for a configured service: submission endpoint, history
    /// capacity and, when an asset directory is set, image URLs.
    pub fn from_config(idx: Arc<IndexSet>, config: &ApiConfig) -> Self {
        let submitter = Submitter::new(
            config.submit_url.clone(),
            Duration::from_millis(config.submit_timeout_ms),
        );
        AppState {
            inner: Arc::new(Inner {
                idx,
                submitter,
                histories: Mutex::new(HashMap::new()),
                history_capacity: config.history_capacity,
                asset_extension: config
                    .assets_dir
                    .as_ref()
                    .map(|_| config.asset_extension.clone()),
                defaults: config.defaults,
            }),
        }
    }

    pub fn index(&self) -> &IndexSet {
        &self.inner.idx
    }

    fn with_history<T>(&self, session: &str, f: impl FnOnce(&mut HistoryStore) -> T) -> T {
        let mut map = self.inner.histories.lock().unwrap_or_else(|p| p.into_inner());
        let store = map
            .entry(session.to_owned())
            .or_insert_with(|| HistoryStore::new(self.inner.history_capacity));
        f(store)
    }
}

pub fn router(state: AppState, assets_dir: Option<&Path>) -> Router {
    let mut app = Router::new()
        .route("/api/health", get(health))
        .route("/api/keywords", get(keywords))
        .route("/api/search", get(search))
        .route("/api/search/temporal", post(search_temporal))
        .route("/api/summaries", get(summaries))
        .route("/api/autocomplete", get(complete))
        .route("/api/image/{id}", get(image))
        .route("/api/geo", get(geo))
        .route("/api/submit", post(submit))
        .route(
            "/api/history",
            get(history_list).post(history_record).delete(history_clear),
        )
        .route("/api/history/import", post(history_import))
        .route("/api/history/{id}/view", post(history_view));
    if let Some(dir) = assets_dir {
        app = app.nest_service("/images", ServeDir::new(dir));
    }
    app.fallback(not_found)
        .layer(TraceLayer::new_for_http())
        .with_state(state)
}

#[derive(Debug)]
pub struct ApiError(ServiceError);

impl<E: Into<ServiceError>> From<E> for ApiError {
    fn from(e: E) -> Self {
        ApiError(e.into())
    }
}

impl From<HistoryError> for ServiceError {
    fn from(e: HistoryError) -> Self {
        match e {
            HistoryError::UnknownEntry(_) => ServiceError::NotFound(e.to_string()),
            HistoryError::InvalidDocument(_) => ServiceError::BadRequest(e.to_string()),
        }
    }
}

impl From<SubmitError> for ServiceError {
    fn from(e: SubmitError) -> Self {
        ServiceError::NotFound(e.to_string())
    }
}

impl From<QueryRejection> for ServiceError {
    fn from(e: QueryRejection) -> Self {
        ServiceError::BadRequest(e.body_text())
    }
}

impl From<JsonRejection> for ServiceError {
    fn from(e: JsonRejection) -> Self {
        ServiceError::BadRequest(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let e = self.0;
        let status = match e {
            ServiceError::NotFound(_) => StatusCode::NOT_FOUND,
            ServiceError::Parse { .. } | ServiceError::BadRequest(_) => StatusCode::BAD_REQUEST,
        };
        let mut body = json!({ "kind": e.code(), "message": e.to_string() });
        if let ServiceError::Parse { error, stage } = &e {
            body["code"] = json!(error.kind.code());
            body["position"] = json!(error.position);
            if let Some(s) = stage {
                body["stage"] = json!(s);
            }
        }
        (status, Json(json!({ "error": body }))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;
type Params = Result<Query<HashMap<String, String>>, QueryRejection>;

fn bad(msg: impl Into<String>) -> ApiError {
    ApiError(ServiceError::BadRequest(msg.into()))
}

fn opt_param<T: FromStr>(p: &HashMap<String, String>, name: &str) -> Result<Option<T>, ApiError>
where
    T::Err: std::fmt::Display,
{
    match p.get(name).map(|s| s.trim()) {
        None | Some("") => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|e| bad(format!("invalid parameter {name}='{v}': {e}"))),
    }
}

fn req_param<T: FromStr>(p: &HashMap<String, String>, name: &str) -> Result<T, ApiError>
where
    T::Err: std::fmt::Display,
{
    opt_param(p, name)?.ok_or_else(|| bad(format!("missing parameter {name}")))
}

fn session(headers: &HeaderMap, p: &HashMap<String, String>) -> Result<String, ApiError> {
    let s = headers
        .get(SESSION_HEADER)
        .and_then(|v| v.to_str().ok())
        .map(str::to_owned)
        .or_else(|| p.get("session").cloned())
        .unwrap_or_else(|| DEFAULT_SESSION.to_owned());
    if s.is_empty() || s.len() > 128 {
        return Err(bad("session id must be 1 to 128 characters"));
    }
    Ok(s)
}

fn options_from(p: &HashMap<String, String>) -> Result<OptionsInput, ApiError> {
    Ok(OptionsInput {
        score: opt_param(p, "score")?,
        limit: opt_param(p, "limit")?,
        reduced: opt_param(p, "reduced")?,
        sort: opt_param::<SortKey>(p, "sort")?,
    })
}

async fn not_found(uri: Uri) -> ApiError {
    ApiError(ServiceError::NotFound(format!("no route for {}", uri.path())))
}

async fn health(State(st): State<AppState>) -> Json<Value> {
    let idx = st.index();
    Json(json!({ "status": "ok", "records": idx.len(), "days": idx.days().count() }))
}

async fn keywords() -> Json<Value> {
    Json(json!({ "keywords": list_keywords() }))
}

#[derive(Serialize)]
struct WithHistory<T: Serialize> {
    #[serde(flatten)]
    response: T,
    session: String,
}

async fn search(
    State(st): State<AppState>,
    headers: HeaderMap,
    params: Params,
) -> ApiResult<WithHistory<service::SearchResponse>> {
    let Query(p) = params?;
    let text = p.get("q").ok_or_else(|| bad("missing parameter q"))?;
    let q = service::parse_query(text, &options_from(&p)?.or(st.inner.defaults))?;
    let session = session(&headers, &p)?;
    let response = service::search(st.index(), &q);
    st.with_history(&session, |h| {
        h.record(&response.hash, HistoryQuery::Filter(response.query.clone()), Utc::now());
    });
    Ok(Json(WithHistory { response, session }))
}

async fn search_temporal(
    State(st): State<AppState>,
    headers: HeaderMap,
    params: Params,
    body: Result<Json<TemporalRequest>, JsonRejection>,
) -> ApiResult<WithHistory<service::TemporalResponse>> {
    let Query(p) = params?;
    let Json(mut req) = body?;
    req.options = req.options.or(st.inner.defaults);
    let tq = service::parse_temporal(&req)?;
    let session = session(&headers, &p)?;
    let response = service::search_temporal(st.index(), &tq)?;
    st.with_history(&session, |h| {
        h.record(&response.hash, HistoryQuery::Temporal(response.stages.clone()), Utc::now());
    });
    Ok(Json(WithHistory { response, session }))
}

async fn summaries(
    State(st): State<AppState>,
    params: Params,
) -> ApiResult<lifelog_core::explore::SummaryPage> {
    let Query(p) = params?;
    let weekdays = match p.get("weekday").map(|s| s.trim()).filter(|s| !s.is_empty()) {
        None => None,
        Some(list) => Some(
            list.split(',')
                .map(|w| {
                    Weekday::from_str(w.trim()).map_err(|_| bad(format!("invalid weekday '{}'", w.trim())))
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };
    let sort = match p.get("sort") {
        None => SummarySort::DateAsc,
        Some(s) => s.parse().map_err(bad)?,
    };
    let req = SummaryRequest {
        page: opt_param(&p, "page")?.unwrap_or(0),
        page_size: opt_param(&p, "page_size")?.unwrap_or(DEFAULT_PAGE_SIZE),
        weekdays,
        sort,
        images_per_day: opt_param(&p, "images_per_day")?.unwrap_or(DEFAULT_IMAGES_PER_DAY),
        top_k: opt_param(&p, "top_k")?.unwrap_or(DEFAULT_TOP_K),
    };
    let page = day_summaries(&req, st.index()).map_err(|e| bad(e.to_string()))?;
    Ok(Json(page))
}

#[derive(Serialize)]
struct CompletionResponse {
    fragment: String,
    #[serde(flatten)]
    completion: Completion,
}

async fn complete(State(st): State<AppState>, params: Params) -> ApiResult<CompletionResponse> {
    let Query(p) = params?;
    let fragment = p.get("fragment").cloned().unwrap_or_default();
    let kind = match p.get("kind").map(|s| s.trim()).filter(|s| !s.is_empty()) {
        None => None,
        Some(k) => Some(k.parse::<Facet>().map_err(bad)?),
    };
    let max = opt_param(&p, "max")?.unwrap_or(DEFAULT_SUGGESTIONS);
    let completion = autocomplete(&fragment, kind, max, st.index());
    Ok(Json(CompletionResponse {
        fragment,
        completion,
    }))
}

async fn image(
    State(st): State<AppState>,
    UrlPath(id): UrlPath<String>,
) -> ApiResult<service::ImageResponse> {
    let url = st
        .inner
        .asset_extension
        .as_ref()
        .map(|ext| format!("/images/{id}.{ext}"));
    Ok(Json(service::image(st.index(), &id, url)?))
}

async fn geo(State(st): State<AppState>, params: Params) -> ApiResult<service::GeoResponse> {
    let Query(p) = params?;
    Ok(Json(service::geo(
        st.index(),
        req_param(&p, "center_lat")?,
        req_param(&p, "center_lon")?,
        req_param(&p, "radius_km")?,
        opt_param(&p, "limit")?,
    )?))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SubmitBody {
    id: String,
}

async fn submit(
    State(st): State<AppState>,
    body: Result<Json<SubmitBody>, JsonRejection>,
) -> ApiResult<crate::submit::SubmissionReceipt> {
    let Json(b) = body?;
    Ok(Json(st.inner.submitter.submit(st.index(), &b.id).await?))
}

#[derive(Serialize)]
struct HistoryListing {
    session: String,
    capacity: usize,
    entries: Vec<HistoryEntry>,
}

async fn history_list(
    State(st): State<AppState>,
    headers: HeaderMap,
    params: Params,
) -> ApiResult<HistoryListing> {
    let Query(p) = params?;
    let session = session(&headers, &p)?;
    let (capacity, entries) =
        st.with_history(&session, |h| (h.capacity(), h.entries().cloned().collect()));
    Ok(Json(HistoryListing {
        session,
        capacity,
        entries,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HistoryRecordBody {
    query: HistoryQuery,
    #[serde(default)]
    options: OptionsInput,
    #[serde(default)]
    max_span_secs: Option<i64>,
    #[serde(default)]
    same_day: Option<bool>,
}

async fn history_record(
    State(st): State<AppState>,
    headers: HeaderMap,
    params: Params,
    body: Result<Json<HistoryRecordBody>, JsonRejection>,
) -> ApiResult<HistoryEntry> {
    let Query(p) = params?;
    let Json(b) = body?;
    let session = session(&headers, &p)?;
    let options = b.options.or(st.inner.defaults);
    let now = Utc::now();
    let entry = match b.query {
        HistoryQuery::Filter(text) => {
            let q = service::parse_query(&text, &options)?;
            st.with_history(&session, |h| h.record_filter(&q, now).clone())
        }
        HistoryQuery::Temporal(stages) => {
            let tq = service::parse_temporal(&TemporalRequest {
                stages,
                max_span_secs: b.max_span_secs,
                same_day: b.same_day,
                options,
            })?;
            st.with_history(&session, |h| h.record_temporal(&tq, now).clone())
        }
    };
    Ok(Json(entry))
}

async fn history_clear(
    State(st): State<AppState>,
    headers: HeaderMap,
    params: Params,
) -> ApiResult<Value> {
    let Query(p) = params?;
    let session = session(&headers, &p)?;
    let cleared = st.with_history(&session, |h| {
        let n = h.len();
        h.clear();
        n
    });
    Ok(Json(json!({ "session": session, "cleared": cleared })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ViewBody {
    image: String,
    #[serde(default)]
    view_ms: u64,
}

async fn history_view(
    State(st): State<AppState>,
    headers: HeaderMap,
    UrlPath(id): UrlPath<String>,
    params: Params,
    body: Result<Json<ViewBody>, JsonRejection>,
) -> ApiResult<HistoryEntry> {
    let Query(p) = params?;
    let Json(b) = body?;
    let session = session(&headers, &p)?;
    if st.index().record_by_id(&b.image).is_none() {
        return Err(ApiError(ServiceError::NotFound(format!(
            "unknown record id '{}'",
            b.image
        ))));
    }
    let entry = st.with_history(&session, |h| {
        h.view_event(&id, &b.image, b.view_ms).cloned()
    })?;
    Ok(Json(entry))
}

async fn history_import(
    State(st): State<AppState>,
    headers: HeaderMap,
    params: Params,
    body: Result<Json<Vec<HistoryEntry>>, JsonRejection>,
) -> ApiResult<Value> {
    let Query(p) = params?;
    let Json(entries) = body?;
    let session = session(&headers, &p)?;
    let imported = st.with_history(&session, |h| h.import(entries))?;
    Ok(Json(json!({ "session": session, "imported": imported })))
}
