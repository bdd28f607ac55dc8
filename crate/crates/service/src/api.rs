use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, patch, post};
use axum::Router;
use catalogue_core::analytics::{report, ReportParams, Table};
use catalogue_core::geo::Gazetteer;
use catalogue_core::langtag::TargetGroup;
use catalogue_core::review::{begin_validation, finalize_validation, validation_status};
use catalogue_core::schema::{
    entry_from_json, entry_to_canonical_json, schema_document, to_canonical_bytes, validate_entry, CatalogueEntry,
    JsonError, Person, Section,
};
use catalogue_core::store::{export_csv, StoreError};
use serde::Serialize;
use serde_json::Value;

use crate::error::ApiError;
use crate::state::{AppState, Review};
use crate::{json_response, query};

type Shared = State<Arc<AppState>>;
type ApiResult = Result<Response, ApiError>;
type Pairs = Query<Vec<(String, String)>>;

/// Default page size of list endpoints.
pub const DEFAULT_LIMIT: usize = 100;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/schema", get(schema))
        .route("/gazetteer", get(gazetteer))
        .route("/openapi.json", get(openapi))
        .route("/canonical", post(canonical))
        .route("/validate", post(validate))
        .route("/entries", get(list_entries).post(create_entry))
        .route("/entries/{uid}", get(get_entry))
        .route("/entries/{uid}/versions", get(list_versions))
        .route("/entries/{uid}/versions/{version}", get(get_version))
        .route("/entries/{uid}/validations", get(list_validations).post(start_review))
        .route("/entries/{uid}/validations/{id}", get(get_review))
        .route("/entries/{uid}/validations/{id}/sections/{section}", patch(check_section))
        .route("/entries/{uid}/validations/{id}/finalize", post(finalize))
        .route("/analytics/{table}", get(analytics))
        .route("/import/csv", post(import_csv))
        .route("/import/json", post(import_json))
        .route("/export", get(export))
        .route("/export/csv", get(export_as_csv))
        .with_state(state)
}

fn ok<T: Serialize + ?Sized>(value: &T) -> Response {
    json_response(StatusCode::OK, to_canonical_bytes(value))
}

fn text(content_type: &'static str, body: String) -> Response {
    ([(header::CONTENT_TYPE, content_type)], body).into_response()
}

fn parse_json(body: &[u8]) -> Result<Value, ApiError> {
    serde_json::from_slice(body).map_err(|e| JsonError { path: ".".into(), message: e.to_string() }.into())
}

/// Run blocking store work off the async workers.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .unwrap_or_else(|e| Err(ApiError::new("storage-io", format!("worker failed: {e}"))))
}

async fn health() -> Response {
    ok(&serde_json::json!({ "status": "ok" }))
}

async fn schema() -> Response {
    ok(&schema_document())
}

async fn gazetteer() -> Response {
    ok(&Gazetteer::bundled().entries().collect::<Vec<_>>())
}

async fn openapi() -> Response {
    ok(&crate::openapi::document())
}

/// Echo an entry in canonical form.
async fn canonical(body: Bytes) -> ApiResult {
    let entry = entry_from_json(&body)?;
    Ok(json_response(StatusCode::OK, entry_to_canonical_json(&entry)))
}

#[derive(Serialize)]
struct ValidateResponse<'a> {
    accepted: bool,
    violations: &'a [catalogue_core::schema::Violation],
}

/// Check an entry against the current catalogue without saving it.
async fn validate(State(state): Shared, body: Bytes) -> ApiResult {
    let entry = entry_from_json(&body)?;
    let report = validate_entry(&entry, &state.store.snapshot());
    Ok(ok(&ValidateResponse { accepted: report.is_accepted(), violations: &report.violations }))
}

#[derive(Serialize)]
struct Page<'a> {
    total: usize,
    offset: usize,
    limit: usize,
    items: Vec<&'a CatalogueEntry>,
}

async fn list_entries(State(state): Shared, Query(pairs): Pairs) -> ApiResult {
    let (filter, params) = query::split(pairs, &["offset", "limit"])?;
    let offset = query::number(&params, "offset", 0)?;
    let limit = query::number(&params, "limit", DEFAULT_LIMIT)?;
    let snap = state.store.snapshot().filtered(&filter);
    let items = snap.entries().skip(offset).take(limit).collect();
    Ok(ok(&Page { total: snap.len(), offset, limit, items }))
}

#[derive(Serialize)]
struct Created<'a> {
    uid: &'a str,
    version: u32,
}

/// Save a new version; the submitter named in the entry is its author.
async fn create_entry(State(state): Shared, body: Bytes) -> ApiResult {
    let entry = entry_from_json(&body)?;
    let store = state.store.clone();
    blocking(move || {
        let out = store.save_entry(&entry, &entry.provenance.submitter)?;
        let body = to_canonical_bytes(&Created { uid: entry.uid(), version: out.version_no });
        Ok(json_response(StatusCode::CREATED, body))
    })
    .await
}

async fn get_entry(State(state): Shared, Path(uid): Path<String>) -> ApiResult {
    let (version, _) = state.store.latest(&uid)?;
    Ok(json_response(StatusCode::OK, version.payload.to_vec()))
}

async fn list_versions(State(state): Shared, Path(uid): Path<String>) -> ApiResult {
    Ok(ok(&state.store.list_versions(&uid)?))
}

async fn get_version(State(state): Shared, Path((uid, version)): Path<(String, u32)>) -> ApiResult {
    let v = state.store.get_version(&uid, version)?;
    Ok(json_response(StatusCode::OK, v.payload.to_vec()))
}

#[derive(Serialize)]
struct ValidationList<'a> {
    status: catalogue_core::review::ValidationStatus,
    records: &'a [Arc<catalogue_core::review::ValidationRecord>],
}

async fn list_validations(State(state): Shared, Path(uid): Path<String>) -> ApiResult {
    let (latest, _) = state.store.latest(&uid)?;
    let records = state.store.list_validations(&uid)?;
    let status = validation_status(&uid, latest.version_no, &records);
    Ok(ok(&ValidationList { status, records: &records }))
}

#[derive(Serialize)]
struct ReviewView<'a> {
    id: u64,
    complete: bool,
    finalized: bool,
    session: &'a catalogue_core::review::ValidationSession,
}

fn review_view(id: u64, review: &Review) -> Response {
    ok(&ReviewView {
        id,
        complete: review.session.is_complete(),
        finalized: review.outcome.is_some(),
        session: &review.session,
    })
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct StartReview {
    validator: Person,
}

async fn start_review(State(state): Shared, Path(uid): Path<String>, body: Bytes) -> ApiResult {
    let req: StartReview = catalogue_core::schema::decode_json(&body)?;
    let session = begin_validation(&state.store, &uid, &req.validator, state.policy)?;
    let id = state.open_review(session);
    let review = state.review(&uid, id).expect("just opened");
    let mut resp = review_view(id, &review.lock());
    *resp.status_mut() = StatusCode::CREATED;
    Ok(resp)
}

fn find_review(state: &AppState, uid: &str, id: u64) -> Result<Arc<parking_lot::Mutex<Review>>, ApiError> {
    state.review(uid, id).ok_or_else(|| ApiError::not_found(format_args!("review {id} of {uid}")))
}

async fn get_review(State(state): Shared, Path((uid, id)): Path<(String, u64)>) -> ApiResult {
    let review = find_review(&state, &uid, id)?;
    let guard = review.lock();
    Ok(review_view(id, &guard))
}

/// Mark a section checked. A body of `{"edit": <section>}` replaces the
/// section first; an empty body only checks it.
async fn check_section(
    State(state): Shared,
    Path((uid, id, section)): Path<(String, u64, String)>,
    body: Bytes,
) -> ApiResult {
    let section: Section = section
        .parse()
        .map_err(|_| ApiError::not_found(format_args!("section {section}")))?;
    let edit = if body.iter().all(u8::is_ascii_whitespace) {
        None
    } else {
        let mut v = parse_json(&body)?;
        let obj = v
            .as_object_mut()
            .filter(|o| o.keys().all(|k| k == "edit"))
            .ok_or_else(|| ApiError::from(JsonError { path: ".".into(), message: "expected {\"edit\": ...}".into() }))?;
        obj.remove("edit")
    };
    let review = find_review(&state, &uid, id)?;
    let mut guard = review.lock();
    if guard.outcome.is_some() {
        return Err(ApiError::new("conflicting-finalize", format!("review {id} is already finalized")));
    }
    let snap = state.store.snapshot();
    guard.session.check_section(section, edit.as_ref(), &snap)?;
    Ok(review_view(id, &guard))
}

async fn finalize(State(state): Shared, Path((uid, id)): Path<(String, u64)>) -> ApiResult {
    let review = find_review(&state, &uid, id)?;
    let store = state.store.clone();
    blocking(move || {
        let mut guard = review.lock();
        if guard.outcome.is_some() {
            return Err(ApiError::new("conflicting-finalize", format!("review {id} is already finalized")));
        }
        let outcome = finalize_validation(&store, &guard.session)?;
        let resp = ok(&outcome);
        guard.outcome = Some(outcome);
        Ok(resp)
    })
    .await
}

async fn analytics(State(state): Shared, Path(table): Path<String>, Query(pairs): Pairs) -> ApiResult {
    let table: Table = table
        .parse()
        .map_err(|_| ApiError::not_found(format_args!("report {table}")))?;
    let (filter, params) = query::split(pairs, &["group", "top", "exclude_target_groups", "format"])?;
    let mut p = ReportParams::default();
    if let Some(g) = params.get("group") {
        p.group = g
            .parse::<TargetGroup>()
            .map_err(|_| ApiError::bad_query(format!("unknown group {g:?}")))?;
    }
    p.top = query::number(&params, "top", p.top)?;
    p.exclude_target_groups = query::flag(&params, "exclude_target_groups")?;
    let snap = state.store.snapshot();
    let view = if filter.is_empty() { snap } else { snap.filtered(&filter) };
    let d = report(&view, table, &p);
    match params.get("format").map_or("json", String::as_str) {
        "json" => Ok(json_response(StatusCode::OK, d.to_json())),
        "csv" => Ok(text("text/csv; charset=utf-8", d.to_csv())),
        "md" => Ok(text("text/markdown; charset=utf-8", d.to_markdown())),
        other => Err(ApiError::bad_query(format!("unknown format {other:?}"))),
    }
}

async fn import_csv(State(state): Shared, body: Bytes) -> ApiResult {
    let store = state.store.clone();
    blocking(move || Ok(ok(&store.import_csv(&body[..])?))).await
}

async fn import_json(State(state): Shared, body: Bytes) -> ApiResult {
    let store = state.store.clone();
    blocking(move || Ok(ok(&store.import_json(&body)?))).await
}

async fn export(State(state): Shared) -> Response {
    json_response(StatusCode::OK, state.store.export_catalogue())
}

async fn export_as_csv(State(state): Shared) -> ApiResult {
    let mut out = Vec::new();
    export_csv(&state.store.snapshot(), &mut out).map_err(|e| ApiError::from(StoreError::from(e)))?;
    Ok(text("text/csv; charset=utf-8", String::from_utf8(out).expect("csv output is UTF-8")))
}
