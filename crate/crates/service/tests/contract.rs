//! Every endpoint's body against the direct library call on the same state.

use std::sync::Arc;

use axum::body::{to_bytes, Body};
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use catalogue_core::analytics::{report, ReportParams, Table};
use catalogue_core::langtag::TargetGroup;
use catalogue_core::review::ReviewPolicy;
use catalogue_core::schema::{
    entry_to_canonical_json, schema_document, to_canonical_bytes, validate_entry, ResourceType, Section,
};
use catalogue_core::store::{PiiAnswer, SearchFilter, Store};
use catalogue_core::testing::{org_entry, primary_entry, processed_entry, submitter};
use catalogue_service::{app, AppState, ERROR_KINDS};
use serde_json::{json, Value};
use tower::ServiceExt;

struct Harness {
    state: Arc<AppState>,
    router: Router,
}

struct Reply {
    status: StatusCode,
    content_type: String,
    body: Vec<u8>,
}

impl Reply {
    fn json(&self) -> Value {
        serde_json::from_slice(&self.body).expect("JSON body")
    }

    fn kind(&self) -> String {
        self.json()["kind"].as_str().unwrap_or_default().to_string()
    }
}

fn harness(policy: ReviewPolicy) -> Harness {
    let store = Store::in_memory();
    for e in [org_entry("group-le-monde"), primary_entry("le-monde"), processed_entry("fr-news")] {
        store.save_entry(&e, &submitter()).unwrap();
    }
    let state = Arc::new(AppState::new(Arc::new(store), policy));
    let router = app(state.clone(), Some("http://localhost:5173")).unwrap();
    Harness { state, router }
}

fn empty() -> Harness {
    let state = Arc::new(AppState::new(Arc::new(Store::in_memory()), ReviewPolicy::default()));
    let router = app(state.clone(), None).unwrap();
    Harness { state, router }
}

impl Harness {
    async fn call(&self, method: Method, uri: &str, body: impl Into<Body>) -> Reply {
        let req = Request::builder().method(method).uri(uri).body(body.into()).unwrap();
        let resp = self.router.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        let content_type = resp
            .headers()
            .get(header::CONTENT_TYPE)
            .map(|v| v.to_str().unwrap().to_string())
            .unwrap_or_default();
        let body = to_bytes(resp.into_body(), usize::MAX).await.unwrap().to_vec();
        Reply { status, content_type, body }
    }

    async fn get(&self, uri: &str) -> Reply {
        self.call(Method::GET, uri, Body::empty()).await
    }

    async fn post(&self, uri: &str, body: impl Into<Body>) -> Reply {
        self.call(Method::POST, uri, body).await
    }
}

fn text(bytes: &[u8]) -> &str {
    std::str::from_utf8(bytes).unwrap()
}

fn status_of(kind: &str) -> StatusCode {
    let code = ERROR_KINDS.iter().find(|(k, _)| *k == kind).unwrap().1;
    StatusCode::from_u16(code).unwrap()
}

fn assert_error(reply: &Reply, kind: &str) {
    assert_eq!(reply.kind(), kind, "{}", String::from_utf8_lossy(&reply.body));
    assert_eq!(reply.status, status_of(kind));
}

#[tokio::test]
async fn schema_and_canonical_echo() {
    let h = harness(ReviewPolicy::default());
    let r = h.get("/schema").await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.content_type, "application/json");
    assert_eq!(text(&r.body), text(&to_canonical_bytes(&schema_document())));

    let entry = primary_entry("le-monde");
    let pretty = serde_json::to_vec_pretty(&entry).unwrap();
    let r = h.post("/canonical", pretty).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(text(&r.body), text(&entry_to_canonical_json(&entry)));
    let again = h.post("/canonical", r.body.clone()).await;
    assert_eq!(again.body, r.body);

    assert_error(&h.post("/canonical", "{\"rtype\": 3}").await, "parse-error");
    assert_eq!(h.get("/health").await.json(), json!({"status": "ok"}));
}

#[tokio::test]
async fn validate_does_not_save() {
    let h = harness(ReviewPolicy::default());
    let mut bad = org_entry("fresh-org");
    bad.media = primary_entry("x").media;
    let r = h.post("/validate", serde_json::to_vec(&bad).unwrap()).await;
    assert_eq!(r.status, StatusCode::OK);
    let report = validate_entry(&bad, &h.state.store.snapshot());
    assert_eq!(r.json(), json!({"accepted": false, "violations": report.violations}));
    assert_eq!(r.json()["violations"][0]["rule"], "section-applicability");
    assert_error(&h.get("/entries/fresh-org").await, "not-found");
}

#[tokio::test]
async fn entries_crud() {
    let h = harness(ReviewPolicy::default());
    let mut e = primary_entry("le-monde");
    e.general.description = "Second revision.".into();
    let r = h.post("/entries", serde_json::to_vec(&e).unwrap()).await;
    assert_eq!(r.status, StatusCode::CREATED);
    assert_eq!(text(&r.body), r#"{"uid":"le-monde","version":2}"#);

    let r = h.post("/entries", serde_json::to_vec(&org_entry("new-org")).unwrap()).await;
    assert_eq!(text(&r.body), r#"{"uid":"new-org","version":1}"#);

    let r = h.get("/entries/le-monde").await;
    assert_eq!(text(&r.body), text(&h.state.store.latest("le-monde").unwrap().0.payload));
    assert_eq!(text(&r.body), text(&entry_to_canonical_json(&e)));
    let v1 = h.get("/entries/le-monde/versions/1").await;
    assert_eq!(v1.body, entry_to_canonical_json(&primary_entry("le-monde")));
    assert_error(&h.get("/entries/le-monde/versions/9").await, "not-found");
    let versions = h.get("/entries/le-monde/versions").await;
    assert_eq!(versions.body, to_canonical_bytes(&h.state.store.list_versions("le-monde").unwrap()));

    let mut broken = processed_entry("orphan");
    broken.dataset_sources.as_mut().unwrap().linked_primary_uids = vec!["nowhere".into()];
    let r = h.post("/entries", serde_json::to_vec(&broken).unwrap()).await;
    assert_error(&r, "validation-failed");
    assert!(r.json()["field_path"].as_str().unwrap().starts_with("dataset_sources"));
    assert_error(&h.post("/entries", "not json").await, "parse-error");
}

#[tokio::test]
async fn listing_and_paging() {
    let h = harness(ReviewPolicy::default());
    let all = h.get("/entries").await.json();
    assert_eq!(all["total"], 3);
    assert_eq!(all["limit"], 100);
    let uids: Vec<_> = all["items"].as_array().unwrap().iter().map(|e| e["general"]["uid"].clone()).collect();
    assert_eq!(uids, [json!("fr-news"), json!("group-le-monde"), json!("le-monde")]);

    let page = h.get("/entries?offset=1&limit=1").await.json();
    assert_eq!(page["items"].as_array().unwrap().len(), 1);
    assert_eq!(page["items"][0]["general"]["uid"], "group-le-monde");

    let r = h.get("/entries?rtype=organization&pii=").await.json();
    assert_eq!(r["total"], 1);
    let r = h.get("/entries?custodian_type=commercial&text=NEWS").await.json();
    assert_eq!(r["items"][0]["general"]["uid"], "fr-news");

    assert_error(&h.get("/entries?colour=red").await, "bad-query");
    assert_error(&h.get("/entries?rtype=book").await, "bad-query");
    assert_error(&h.get("/entries?limit=ten").await, "bad-query");
    assert_error(&h.get("/entries?rtype=organization&rtype=primary_source").await, "bad-query");
}

#[tokio::test]
async fn review_flow() {
    let h = harness(ReviewPolicy::default());
    let validator = json!({"validator": {"name": "Val", "email": "val@example.org"}}).to_string();
    let r = h.post("/entries/le-monde/validations", validator.clone()).await;
    assert_eq!(r.status, StatusCode::CREATED);
    let id = r.json()["id"].as_u64().unwrap();
    assert_eq!(r.json()["complete"], false);
    let base = format!("/entries/le-monde/validations/{id}");

    let r = h.call(Method::PATCH, &format!("{base}/sections/dataset_sources"), Body::empty()).await;
    assert_error(&r, "section-not-applicable");
    assert_error(&h.call(Method::PATCH, &format!("{base}/sections/appendix"), Body::empty()).await, "not-found");
    assert_error(&h.get("/entries/fr-news/validations/1").await, "not-found");

    let bad_edit = json!({"edit": {"uid": "renamed", "name": "x", "description": "y"}}).to_string();
    let r = h.call(Method::PATCH, &format!("{base}/sections/general"), bad_edit).await;
    assert_error(&r, "validation-failed");
    assert_eq!(h.get(&base).await.json()["session"]["section_checks"]["general"], false);

    let mut general = serde_json::to_value(&primary_entry("le-monde").general).unwrap();
    general["description"] = "Reviewed description.".into();
    let edit = json!({ "edit": general }).to_string();
    let r = h.call(Method::PATCH, &format!("{base}/sections/general"), edit).await;
    assert_eq!(r.status, StatusCode::OK, "{}", String::from_utf8_lossy(&r.body));
    for s in ["languages", "locations", "custodian", "availability", "source_type", "media"] {
        let r = h.call(Method::PATCH, &format!("{base}/sections/{s}"), Body::empty()).await;
        assert_eq!(r.status, StatusCode::OK);
    }
    assert_eq!(h.get(&base).await.json()["complete"], true);

    let r = h.post(&format!("{base}/finalize"), Body::empty()).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json()["new_version"], 2);
    assert_eq!(r.json()["record"]["complete"], true);
    assert_error(&h.post(&format!("{base}/finalize"), Body::empty()).await, "conflicting-finalize");
    let r = h.call(Method::PATCH, &format!("{base}/sections/general"), Body::empty()).await;
    assert_error(&r, "conflicting-finalize");

    let list = h.get("/entries/le-monde/validations").await.json();
    assert_eq!(list["status"]["validated"], true);
    assert_eq!(list["status"]["latest_validated"], true);
    assert_eq!(list["status"]["latest_version"], 2);
    assert_eq!(list["records"].as_array().unwrap().len(), 1);
    let latest = h.get("/entries/le-monde").await.json();
    assert_eq!(latest["general"]["description"], "Reviewed description.");
    assert_eq!(latest["provenance"]["submitter"], json!(submitter()));
    let versions = h.get("/entries/le-monde/versions").await.json();
    assert_eq!(versions[1]["author"], json!({"name": "Val", "email": "val@example.org"}));
}

#[tokio::test]
async fn self_validation_follows_policy() {
    let me = json!({"validator": submitter()}).to_string();
    let strict = harness(ReviewPolicy { forbid_self_validation: true });
    assert_error(&strict.post("/entries/le-monde/validations", me.clone()).await, "self-validation");
    let lax = harness(ReviewPolicy::default());
    assert_eq!(lax.post("/entries/le-monde/validations", me).await.status, StatusCode::CREATED);
    assert_error(&lax.post("/entries/nope/validations", json!({"validator": submitter()}).to_string()).await, "not-found");
    assert_error(&lax.post("/entries/le-monde/validations", "{}").await, "parse-error");
}

#[tokio::test]
async fn analytics_match_library_reports() {
    let h = harness(ReviewPolicy::default());
    let snap = h.state.store.snapshot();
    let filters = [
        ("", SearchFilter::default()),
        ("rtype=processed_dataset", SearchFilter { rtype: Some(ResourceType::ProcessedDataset), ..Default::default() }),
        ("pii=yes", SearchFilter { pii: Some(PiiAnswer::Yes), ..Default::default() }),
        ("text=monde", SearchFilter { text: Some("monde".into()), ..Default::default() }),
    ];
    for table in Table::ALL {
        for (query, filter) in &filters {
            let view = snap.filtered(filter);
            let want = report(&view, table, &ReportParams::default());
            let r = h.get(&format!("/analytics/{}?{query}", table.id())).await;
            assert_eq!(r.status, StatusCode::OK);
            assert_eq!(text(&r.body), text(&want.to_json()), "{} {query}", table.id());
            let r = h.get(&format!("/analytics/{}?format=csv&{query}", table.id())).await;
            assert_eq!(text(&r.body), &want.to_csv());
            assert!(r.content_type.starts_with("text/csv"));
            let r = h.get(&format!("/analytics/{}?format=md&{query}", table.id())).await;
            assert_eq!(text(&r.body), &want.to_markdown());
        }
    }
    let p = ReportParams { group: TargetGroup::Programming, top: 1, exclude_target_groups: true };
    for table in [Table::LanguageRegions, Table::CustodianLocations, Table::Singletons] {
        let uri = format!("/analytics/{}?group=programming&top=1&exclude_target_groups=true", table.id());
        assert_eq!(h.get(&uri).await.body, report(&snap, table, &p).to_json());
    }
    assert_error(&h.get("/analytics/colours").await, "not-found");
    assert_error(&h.get("/analytics/types?format=xml").await, "bad-query");
    assert_error(&h.get("/analytics/types?group=klingon").await, "bad-query");
    assert_error(&h.get("/analytics/types?top=-1").await, "bad-query");
}

#[tokio::test]
async fn import_and_export() {
    let h = harness(ReviewPolicy::default());
    let export = h.get("/export").await;
    assert_eq!(export.body, h.state.store.export_catalogue());

    let target = empty();
    let r = target.post("/import/json", export.body.clone()).await;
    assert_eq!(r.status, StatusCode::OK, "{}", String::from_utf8_lossy(&r.body));
    assert_eq!(r.json()["saved"].as_array().unwrap().len(), 3);
    assert_eq!(text(&target.get("/export").await.body), text(&export.body));

    let csv = h.get("/export/csv").await;
    assert!(csv.content_type.starts_with("text/csv"));
    let target = empty();
    let r = target.post("/import/csv", csv.body.clone()).await;
    assert_eq!(r.status, StatusCode::OK, "{}", String::from_utf8_lossy(&r.body));
    assert_eq!(text(&target.get("/export/csv").await.body), text(&csv.body));

    assert_error(&target.post("/import/csv", "\"unterminated").await, "malformed-csv");
    assert_error(&target.post("/import/json", "{").await, "parse-error");
}

#[tokio::test]
async fn cors_allows_the_configured_origin_only() {
    let h = harness(ReviewPolicy::default());
    let req = |origin: &str| {
        Request::builder()
            .method(Method::OPTIONS)
            .uri("/schema")
            .header(header::ORIGIN, origin)
            .header(header::ACCESS_CONTROL_REQUEST_METHOD, "GET")
            .body(Body::empty())
            .unwrap()
    };
    let ok = h.router.clone().oneshot(req("http://localhost:5173")).await.unwrap();
    assert_eq!(ok.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN], "http://localhost:5173");
    let other = h.router.clone().oneshot(req("http://evil.example")).await.unwrap();
    let echoed = other.headers().get(header::ACCESS_CONTROL_ALLOW_ORIGIN);
    assert!(echoed.is_none_or(|v| v == "http://localhost:5173"));
    assert!(app(h.state.clone(), Some("bad\norigin")).is_err());
}

#[tokio::test]
async fn openapi_document_is_pinned() {
    let h = harness(ReviewPolicy::default());
    let r = h.get("/openapi.json").await;
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/openapi.json");
    let golden: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(r.json(), golden, "regenerate docs/openapi.json from GET /openapi.json");
    let paths = golden["paths"].as_object().unwrap();
    for p in ["/schema", "/canonical", "/entries/{uid}/validations/{id}/finalize", "/analytics/{table}"] {
        assert!(paths.contains_key(p), "{p}");
    }
}

#[test]
fn every_section_is_addressable() {
    for s in [Section::General, Section::DatasetSources, Section::SourceType] {
        assert_eq!(s.id().parse::<Section>().unwrap(), s);
    }
}
