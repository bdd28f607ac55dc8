use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use catalogue_core::review::ReviewError;
use catalogue_core::schema::{to_canonical_bytes, EditError, JsonError, ValidationReport, Violation};
use catalogue_core::store::StoreError;
use serde::Serialize;

use crate::json_response;

/// Every error kind the API returns, with its status code.
pub const ERROR_KINDS: &[(&str, u16)] = &[
    ("validation-failed", 400),
    ("parse-error", 400),
    ("malformed-csv", 400),
    ("bad-query", 400),
    ("section-not-applicable", 400),
    ("self-validation", 403),
    ("not-found", 404),
    ("conflicting-finalize", 409),
    ("storage-io", 500),
];

/// An error response body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub kind: &'static str,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_path: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
}

impl ApiError {
    pub fn new(kind: &'static str, detail: impl Into<String>) -> Self {
        let code = ERROR_KINDS
            .iter()
            .find(|(k, _)| *k == kind)
            .map_or(500, |(_, c)| *c);
        Self {
            status: StatusCode::from_u16(code).expect("listed codes are valid"),
            kind,
            detail: detail.into(),
            field_path: None,
            violations: Vec::new(),
        }
    }

    pub fn not_found(what: impl std::fmt::Display) -> Self {
        Self::new("not-found", format!("no {what}"))
    }

    pub fn bad_query(detail: impl Into<String>) -> Self {
        Self::new("bad-query", detail)
    }

    fn validation(report: ValidationReport) -> Self {
        let first = report.errors().next().map(|v| v.path.clone());
        Self {
            field_path: first,
            violations: report.violations.clone(),
            ..Self::new("validation-failed", report.to_string().trim_end().to_string())
        }
    }
}

impl From<JsonError> for ApiError {
    fn from(e: JsonError) -> Self {
        Self { field_path: Some(e.path.clone()), ..Self::new("parse-error", e.to_string()) }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::ValidationFailed(report) => Self::validation(report),
            StoreError::MalformedJson(j) => j.into(),
            StoreError::NotFound(uid) => Self::not_found(format_args!("entry {uid}")),
            other => Self::new(other.kind(), other.to_string()),
        }
    }
}

impl From<EditError> for ApiError {
    fn from(e: EditError) -> Self {
        match e {
            EditError::Payload { source, .. } => source.into(),
            other => Self::new("section-not-applicable", other.to_string()),
        }
    }
}

impl From<ReviewError> for ApiError {
    fn from(e: ReviewError) -> Self {
        match e {
            ReviewError::NotFound(uid) => Self::not_found(format_args!("entry {uid}")),
            ReviewError::Edit(e) => e.into(),
            ReviewError::ValidationFailed(report) => Self::validation(report),
            ReviewError::SelfValidation(_) => Self::new("self-validation", e.to_string()),
            ReviewError::Store(s) => s.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        json_response(self.status, to_canonical_bytes(&self))
    }
}
