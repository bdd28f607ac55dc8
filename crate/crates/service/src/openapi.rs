//! The OpenAPI description of the HTTP surface.

use serde_json::{json, Map, Value};

use crate::error::ERROR_KINDS;

fn param(name: &str, location: &str, description: &str) -> Value {
    json!({
        "name": name,
        "in": location,
        "required": location == "path",
        "description": description,
        "schema": { "type": "string" },
    })
}

fn filter_params() -> Vec<Value> {
    [
        ("rtype", "Resource type id"),
        ("group", "Target language group id"),
        ("macroarea", "Macroarea id, matched against any location"),
        ("license", "License property id"),
        ("media", "Media type id"),
        ("custodian_type", "Custodian type id, following organization links"),
        ("pii", "PII answer id (yes, unclear, answer_missing, no, yes_author_name_only)"),
        ("text", "Case-insensitive substring of name or description"),
    ]
    .iter()
    .map(|(n, d)| param(n, "query", d))
    .collect()
}

fn op(summary: &str, params: Vec<Value>, ok_status: &str, body: Option<&str>) -> Value {
    let mut o = json!({
        "summary": summary,
        "parameters": params,
        "responses": {
            ok_status: { "description": "Success" },
            "default": { "$ref": "#/components/responses/Error" },
        },
    });
    if let Some(media) = body {
        o["requestBody"] = json!({ "required": true, "content": { media: {} } });
    }
    o
}

fn uid() -> Value {
    param("uid", "path", "Entry identifier")
}

pub fn document() -> Value {
    let analytics_params = {
        let mut p = vec![
            param("table", "path", "types, languages, first-locations, language-regions, custodian-types, custodian-locations, licenses, pii or singletons"),
            param("group", "query", "Target group for language-regions (default english)"),
            param("top", "query", "Rows kept by custodian-locations (default 12)"),
            param("exclude_target_groups", "query", "Drop target-group tags from singletons"),
            param("format", "query", "json (default), csv or md"),
        ];
        p.extend(filter_params());
        p
    };
    let mut list_params = filter_params();
    list_params.push(param("offset", "query", "Items to skip"));
    list_params.push(param("limit", "query", "Page size (default 100)"));
    let review = || vec![uid(), param("id", "path", "Review id")];
    let mut section_params = review();
    section_params.push(param("section", "path", "Section id"));

    let paths = json!({
        "/health": { "get": op("Liveness probe", vec![], "200", None) },
        "/schema": { "get": op("Applicable sections, vocabularies and rule ids", vec![], "200", None) },
        "/gazetteer": { "get": op("Known place names with their resolution", vec![], "200", None) },
        "/openapi.json": { "get": op("This document", vec![], "200", None) },
        "/canonical": { "post": op("Echo an entry in canonical JSON", vec![], "200", Some("application/json")) },
        "/validate": { "post": op("Validate an entry without saving it", vec![], "200", Some("application/json")) },
        "/entries": {
            "get": op("Search entries", list_params, "200", None),
            "post": op("Save a new version of an entry", vec![], "201", Some("application/json")),
        },
        "/entries/{uid}": { "get": op("Latest version of an entry", vec![uid()], "200", None) },
        "/entries/{uid}/versions": { "get": op("Version history", vec![uid()], "200", None) },
        "/entries/{uid}/versions/{version}": {
            "get": op("One saved version", vec![uid(), param("version", "path", "Version number")], "200", None)
        },
        "/entries/{uid}/validations": {
            "get": op("Validation status and records", vec![uid()], "200", None),
            "post": op("Open a review of the latest version", vec![uid()], "201", Some("application/json")),
        },
        "/entries/{uid}/validations/{id}": { "get": op("An open review", review(), "200", None) },
        "/entries/{uid}/validations/{id}/sections/{section}": {
            "patch": op("Check a section, optionally replacing it", section_params, "200", Some("application/json"))
        },
        "/entries/{uid}/validations/{id}/finalize": {
            "post": op("Save the review as a validation record", review(), "200", None)
        },
        "/analytics/{table}": { "get": op("A report over the (filtered) catalogue", analytics_params, "200", None) },
        "/import/csv": { "post": op("Bulk import CSV rows", vec![], "200", Some("text/csv")) },
        "/import/json": { "post": op("Bulk import an export", vec![], "200", Some("application/json")) },
        "/export": { "get": op("Latest version of every entry", vec![], "200", None) },
        "/export/csv": { "get": op("Latest entries as CSV", vec![], "200", None) },
    });
    let kinds: Map<String, Value> = ERROR_KINDS
        .iter()
        .map(|(k, s)| ((*k).to_string(), json!(s)))
        .collect();
    json!({
        "openapi": "3.0.3",
        "info": { "title": "Language resource catalogue", "version": env!("CARGO_PKG_VERSION") },
        "paths": paths,
        "components": {
            "responses": {
                "Error": {
                    "description": "An error with a machine-readable kind",
                    "content": { "application/json": { "schema": { "$ref": "#/components/schemas/ApiError" } } },
                },
            },
            "schemas": {
                "ApiError": {
                    "type": "object",
                    "required": ["kind", "detail"],
                    "properties": {
                        "kind": { "type": "string", "enum": ERROR_KINDS.iter().map(|(k, _)| *k).collect::<Vec<_>>() },
                        "detail": { "type": "string" },
                        "field_path": { "type": "string" },
                        "violations": { "type": "array", "items": { "type": "object" } },
                    },
                },
            },
        },
        "x-error-status": kinds,
    })
}
