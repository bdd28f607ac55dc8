//! Query-string handling shared by the list and analytics endpoints.

use std::collections::BTreeMap;

use catalogue_core::store::SearchFilter;
use serde_json::{Map, Value};

use crate::error::ApiError;

/// Filter clauses plus the named extra parameters. Unknown keys and
/// repeated keys are rejected; empty values are ignored.
pub fn split(pairs: Vec<(String, String)>, extra: &[&str]) -> Result<(SearchFilter, BTreeMap<String, String>), ApiError> {
    let mut clauses = Map::new();
    let mut rest = BTreeMap::new();
    for (k, v) in pairs {
        if v.is_empty() {
            continue;
        }
        let dup = if extra.contains(&k.as_str()) {
            rest.insert(k.clone(), v).is_some()
        } else {
            clauses.insert(k.clone(), Value::String(v)).is_some()
        };
        if dup {
            return Err(ApiError::bad_query(format!("parameter {k} given twice")));
        }
    }
    let filter = serde_json::from_value(Value::Object(clauses)).map_err(|e| ApiError::bad_query(e.to_string()))?;
    Ok((filter, rest))
}

pub fn number(params: &BTreeMap<String, String>, key: &str, default: usize) -> Result<usize, ApiError> {
    params.get(key).map_or(Ok(default), |v| {
        v.parse().map_err(|_| ApiError::bad_query(format!("{key} must be a non-negative integer, got {v:?}")))
    })
}

pub fn flag(params: &BTreeMap<String, String>, key: &str) -> Result<bool, ApiError> {
    match params.get(key).map(String::as_str) {
        None | Some("false") => Ok(false),
        Some("true") => Ok(true),
        Some(v) => Err(ApiError::bad_query(format!("{key} must be true or false, got {v:?}"))),
    }
}
