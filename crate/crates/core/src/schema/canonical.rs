//! Canonical JSON: object keys sorted, no insignificant whitespace, UTF-8.

use std::io::{self, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use super::{applicable_sections, CatalogueEntry, ResourceType, Section};

/// A JSON decoding failure with the path of the offending field.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct JsonError {
    pub path: String,
    pub message: String,
}

/// Decode any JSON document, reporting the path of the first bad field.
pub fn decode_json<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, JsonError> {
    decode(bytes)
}

fn decode<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, JsonError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    let value = serde_path_to_error::deserialize(&mut *de).map_err(|e| JsonError {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| JsonError { path: ".".into(), message: e.to_string() })?;
    Ok(value)
}

fn decode_value<T: DeserializeOwned>(value: &Value) -> Result<T, JsonError> {
    serde_path_to_error::deserialize(value).map_err(|e| JsonError {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

fn write_canonical<W: Write>(w: &mut W, value: &Value) -> io::Result<()> {
    match value {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            w.write_all(b"{")?;
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    w.write_all(b",")?;
                }
                serde_json::to_writer(&mut *w, k)?;
                w.write_all(b":")?;
                write_canonical(w, &map[k])?;
            }
            w.write_all(b"}")
        }
        Value::Array(items) => {
            w.write_all(b"[")?;
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    w.write_all(b",")?;
                }
                write_canonical(w, item)?;
            }
            w.write_all(b"]")
        }
        scalar => serde_json::to_writer(w, scalar).map_err(io::Error::from),
    }
}

/// Canonical bytes of any serializable value.
pub fn to_canonical_bytes<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let value = serde_json::to_value(value).expect("model types always serialize");
    canonical_json_value(&value)
}

pub fn canonical_json_value(value: &Value) -> Vec<u8> {
    let mut out = Vec::new();
    write_canonical(&mut out, value).expect("writing to a Vec cannot fail");
    out
}

pub fn entry_to_canonical_json(entry: &CatalogueEntry) -> Vec<u8> {
    to_canonical_bytes(entry)
}

pub fn entry_from_json(bytes: &[u8]) -> Result<CatalogueEntry, JsonError> {
    decode(bytes)
}

/// JSON value of one section of an entry (`null` for an absent section).
pub fn section_to_json(entry: &CatalogueEntry, section: Section) -> Value {
    let v = match section {
        Section::General => serde_json::to_value(&entry.general),
        Section::Languages => serde_json::to_value(&entry.languages),
        Section::Locations => serde_json::to_value(&entry.locations),
        Section::Custodian => serde_json::to_value(&entry.custodian),
        Section::Availability => serde_json::to_value(&entry.availability),
        Section::SourceType => serde_json::to_value(&entry.source_type),
        Section::DatasetSources => serde_json::to_value(&entry.dataset_sources),
        Section::Media => serde_json::to_value(&entry.media),
    };
    v.expect("model types always serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EditError {
    #[error("section {section} is not applicable to {rtype}")]
    NotApplicable { section: Section, rtype: ResourceType },
    #[error("invalid {section} payload at {}", .source)]
    Payload { section: Section, source: JsonError },
}

impl EditError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::NotApplicable { .. } => "section-not-applicable",
            Self::Payload { .. } => "parse-error",
        }
    }
}

/// Return a copy of `entry` with one section replaced by `payload`.
///
/// The custodian section accepts `null` to clear it; every other section
/// needs a value of its own type.
pub fn apply_section_edit(
    entry: &CatalogueEntry,
    section: Section,
    payload: &Value,
) -> Result<CatalogueEntry, EditError> {
    if !applicable_sections(entry.rtype).contains(&section) {
        return Err(EditError::NotApplicable { section, rtype: entry.rtype });
    }
    let wrap = |source| EditError::Payload { section, source };
    let mut out = entry.clone();
    match section {
        Section::General => out.general = decode_value(payload).map_err(wrap)?,
        Section::Languages => out.languages = decode_value(payload).map_err(wrap)?,
        Section::Locations => out.locations = decode_value(payload).map_err(wrap)?,
        Section::Custodian => out.custodian = decode_value(payload).map_err(wrap)?,
        Section::Availability => out.availability = Some(decode_value(payload).map_err(wrap)?),
        Section::SourceType => out.source_type = Some(decode_value(payload).map_err(wrap)?),
        Section::DatasetSources => out.dataset_sources = Some(decode_value(payload).map_err(wrap)?),
        Section::Media => out.media = Some(decode_value(payload).map_err(wrap)?),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{org_entry, primary_entry};
    use serde_json::json;

    #[test]
    fn minimal_org_round_trip() {
        let e = org_entry("group-le-monde");
        let bytes = entry_to_canonical_json(&e);
        assert_eq!(entry_from_json(&bytes).unwrap(), e);
    }

    #[test]
    fn canonical_form_is_compact_and_sorted() {
        let bytes = canonical_json_value(&json!({"b": [1, {"z": 1, "a": null}], "a": "é"}));
        assert_eq!(String::from_utf8(bytes).unwrap(), r#"{"a":"é","b":[1,{"a":null,"z":1}]}"#);
        let bytes = entry_to_canonical_json(&primary_entry("le-monde"));
        let reparsed: Value = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(canonical_json_value(&reparsed), bytes);
        assert_eq!(serde_json::to_vec(&reparsed).unwrap(), bytes);
        assert!(bytes.starts_with(br#"{"availability":"#));
    }

    #[test]
    fn unknown_resource_type_names_the_field() {
        let mut v = serde_json::to_value(org_entry("group-le-monde")).unwrap();
        v["rtype"] = json!("primary sorce");
        let err = entry_from_json(&serde_json::to_vec(&v).unwrap()).unwrap_err();
        assert_eq!(err.path, "rtype");
    }

    #[test]
    fn nested_errors_carry_paths() {
        let mut v = serde_json::to_value(primary_entry("le-monde")).unwrap();
        v["availability"]["license"]["properties"] = json!(["open_license", "free_beer"]);
        let err = entry_from_json(&serde_json::to_vec(&v).unwrap()).unwrap_err();
        assert!(err.path.starts_with("availability.license.properties"), "{}", err.path);
        let mut v = serde_json::to_value(org_entry("abc")).unwrap();
        v["custodian"]["type"] = json!("university");
        let err = entry_from_json(&serde_json::to_vec(&v).unwrap()).unwrap_err();
        assert_eq!(err.path, "custodian.type");
        let mut v = serde_json::to_value(org_entry("abc")).unwrap();
        v["colour"] = json!("red");
        assert!(entry_from_json(&serde_json::to_vec(&v).unwrap()).is_err());
        assert!(entry_from_json(b"{} trailing").is_err());
    }

    #[test]
    fn edit_description_only() {
        let e = org_entry("group-le-monde");
        let mut general = section_to_json(&e, Section::General);
        general["description"] = json!("Publisher of Le Monde.");
        let edited = apply_section_edit(&e, Section::General, &general).unwrap();
        assert_eq!(edited.general.description, "Publisher of Le Monde.");
        let mut expected = e.clone();
        expected.general.description = "Publisher of Le Monde.".into();
        assert_eq!(edited, expected);
        assert_ne!(e, edited);
    }

    #[test]
    fn edit_inapplicable_section() {
        let e = org_entry("group-le-monde");
        let payload = section_to_json(&primary_entry("x"), Section::Availability);
        let err = apply_section_edit(&e, Section::Availability, &payload).unwrap_err();
        assert_eq!(err.kind(), "section-not-applicable");
    }

    #[test]
    fn edit_payload_error() {
        let e = primary_entry("le-monde");
        let err = apply_section_edit(&e, Section::Media, &json!({"media": ["smell"]})).unwrap_err();
        assert_eq!(err.kind(), "parse-error");
        let cleared = apply_section_edit(&e, Section::Custodian, &Value::Null).unwrap();
        assert!(cleared.custodian.is_none());
    }
}
