//! Flat CSV rendering of entries for bulk import.
//!
//! The header must equal [`CSV_COLUMNS`] exactly. Multi-valued cells are
//! `|`-separated. Open vocabularies take `other:<text>` for a free answer.
//! A section is built when any of its columns is non-empty. Fields outside
//! these columns (variety comments, license texts, dataset source types and
//! source licenses) need JSON import.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use super::{CatalogueSnapshot, RowError, StoreError};
use crate::geo::resolve_location;
use crate::langtag::{parse_tag, TargetGroup};
use crate::schema::*;

pub const CSV_COLUMNS: &[&str] = &[
    "rtype",
    "general.uid",
    "general.name",
    "general.homepage",
    "general.description",
    "languages",
    "locations",
    "custodian.link_uid",
    "custodian.name",
    "custodian.type",
    "custodian.location",
    "custodian.contact",
    "availability.procurement",
    "availability.download_url",
    "availability.contact",
    "license.has_explicit_terms",
    "license.properties",
    "license.named_licenses",
    "license.usability_assessment",
    "pii.contains",
    "pii.general",
    "pii.numeric",
    "pii.sensitive",
    "pii.general_kinds",
    "pii.numeric_kinds",
    "pii.sensitive_kinds",
    "pii.no_pii_justification",
    "source.kind",
    "source.collection_type",
    "source.website_type",
    "dataset.originality",
    "dataset.sources_investigable",
    "dataset.linked_primary_uids",
    "media.types",
    "media.format_note",
    "media.transcribed_from",
    "media.size_unit",
    "media.instance_count_bucket",
    "media.words_per_instance_bucket",
    "submitter.name",
    "submitter.email",
    "saved_at",
];

fn col(name: &str) -> usize {
    CSV_COLUMNS.iter().position(|c| *c == name).expect("known column")
}

/// Read a vocabulary value: its snake_case id, or `other:<text>`.
fn parse_word<T: DeserializeOwned>(s: &str) -> Option<T> {
    let v = match s.strip_prefix("other:") {
        Some(rest) => serde_json::json!({ "other": rest }),
        None => Value::String(s.to_string()),
    };
    serde_json::from_value(v).ok()
}

fn word<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v).expect("vocabulary serializes") {
        Value::String(s) => s,
        Value::Object(m) => match m.get("other") {
            Some(Value::String(s)) => format!("other:{s}"),
            _ => unreachable!("open vocabularies carry a string"),
        },
        other => other.to_string(),
    }
}

struct Row<'a> {
    cells: &'a csv::StringRecord,
    line: usize,
    errors: Vec<RowError>,
}

impl<'a> Row<'a> {
    fn get(&self, name: &str) -> Option<&'a str> {
        self.cells.get(col(name)).filter(|s| !s.is_empty())
    }

    fn any(&self, prefix: &str) -> bool {
        CSV_COLUMNS
            .iter()
            .any(|c| c.starts_with(prefix) && self.get(c).is_some())
    }

    fn error(&mut self, rule: &str, field: &str, message: String) {
        self.errors.push(RowError {
            row: self.line,
            rule: rule.to_string(),
            field: Some(field.to_string()),
            message,
        });
    }

    fn text(&self, name: &str) -> Option<String> {
        self.get(name).map(str::to_string)
    }

    fn required_text(&mut self, name: &str) -> String {
        match self.get(name) {
            Some(s) => s.to_string(),
            None => {
                self.error("required-field", name, format!("{name} is required"));
                String::new()
            }
        }
    }

    fn word<T: DeserializeOwned>(&mut self, name: &str) -> Option<T> {
        let s = self.get(name)?;
        let v = parse_word(s);
        if v.is_none() {
            self.error("unknown-variant", name, format!("{s:?} is not a valid {name} value"));
        }
        v
    }

    fn required_word<T: DeserializeOwned>(&mut self, name: &str) -> Option<T> {
        if self.get(name).is_none() {
            self.error("required-field", name, format!("{name} is required"));
            return None;
        }
        self.word(name)
    }

    fn items(&self, name: &str) -> Vec<&'a str> {
        self.get(name)
            .map(|s| s.split('|').filter(|i| !i.is_empty()).collect())
            .unwrap_or_default()
    }

    fn words<T: DeserializeOwned>(&mut self, name: &str) -> Vec<T> {
        let mut out = Vec::new();
        for item in self.items(name) {
            match parse_word(item) {
                Some(v) => out.push(v),
                None => self.error("unknown-variant", name, format!("{item:?} is not a valid {name} value")),
            }
        }
        out
    }

    fn bucket(&mut self, name: &str) -> Option<MagnitudeBucket> {
        let Some(s) = self.get(name) else {
            self.error("required-field", name, format!("{name} is required"));
            return None;
        };
        let b = s.parse::<u8>().ok().and_then(MagnitudeBucket::new);
        if b.is_none() {
            self.error(
                "parse-error",
                name,
                format!("{s:?} is not a decade exponent in 0..={}", MagnitudeBucket::MAX_EXPONENT),
            );
        }
        b
    }
}

fn languages(row: &mut Row<'_>) -> Vec<LanguageSelection> {
    let mut out = Vec::new();
    for item in row.items("languages") {
        let (group, tag) = match item.split_once(':') {
            Some((g, t)) => (Some(g), t),
            None => (None, item),
        };
        let mut sel = LanguageSelection::default();
        if let Some(g) = group {
            match g.parse::<TargetGroup>() {
                Ok(g) => sel.group = Some(g),
                Err(e) => {
                    row.error("unknown-variant", "languages", e.to_string());
                    continue;
                }
            }
        }
        if !tag.is_empty() {
            match parse_tag(tag) {
                Ok(t) => sel.tag = Some(t),
                Err(e) => {
                    row.error("parse-error", "languages", format!("{tag:?}: {e}"));
                    continue;
                }
            }
        }
        out.push(sel);
    }
    out
}

fn license(row: &mut Row<'_>) -> Option<LicenseInfo> {
    let terms = row.required_word("license.has_explicit_terms");
    let mut l = LicenseInfo::new(terms.unwrap_or(ExplicitTerms::Unclear));
    l.properties = row.words("license.properties").into_iter().collect();
    l.named_licenses = row.items("license.named_licenses").into_iter().map(str::to_string).collect();
    l.usability_assessment = row.text("license.usability_assessment");
    terms.map(|_| l)
}

fn pii(row: &mut Row<'_>) -> PiiAssessment {
    let mut p = PiiAssessment {
        contains: row.word("pii.contains"),
        ..PiiAssessment::default()
    };
    for (cat, column) in [
        (PiiCategory::General, "pii.general"),
        (PiiCategory::Numeric, "pii.numeric"),
        (PiiCategory::Sensitive, "pii.sensitive"),
    ] {
        if let Some(l) = row.word(column) {
            p.category_likelihoods.insert(cat, l);
        }
    }
    p.kinds.general = row.words("pii.general_kinds").into_iter().collect();
    p.kinds.numeric = row.words("pii.numeric_kinds").into_iter().collect();
    p.kinds.sensitive = row.words("pii.sensitive_kinds").into_iter().collect();
    p.no_pii_justification = row.word("pii.no_pii_justification");
    p
}

fn entry_from_row(row: &mut Row<'_>) -> Option<CatalogueEntry> {
    let rtype: Option<ResourceType> = row.required_word("rtype");
    let general = GeneralInfo {
        uid: row.required_text("general.uid"),
        name: row.required_text("general.name"),
        homepage: row.text("general.homepage"),
        description: row.required_text("general.description"),
    };
    let languages = languages(row);
    let locations = row.items("locations").into_iter().map(resolve_location).collect();
    let custodian = row.any("custodian.").then(|| Custodian {
        link_uid: row.text("custodian.link_uid"),
        name: row.text("custodian.name"),
        ctype: row.word("custodian.type"),
        location: row.get("custodian.location").map(resolve_location),
        contact: row.text("custodian.contact"),
    });
    let availability = if row.any("availability.") || row.any("license.") || row.any("pii.") {
        let procurement = row.required_word("availability.procurement");
        let license = license(row);
        let pii = pii(row);
        procurement.zip(license).map(|(procurement, license)| Availability {
            procurement,
            download_url: row.text("availability.download_url"),
            contact: row.text("availability.contact"),
            license,
            pii,
        })
    } else {
        None
    };
    let source_type = if row.any("source.") {
        row.required_word("source.kind").map(|kind| PrimarySourceType {
            kind,
            collection_type: row.word("source.collection_type"),
            website_type: row.word("source.website_type"),
        })
    } else {
        None
    };
    let dataset_sources = if row.any("dataset.") {
        row.required_word("dataset.originality").map(|originality| DatasetSources {
            originality,
            sources_investigable: row.word("dataset.sources_investigable"),
            linked_primary_uids: row
                .items("dataset.linked_primary_uids")
                .into_iter()
                .map(str::to_string)
                .collect(),
            source_types: Vec::new(),
            source_license: None,
        })
    } else {
        None
    };
    let media = if row.any("media.") {
        let media: BTreeSet<MediaType> = row.words("media.types").into_iter().collect();
        let size_unit = row.required_word("media.size_unit");
        let instances = row.bucket("media.instance_count_bucket");
        let words = row.bucket("media.words_per_instance_bucket");
        match (size_unit, instances, words) {
            (Some(size_unit), Some(i), Some(w)) => Some(MediaSpec {
                media,
                format_note: row.text("media.format_note"),
                transcribed_from: row.word("media.transcribed_from"),
                size_unit,
                instance_count_bucket: i,
                words_per_instance_bucket: w,
            }),
            _ => None,
        }
    } else {
        None
    };
    let submitter = Person::new(row.required_text("submitter.name"), row.required_text("submitter.email"));
    let saved_at = match row.get("saved_at") {
        Some(s) => match DateTime::parse_from_rfc3339(s) {
            Ok(t) => Some(t.with_timezone(&Utc)),
            Err(e) => {
                row.error("parse-error", "saved_at", format!("{s:?}: {e}"));
                None
            }
        },
        None => {
            row.error("required-field", "saved_at", "saved_at is required".into());
            None
        }
    };
    if !row.errors.is_empty() {
        return None;
    }
    Some(CatalogueEntry {
        rtype: rtype?,
        general,
        languages,
        locations,
        custodian,
        availability,
        source_type,
        dataset_sources,
        media,
        provenance: Provenance { submitter, saved_at: saved_at? },
    })
}

pub(super) type ParsedRow = (usize, Result<CatalogueEntry, Vec<RowError>>);

pub(super) fn parse_rows<R: Read>(reader: R) -> Result<Vec<ParsedRow>, StoreError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| StoreError::MalformedCsv(e.to_string()))?
        .clone();
    if header.iter().ne(CSV_COLUMNS.iter().copied()) {
        let missing: Vec<_> = CSV_COLUMNS.iter().filter(|c| !header.iter().any(|h| h == **c)).collect();
        let unknown: Vec<_> = header.iter().filter(|h| !CSV_COLUMNS.contains(h)).collect();
        return Err(StoreError::MalformedCsv(format!(
            "header does not match the column layout (missing {missing:?}, unknown {unknown:?}, or out of order)"
        )));
    }
    let mut out = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        let line = rdr.position().line() as usize;
        match rdr.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                let line = record.position().map_or(line, |p| p.line() as usize);
                let mut row = Row { cells: &record, line, errors: Vec::new() };
                let parsed = entry_from_row(&mut row);
                out.push((line, parsed.ok_or(row.errors)));
            }
            Err(e) => match e.kind() {
                csv::ErrorKind::UnequalLengths { pos, .. } => {
                    let line = pos.as_ref().map_or(line, |p| p.line() as usize);
                    out.push((
                        line,
                        Err(vec![RowError {
                            row: line,
                            rule: "parse-error".into(),
                            field: None,
                            message: e.to_string(),
                        }]),
                    ));
                }
                _ => return Err(StoreError::MalformedCsv(e.to_string())),
            },
        }
    }
    Ok(out)
}

fn join<T, F: Fn(&T) -> String>(items: impl IntoIterator<Item = T>, f: F) -> String {
    items.into_iter().map(|i| f(&i)).collect::<Vec<_>>().join("|")
}

fn opt<T, F: Fn(&T) -> String>(v: Option<T>, f: F) -> String {
    v.map(|v| f(&v)).unwrap_or_default()
}

fn entry_to_row(e: &CatalogueEntry) -> Vec<String> {
    let mut cells: BTreeMap<&str, String> = BTreeMap::new();
    let mut set = |k: &'static str, v: String| {
        cells.insert(k, v);
    };
    set("rtype", e.rtype.id().to_string());
    set("general.uid", e.general.uid.clone());
    set("general.name", e.general.name.clone());
    set("general.homepage", e.general.homepage.clone().unwrap_or_default());
    set("general.description", e.general.description.clone());
    set(
        "languages",
        join(&e.languages, |l| match (&l.group, &l.tag) {
            (Some(g), Some(t)) => format!("{}:{t}", g.id()),
            (Some(g), None) => format!("{}:", g.id()),
            (None, Some(t)) => t.to_string(),
            (None, None) => String::new(),
        }),
    );
    set("locations", join(&e.locations, |l| l.raw.clone()));
    if let Some(c) = &e.custodian {
        set("custodian.link_uid", c.link_uid.clone().unwrap_or_default());
        set("custodian.name", c.name.clone().unwrap_or_default());
        set("custodian.type", opt(c.ctype, word));
        set("custodian.location", opt(c.location.as_ref(), |l| l.raw.clone()));
        set("custodian.contact", c.contact.clone().unwrap_or_default());
    }
    if let Some(a) = &e.availability {
        set("availability.procurement", word(&a.procurement));
        set("availability.download_url", a.download_url.clone().unwrap_or_default());
        set("availability.contact", a.contact.clone().unwrap_or_default());
        set("license.has_explicit_terms", word(&a.license.has_explicit_terms));
        set("license.properties", join(&a.license.properties, word));
        set("license.named_licenses", a.license.named_licenses.join("|"));
        set(
            "license.usability_assessment",
            a.license.usability_assessment.clone().unwrap_or_default(),
        );
        set("pii.contains", opt(a.pii.contains, word));
        for (cat, column) in [
            (PiiCategory::General, "pii.general"),
            (PiiCategory::Numeric, "pii.numeric"),
            (PiiCategory::Sensitive, "pii.sensitive"),
        ] {
            set(column, opt(a.pii.category_likelihoods.get(&cat), word));
        }
        set("pii.general_kinds", join(&a.pii.kinds.general, word));
        set("pii.numeric_kinds", join(&a.pii.kinds.numeric, word));
        set("pii.sensitive_kinds", join(&a.pii.kinds.sensitive, word));
        set("pii.no_pii_justification", opt(a.pii.no_pii_justification.as_ref(), word));
    }
    if let Some(s) = &e.source_type {
        set("source.kind", word(&s.kind));
        set("source.collection_type", opt(s.collection_type.as_ref(), word));
        set("source.website_type", opt(s.website_type.as_ref(), word));
    }
    if let Some(d) = &e.dataset_sources {
        set("dataset.originality", word(&d.originality));
        set("dataset.sources_investigable", opt(d.sources_investigable, word));
        set("dataset.linked_primary_uids", d.linked_primary_uids.join("|"));
    }
    if let Some(m) = &e.media {
        set("media.types", join(&m.media, word));
        set("media.format_note", m.format_note.clone().unwrap_or_default());
        set("media.transcribed_from", opt(m.transcribed_from, word));
        set("media.size_unit", word(&m.size_unit));
        set("media.instance_count_bucket", m.instance_count_bucket.exponent().to_string());
        set(
            "media.words_per_instance_bucket",
            m.words_per_instance_bucket.exponent().to_string(),
        );
    }
    set("submitter.name", e.provenance.submitter.name.clone());
    set("submitter.email", e.provenance.submitter.email.clone());
    set(
        "saved_at",
        e.provenance.saved_at.to_rfc3339_opts(SecondsFormat::AutoSi, true),
    );
    CSV_COLUMNS
        .iter()
        .map(|c| cells.remove(c).unwrap_or_default())
        .collect()
}

/// Write the latest entries as CSV in uid order. Fields outside the
/// column layout are dropped.
pub fn export_csv<W: Write>(snapshot: &CatalogueSnapshot, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for e in snapshot.entries() {
        w.write_record(entry_to_row(e))?;
    }
    w.flush()
}
