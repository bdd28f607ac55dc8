//! Second-reviewer validation: a validator walks the sections of an
//! existing entry, optionally edits them, ticks each one, and saves a record.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::schema::{
    apply_section_edit, applicable_sections, validate_entry, CatalogueEntry, EditError, EntryLookup, Person,
    Rule, Section, ValidationReport,
};
use crate::store::{Store, StoreError};

/// One saved review of one entry version.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationRecord {
    pub uid: String,
    pub base_version: u32,
    pub validator: Person,
    pub section_checks: BTreeMap<Section, bool>,
    #[serde(default)]
    pub edited_sections: BTreeSet<Section>,
    pub saved_at: DateTime<Utc>,
    pub complete: bool,
    /// The version created from the validator's edits, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resulting_version: Option<u32>,
    /// The validator is the entry's submitter.
    #[serde(default)]
    pub self_validation: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ReviewError {
    #[error("no entry with uid {0:?}")]
    NotFound(String),
    #[error(transparent)]
    Edit(#[from] EditError),
    #[error("edited entry fails validation:\n{0}")]
    ValidationFailed(ValidationReport),
    #[error("{0} submitted this entry and may not validate it")]
    SelfValidation(String),
    #[error(transparent)]
    Store(StoreError),
}

impl ReviewError {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::NotFound(_) => "not-found",
            Self::Edit(e) => e.kind(),
            Self::ValidationFailed(_) => "validation-failed",
            Self::SelfValidation(_) => "self-validation",
            Self::Store(e) => e.kind(),
        }
    }
}

impl From<StoreError> for ReviewError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::NotFound(uid) => Self::NotFound(uid),
            StoreError::ValidationFailed(r) => Self::ValidationFailed(r),
            other => Self::Store(other),
        }
    }
}

/// Deployment policy for reviews.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReviewPolicy {
    /// Refuse sessions whose validator email equals the submitter's.
    pub forbid_self_validation: bool,
}

/// An in-progress review over one version of an entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationSession {
    pub uid: String,
    pub base_version: u32,
    pub validator: Person,
    /// The working copy, including any edits made so far.
    pub entry: CatalogueEntry,
    pub section_checks: BTreeMap<Section, bool>,
    pub edited_sections: BTreeSet<Section>,
}

fn same_person(a: &Person, b: &Person) -> bool {
    a.email.trim().eq_ignore_ascii_case(b.email.trim())
}

/// Start reviewing the latest version of `uid`.
pub fn begin_validation(
    store: &Store,
    uid: &str,
    validator: &Person,
    policy: ReviewPolicy,
) -> Result<ValidationSession, ReviewError> {
    let (version, entry) = store.latest(uid)?;
    if policy.forbid_self_validation && same_person(validator, &entry.provenance.submitter) {
        return Err(ReviewError::SelfValidation(validator.email.clone()));
    }
    Ok(ValidationSession {
        uid: uid.to_string(),
        base_version: version.version_no,
        validator: validator.clone(),
        section_checks: applicable_sections(entry.rtype).into_iter().map(|s| (s, false)).collect(),
        edited_sections: BTreeSet::new(),
        entry: (*entry).clone(),
    })
}

impl ValidationSession {
    /// Mark `section` as checked, first replacing it with `edit` if given.
    /// On error the session is left as it was.
    pub fn check_section(
        &mut self,
        section: Section,
        edit: Option<&Value>,
        catalogue: &dyn EntryLookup,
    ) -> Result<(), ReviewError> {
        if !self.section_checks.contains_key(&section) {
            return Err(EditError::NotApplicable { section, rtype: self.entry.rtype }.into());
        }
        if let Some(payload) = edit {
            let edited = apply_section_edit(&self.entry, section, payload)?;
            let mut report = validate_entry(&edited, catalogue);
            if edited.uid() != self.uid {
                report.push(
                    Rule::UidImmutable,
                    "general.uid",
                    format!("uid cannot change from {:?} during review", self.uid),
                );
            }
            if !report.is_accepted() {
                return Err(ReviewError::ValidationFailed(report));
            }
            if edited != self.entry {
                self.entry = edited;
                self.edited_sections.insert(section);
            }
        }
        self.section_checks.insert(section, true);
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        self.section_checks.values().all(|&c| c)
    }
}

/// The outcome of a finalized review.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinalizeOutcome {
    pub record: Arc<ValidationRecord>,
    pub new_version: Option<u32>,
}

/// Persist the session as a record, saving the edited entry as a new
/// version (attributed to the validator) when any section changed.
pub fn finalize_validation(store: &Store, session: &ValidationSession) -> Result<FinalizeOutcome, ReviewError> {
    let self_validation = store
        .get_version(&session.uid, session.base_version)
        .ok()
        .and_then(|v| crate::schema::entry_from_json(&v.payload).ok())
        .is_some_and(|e| same_person(&session.validator, &e.provenance.submitter));
    let outcome = store.with_writer(&session.uid, |w| {
        let new_version = if session.edited_sections.is_empty() {
            None
        } else {
            Some(w.save(&session.entry, &session.validator)?.version_no)
        };
        let now = Utc::now();
        let saved_at = w.last_validation_time().map_or(now, |t| t.max(now));
        let record = w.append_validation(ValidationRecord {
            uid: session.uid.clone(),
            base_version: session.base_version,
            validator: session.validator.clone(),
            section_checks: session.section_checks.clone(),
            edited_sections: session.edited_sections.clone(),
            saved_at,
            complete: session.is_complete(),
            resulting_version: new_version,
            self_validation,
        })?;
        Ok(FinalizeOutcome { record, new_version })
    })?;
    Ok(outcome)
}

/// Review status of an entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationStatus {
    pub uid: String,
    pub latest_version: u32,
    /// Some complete record exists, for any version.
    pub validated: bool,
    /// Some complete record covers the latest version, either by reviewing
    /// it or by producing it.
    pub latest_validated: bool,
    pub records: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub last_validated_at: Option<DateTime<Utc>>,
}

pub fn validation_status(uid: &str, latest_version: u32, records: &[Arc<ValidationRecord>]) -> ValidationStatus {
    let complete: Vec<_> = records.iter().filter(|r| r.complete).collect();
    ValidationStatus {
        uid: uid.to_string(),
        latest_version,
        validated: !complete.is_empty(),
        latest_validated: complete
            .iter()
            .any(|r| r.resulting_version.unwrap_or(r.base_version) == latest_version),
        records: records.len(),
        last_validated_at: complete.iter().map(|r| r.saved_at).max(),
    }
}
