use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::*;

/// Stable identifiers for every entry rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    SectionApplicability,
    UidFormat,
    RequiredField,
    LanguagesRequired,
    LanguageSelectionEmpty,
    LanguageGroupMismatch,
    LocationConsistency,
    CustodianIdentity,
    CustodianMissing,
    LinkUnresolved,
    LinkTargetType,
    DownloadUrlRequired,
    ContactRequired,
    LicenseAssessmentRequired,
    PiiJustificationRequired,
    PiiKindLikelihood,
    SourceTypeDetail,
    OriginalDatasetSources,
    MediaRequired,
    TranscriptionRequiresText,
    EmailFormat,
    UrlFormat,
    UidImmutable,
}

impl Rule {
    pub const ALL: [Rule; 23] = [
        Self::SectionApplicability,
        Self::UidFormat,
        Self::RequiredField,
        Self::LanguagesRequired,
        Self::LanguageSelectionEmpty,
        Self::LanguageGroupMismatch,
        Self::LocationConsistency,
        Self::CustodianIdentity,
        Self::CustodianMissing,
        Self::LinkUnresolved,
        Self::LinkTargetType,
        Self::DownloadUrlRequired,
        Self::ContactRequired,
        Self::LicenseAssessmentRequired,
        Self::PiiJustificationRequired,
        Self::PiiKindLikelihood,
        Self::SourceTypeDetail,
        Self::OriginalDatasetSources,
        Self::MediaRequired,
        Self::TranscriptionRequiresText,
        Self::EmailFormat,
        Self::UrlFormat,
        Self::UidImmutable,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::SectionApplicability => "section-applicability",
            Self::UidFormat => "uid-format",
            Self::RequiredField => "required-field",
            Self::LanguagesRequired => "languages-required",
            Self::LanguageSelectionEmpty => "language-selection-empty",
            Self::LanguageGroupMismatch => "language-group-mismatch",
            Self::LocationConsistency => "location-consistency",
            Self::CustodianIdentity => "custodian-identity",
            Self::CustodianMissing => "custodian-missing",
            Self::LinkUnresolved => "link-unresolved",
            Self::LinkTargetType => "link-target-type",
            Self::DownloadUrlRequired => "download-url-required",
            Self::ContactRequired => "contact-required",
            Self::LicenseAssessmentRequired => "license-assessment-required",
            Self::PiiJustificationRequired => "pii-justification-required",
            Self::PiiKindLikelihood => "pii-kind-likelihood",
            Self::SourceTypeDetail => "source-type-detail",
            Self::OriginalDatasetSources => "original-dataset-sources",
            Self::MediaRequired => "media-required",
            Self::TranscriptionRequiresText => "transcription-requires-text",
            Self::EmailFormat => "email-format",
            Self::UrlFormat => "url-format",
            Self::UidImmutable => "uid-immutable",
        }
    }

    pub fn severity(self) -> Severity {
        match self {
            Self::CustodianMissing => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub severity: Severity,
    /// Dotted field path, e.g. `availability.pii.no_pii_justification`.
    pub path: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// No error-severity violations; warnings are allowed.
    pub fn is_accepted(&self) -> bool {
        self.violations.iter().all(|v| v.severity != Severity::Error)
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.severity == Severity::Error)
    }

    pub fn rules(&self) -> BTreeSet<Rule> {
        self.violations.iter().map(|v| v.rule).collect()
    }

    pub fn push(&mut self, rule: Rule, path: impl Into<String>, message: impl Into<String>) {
        let path = path.into();
        if self.violations.iter().any(|v| v.rule == rule && v.path == path) {
            return;
        }
        self.violations.push(Violation {
            rule,
            severity: rule.severity(),
            path,
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            let level = match v.severity {
                Severity::Warning => "warning",
                Severity::Error => "error",
            };
            writeln!(f, "{level}[{}] {}: {}", v.rule, v.path, v.message)?;
        }
        Ok(())
    }
}

/// Resolves entry identifiers for cross-reference checks.
pub trait EntryLookup {
    fn resource_type(&self, uid: &str) -> Option<ResourceType>;
}

/// A catalogue with nothing in it.
pub struct NoCatalogue;

impl EntryLookup for NoCatalogue {
    fn resource_type(&self, _uid: &str) -> Option<ResourceType> {
        None
    }
}

impl EntryLookup for HashMap<String, ResourceType> {
    fn resource_type(&self, uid: &str) -> Option<ResourceType> {
        self.get(uid).copied()
    }
}

impl EntryLookup for BTreeMap<String, ResourceType> {
    fn resource_type(&self, uid: &str) -> Option<ResourceType> {
        self.get(uid).copied()
    }
}

impl EntryLookup for [CatalogueEntry] {
    fn resource_type(&self, uid: &str) -> Option<ResourceType> {
        self.iter().find(|e| e.uid() == uid).map(|e| e.rtype)
    }
}

impl<T: EntryLookup + ?Sized> EntryLookup for &T {
    fn resource_type(&self, uid: &str) -> Option<ResourceType> {
        (**self).resource_type(uid)
    }
}

pub(crate) fn is_valid_uid(uid: &str) -> bool {
    (3..=64).contains(&uid.len())
        && uid
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-')
}

fn is_email(s: &str) -> bool {
    match s.split_once('@') {
        Some((local, domain)) => {
            !local.is_empty()
                && !domain.is_empty()
                && !domain.contains('@')
                && !s.chars().any(char::is_whitespace)
        }
        None => false,
    }
}

fn is_url(s: &str) -> bool {
    let rest = s
        .strip_prefix("https://")
        .or_else(|| s.strip_prefix("http://"));
    matches!(rest, Some(r) if !r.is_empty() && !r.chars().any(char::is_whitespace))
}

/// Check an entry against every rule, resolving links through `catalogue`.
pub fn validate_entry(entry: &CatalogueEntry, catalogue: &dyn EntryLookup) -> ValidationReport {
    let mut report = ValidationReport::default();
    let r = &mut report;

    let applicable = applicable_sections(entry.rtype);
    let present = entry.present_sections();
    for &section in Section::ALL {
        let optional = section == Section::Custodian;
        if present.contains(&section) && !applicable.contains(&section) {
            r.push(
                Rule::SectionApplicability,
                section.id(),
                format!("section not applicable to {}", entry.rtype),
            );
        } else if !optional && applicable.contains(&section) && !present.contains(&section) {
            r.push(
                Rule::SectionApplicability,
                section.id(),
                format!("section required for {}", entry.rtype),
            );
        }
    }

    check_general(&entry.general, r);
    check_languages(&entry.languages, r);
    for (i, loc) in entry.locations.iter().enumerate() {
        if !loc.is_consistent() {
            r.push(
                Rule::LocationConsistency,
                format!("locations[{i}]"),
                "location level does not match its country code or macroarea",
            );
        }
    }

    match &entry.custodian {
        Some(c) => check_custodian(c, catalogue, r),
        None => r.push(Rule::CustodianMissing, "custodian", "no custodian recorded"),
    }

    if let Some(av) = &entry.availability {
        check_availability(av, entry.custodian.as_ref(), r);
    }
    if let Some(st) = &entry.source_type {
        check_source_type(st, "source_type", r);
    }
    if let Some(ds) = &entry.dataset_sources {
        check_dataset_sources(ds, catalogue, r);
    }
    if let Some(m) = &entry.media {
        check_media(m, r);
    }

    let p = &entry.provenance.submitter;
    if p.name.trim().is_empty() {
        r.push(Rule::RequiredField, "provenance.submitter.name", "submitter name is required");
    }
    if !is_email(&p.email) {
        r.push(Rule::EmailFormat, "provenance.submitter.email", "not an email address");
    }

    report
}

fn check_general(g: &GeneralInfo, r: &mut ValidationReport) {
    if !is_valid_uid(&g.uid) {
        r.push(
            Rule::UidFormat,
            "general.uid",
            "uid must be 3-64 characters of lowercase ASCII letters, digits and hyphens",
        );
    }
    if g.name.trim().is_empty() {
        r.push(Rule::RequiredField, "general.name", "name is required");
    }
    if g.description.trim().is_empty() {
        r.push(Rule::RequiredField, "general.description", "description is required");
    }
    if let Some(url) = &g.homepage {
        if !is_url(url) {
            r.push(Rule::UrlFormat, "general.homepage", "not an http(s) URL");
        }
    }
}

fn check_languages(langs: &[LanguageSelection], r: &mut ValidationReport) {
    if langs.is_empty() {
        r.push(Rule::LanguagesRequired, "languages", "at least one language is required");
    }
    for (i, sel) in langs.iter().enumerate() {
        match (&sel.group, &sel.tag) {
            (None, None) => r.push(
                Rule::LanguageSelectionEmpty,
                format!("languages[{i}]"),
                "a language selection needs a group or a tag",
            ),
            (Some(group), Some(tag)) => {
                if let Some(mapped) = crate::langtag::group_of(tag) {
                    if mapped != *group {
                        r.push(
                            Rule::LanguageGroupMismatch,
                            format!("languages[{i}].group"),
                            format!("tag {tag} belongs to {mapped}, not {group}"),
                        );
                    }
                }
            }
            _ => {}
        }
    }
}

fn check_link(
    uid: &str,
    expected: ResourceType,
    path: String,
    catalogue: &dyn EntryLookup,
    r: &mut ValidationReport,
) {
    match catalogue.resource_type(uid) {
        None => r.push(Rule::LinkUnresolved, path, format!("no entry with uid {uid:?}")),
        Some(t) if t != expected => r.push(
            Rule::LinkTargetType,
            path,
            format!("{uid:?} is a {t}, expected a {expected}"),
        ),
        Some(_) => {}
    }
}

fn check_custodian(c: &Custodian, catalogue: &dyn EntryLookup, r: &mut ValidationReport) {
    match &c.link_uid {
        Some(uid) => check_link(
            uid,
            ResourceType::Organization,
            "custodian.link_uid".into(),
            catalogue,
            r,
        ),
        None => {
            let named = c.name.as_deref().is_some_and(|n| !n.trim().is_empty());
            if !named || c.ctype.is_none() {
                r.push(
                    Rule::CustodianIdentity,
                    "custodian",
                    "an unlinked custodian needs a name and a type",
                );
            }
        }
    }
    if let Some(contact) = &c.contact {
        if !is_email(contact) {
            r.push(Rule::EmailFormat, "custodian.contact", "not an email address");
        }
    }
    if let Some(loc) = &c.location {
        if !loc.is_consistent() {
            r.push(
                Rule::LocationConsistency,
                "custodian.location",
                "location level does not match its country code or macroarea",
            );
        }
    }
}

fn check_license(l: &LicenseInfo, path: &str, r: &mut ValidationReport) {
    let assessed = l
        .usability_assessment
        .as_deref()
        .is_some_and(|s| !s.trim().is_empty());
    if l.has_explicit_terms == ExplicitTerms::Unclear && !assessed {
        r.push(
            Rule::LicenseAssessmentRequired,
            format!("{path}.usability_assessment"),
            "unclear licensing terms need a usability assessment",
        );
    }
}

fn check_availability(av: &Availability, custodian: Option<&Custodian>, r: &mut ValidationReport) {
    if av.procurement == Procurement::OnlineDirectDownload {
        match &av.download_url {
            None => r.push(
                Rule::DownloadUrlRequired,
                "availability.download_url",
                "direct downloads need a download URL",
            ),
            Some(url) if !is_url(url) => {
                r.push(Rule::UrlFormat, "availability.download_url", "not an http(s) URL")
            }
            Some(_) => {}
        }
    } else {
        let custodian_contact = custodian.and_then(|c| c.contact.as_ref()).is_some();
        if av.contact.is_none() && !custodian_contact {
            r.push(
                Rule::ContactRequired,
                "availability.contact",
                "data obtained through the custodian needs a contact",
            );
        }
        if let Some(url) = &av.download_url {
            if !is_url(url) {
                r.push(Rule::UrlFormat, "availability.download_url", "not an http(s) URL");
            }
        }
    }
    if let Some(contact) = &av.contact {
        if !is_email(contact) {
            r.push(Rule::EmailFormat, "availability.contact", "not an email address");
        }
    }

    check_license(&av.license, "availability.license", r);

    let pii = &av.pii;
    if pii.contains == Some(PiiContains::No) && pii.no_pii_justification.is_none() {
        r.push(
            Rule::PiiJustificationRequired,
            "availability.pii.no_pii_justification",
            "answering that the data has no PII needs a justification",
        );
    }
    for &category in PiiCategory::ALL {
        if !pii.kinds.is_empty_for(category) && pii.likelihood(category) == Likelihood::None {
            r.push(
                Rule::PiiKindLikelihood,
                format!("availability.pii.kinds.{category}"),
                "PII kinds listed for a category whose likelihood is none",
            );
        }
    }
}

fn check_source_type(st: &PrimarySourceType, path: &str, r: &mut ValidationReport) {
    let is_collection = st.kind == SourceKind::Collection;
    let is_website = st.kind == SourceKind::Website;
    if is_collection != st.collection_type.is_some() || is_website != st.website_type.is_some() {
        r.push(
            Rule::SourceTypeDetail,
            path,
            "collection and website sources need exactly their matching detail",
        );
    }
}

fn check_dataset_sources(ds: &DatasetSources, catalogue: &dyn EntryLookup, r: &mut ValidationReport) {
    if ds.originality == Originality::Original {
        let extra = ds.sources_investigable.is_some()
            || !ds.linked_primary_uids.is_empty()
            || !ds.source_types.is_empty()
            || ds.source_license.is_some();
        if extra {
            r.push(
                Rule::OriginalDatasetSources,
                "dataset_sources",
                "original datasets do not describe primary sources",
            );
        }
    }
    for (i, uid) in ds.linked_primary_uids.iter().enumerate() {
        check_link(
            uid,
            ResourceType::PrimarySource,
            format!("dataset_sources.linked_primary_uids[{i}]"),
            catalogue,
            r,
        );
    }
    for (i, st) in ds.source_types.iter().enumerate() {
        check_source_type(st, &format!("dataset_sources.source_types[{i}]"), r);
    }
    if let Some(l) = &ds.source_license {
        check_license(l, "dataset_sources.source_license", r);
    }
}

fn check_media(m: &MediaSpec, r: &mut ValidationReport) {
    if m.media.is_empty() {
        r.push(Rule::MediaRequired, "media.media", "select at least one medium");
    }
    if m.transcribed_from.is_some() && !m.media.contains(&MediaType::Text) {
        r.push(
            Rule::TranscriptionRequiresText,
            "media.transcribed_from",
            "transcription only applies to text data",
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{org_entry, primary_entry, processed_entry};

    fn lookup(entries: &[(&str, ResourceType)]) -> HashMap<String, ResourceType> {
        entries.iter().map(|(u, t)| (u.to_string(), *t)).collect()
    }

    #[test]
    fn clean_entries_are_accepted() {
        let cat = lookup(&[("le-monde-group", ResourceType::Organization), ("le-monde", ResourceType::PrimarySource)]);
        for e in [org_entry("le-monde-group"), primary_entry("le-monde"), processed_entry("fr-news")] {
            let report = validate_entry(&e, &cat);
            assert!(report.is_empty(), "{report}");
        }
    }

    #[test]
    fn organization_with_availability() {
        let mut e = org_entry("group-le-monde");
        e.availability = primary_entry("x-src").availability;
        let report = validate_entry(&e, &NoCatalogue);
        assert_eq!(report.violations.len(), 1, "{report}");
        assert_eq!(report.violations[0].rule, Rule::SectionApplicability);
        assert_eq!(report.violations[0].path, "availability");
    }

    #[test]
    fn missing_pii_justification() {
        let mut e = primary_entry("le-monde");
        let pii = &mut e.availability.as_mut().unwrap().pii;
        pii.contains = Some(PiiContains::No);
        pii.no_pii_justification = None;
        let report = validate_entry(&e, &NoCatalogue);
        assert_eq!(report.rules(), BTreeSet::from([Rule::PiiJustificationRequired]));
    }

    #[test]
    fn link_to_organization_from_dataset() {
        let e = processed_entry("fr-news");
        let cat = lookup(&[("le-monde", ResourceType::Organization)]);
        let report = validate_entry(&e, &cat);
        assert_eq!(report.rules(), BTreeSet::from([Rule::LinkTargetType]));
        let report = validate_entry(&e, &NoCatalogue);
        assert_eq!(report.rules(), BTreeSet::from([Rule::LinkUnresolved]));
    }

    #[test]
    fn missing_custodian_is_a_warning() {
        let mut e = org_entry("masakhane");
        e.custodian = None;
        let report = validate_entry(&e, &NoCatalogue);
        assert!(report.is_accepted());
        assert_eq!(report.rules(), BTreeSet::from([Rule::CustodianMissing]));
        assert_eq!(report.violations[0].severity, Severity::Warning);
    }

    #[test]
    fn uid_grammar() {
        assert!(is_valid_uid("le-monde"));
        assert!(is_valid_uid("abc"));
        assert!(!is_valid_uid("ab"));
        assert!(!is_valid_uid("Le-Monde"));
        assert!(!is_valid_uid("le_monde"));
        assert!(!is_valid_uid(&"a".repeat(65)));
        assert!(is_valid_uid(&"a".repeat(64)));
    }

    #[test]
    fn each_rule_reported_once_per_path() {
        let mut r = ValidationReport::default();
        r.push(Rule::UidFormat, "general.uid", "a");
        r.push(Rule::UidFormat, "general.uid", "b");
        assert_eq!(r.violations.len(), 1);
    }

    #[test]
    fn validation_is_pure() {
        let e = primary_entry("le-monde");
        assert_eq!(validate_entry(&e, &NoCatalogue), validate_entry(&e, &NoCatalogue));
    }
}
