//! The entry data model: resource types, their conditional sections, and the
//! closed vocabularies the submission form offers.

mod canonical;
mod describe;
mod rules;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::geo::GeoLocation;
use crate::langtag::{LanguageTag, TargetGroup};

pub use canonical::{
    apply_section_edit, canonical_json_value, decode_json, entry_from_json, entry_to_canonical_json, section_to_json,
    to_canonical_bytes, EditError, JsonError,
};
pub use describe::{schema_document, OPEN_VOCABULARIES};
pub use rules::{validate_entry, EntryLookup, NoCatalogue, Rule, Severity, ValidationReport, Violation};

/// Implements `id()`, `Display` and `FromStr` over the serde names of a
/// fieldless enum.
macro_rules! vocabulary {
    ($ty:ident { $($variant:ident => $id:literal),+ $(,)? }) => {
        impl $ty {
            pub const ALL: &'static [$ty] = &[$($ty::$variant),+];

            pub fn id(self) -> &'static str {
                match self {
                    $($ty::$variant => $id),+
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.id())
            }
        }

        impl FromStr for $ty {
            type Err = UnknownVariant;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($id => Ok($ty::$variant),)+
                    other => Err(UnknownVariant {
                        vocabulary: stringify!($ty),
                        value: other.to_string(),
                    }),
                }
            }
        }
    };
}

/// An out-of-vocabulary value.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {vocabulary} value {value:?}")]
pub struct UnknownVariant {
    pub vocabulary: &'static str,
    pub value: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResourceType {
    PrimarySource,
    ProcessedDataset,
    Organization,
}

vocabulary!(ResourceType {
    PrimarySource => "primary_source",
    ProcessedDataset => "processed_dataset",
    Organization => "organization",
});

impl ResourceType {
    pub fn label(self) -> &'static str {
        match self {
            Self::PrimarySource => "Primary source",
            Self::ProcessedDataset => "Processed dataset",
            Self::Organization => "Organization",
        }
    }
}

/// Form sections, in form order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Section {
    General,
    Languages,
    Locations,
    Custodian,
    Availability,
    SourceType,
    DatasetSources,
    Media,
}

vocabulary!(Section {
    General => "general",
    Languages => "languages",
    Locations => "locations",
    Custodian => "custodian",
    Availability => "availability",
    SourceType => "source_type",
    DatasetSources => "dataset_sources",
    Media => "media",
});

/// Sections that an entry of the given type answers.
pub fn applicable_sections(rtype: ResourceType) -> BTreeSet<Section> {
    use Section::*;
    let mut sections = BTreeSet::from([General, Languages, Locations, Custodian]);
    match rtype {
        ResourceType::Organization => {}
        ResourceType::PrimarySource => sections.extend([Availability, SourceType, Media]),
        ResourceType::ProcessedDataset => sections.extend([Availability, DatasetSources, Media]),
    }
    sections
}

/// A name and email pair identifying a submitter, author or validator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Person {
    pub name: String,
    pub email: String,
}

impl Person {
    pub fn new(name: impl Into<String>, email: impl Into<String>) -> Self {
        Self { name: name.into(), email: email.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneralInfo {
    pub uid: String,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homepage: Option<String>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LanguageSelection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<TargetGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<LanguageTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variety_comment: Option<String>,
}

impl LanguageSelection {
    pub fn tag(tag: LanguageTag) -> Self {
        Self { tag: Some(tag), ..Self::default() }
    }

    pub fn group(group: TargetGroup) -> Self {
        Self { group: Some(group), ..Self::default() }
    }

    /// The explicit group, else the group the tag maps to.
    pub fn effective_group(&self) -> Option<TargetGroup> {
        self.group
            .or_else(|| self.tag.as_ref().and_then(crate::langtag::group_of))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CustodianType {
    UniversityOrResearch,
    Commercial,
    NonprofitNgo,
    PrivateIndividual,
    Government,
    LibraryMuseumArchive,
    Community,
    Startup,
}

vocabulary!(CustodianType {
    UniversityOrResearch => "university_or_research",
    Commercial => "commercial",
    NonprofitNgo => "nonprofit_ngo",
    PrivateIndividual => "private_individual",
    Government => "government",
    LibraryMuseumArchive => "library_museum_archive",
    Community => "community",
    Startup => "startup",
});

impl CustodianType {
    pub fn label(self) -> &'static str {
        match self {
            Self::UniversityOrResearch => "University or research institution",
            Self::Commercial => "Commercial entity",
            Self::NonprofitNgo => "Nonprofit / NGO",
            Self::PrivateIndividual => "Private individual",
            Self::Government => "Government organization",
            Self::LibraryMuseumArchive => "Library, museum or archival institute",
            Self::Community => "Community (incl. online)",
            Self::Startup => "Startup",
        }
    }
}

/// Who owns or manages the data. Either links to an organization entry or
/// names the custodian directly.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Custodian {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_uid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub ctype: Option<CustodianType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<GeoLocation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contact: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Procurement {
    OnlineDirectDownload,
    OnlineAfterContact,
    ContactCustodianOnly,
}

vocabulary!(Procurement {
    OnlineDirectDownload => "online_direct_download",
    OnlineAfterContact => "online_after_contact",
    ContactCustodianOnly => "contact_custodian_only",
});

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Availability {
    pub procurement: Procurement,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub download_url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contact: Option<String>,
    pub license: LicenseInfo,
    pub pii: PiiAssessment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExplicitTerms {
    Yes,
    No,
    Unclear,
}

vocabulary!(ExplicitTerms { Yes => "yes", No => "no", Unclear => "unclear" });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LicenseProperty {
    OpenLicense,
    PublicDomain,
    ResearchUse,
    NonCommercialUse,
    Copyright,
    MultipleLicenses,
    DoNotDistribute,
}

vocabulary!(LicenseProperty {
    OpenLicense => "open_license",
    PublicDomain => "public_domain",
    ResearchUse => "research_use",
    NonCommercialUse => "non_commercial_use",
    Copyright => "copyright",
    MultipleLicenses => "multiple_licenses",
    DoNotDistribute => "do_not_distribute",
});

impl LicenseProperty {
    pub fn label(self) -> &'static str {
        match self {
            Self::OpenLicense => "Open license",
            Self::PublicDomain => "Public domain",
            Self::ResearchUse => "Research use",
            Self::NonCommercialUse => "Non-commercial use",
            Self::Copyright => "Copyright",
            Self::MultipleLicenses => "Multiple licenses",
            Self::DoNotDistribute => "Do not distribute",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LicenseInfo {
    pub has_explicit_terms: ExplicitTerms,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub properties: BTreeSet<LicenseProperty>,
    /// SPDX-style identifiers; the list is open.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub named_licenses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub license_text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub usability_assessment: Option<String>,
}

impl LicenseInfo {
    pub fn new(has_explicit_terms: ExplicitTerms) -> Self {
        Self {
            has_explicit_terms,
            properties: BTreeSet::new(),
            named_licenses: Vec::new(),
            license_text: None,
            usability_assessment: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PiiContains {
    Yes,
    YesAuthorNameOnly,
    No,
    Unclear,
}

vocabulary!(PiiContains {
    Yes => "yes",
    YesAuthorNameOnly => "yes_author_name_only",
    No => "no",
    Unclear => "unclear",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PiiCategory {
    General,
    Numeric,
    Sensitive,
}

vocabulary!(PiiCategory { General => "general", Numeric => "numeric", Sensitive => "sensitive" });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Likelihood {
    VeryLikely,
    SomewhatLikely,
    Unlikely,
    None,
}

vocabulary!(Likelihood {
    VeryLikely => "very_likely",
    SomewhatLikely => "somewhat_likely",
    Unlikely => "unlikely",
    None => "none",
});

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneralPii {
    Names,
    PhysicalAddresses,
    EmailAddresses,
    AccountsOrHandles,
    Dates,
    FullFacePhotographs,
    BiometricIdentifiers,
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NumericPii {
    ContactNumbers,
    VehicleOrDeviceIdentifiers,
    IpAddresses,
    MedicalOrHealthPlanNumbers,
    OtherUniqueNumbers,
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensitivePii {
    RacialOrEthnicOrigin,
    PoliticalOpinions,
    ReligiousOrPhilosophicalBeliefs,
    TradeUnionMembership,
    GeneticData,
    HealthData,
    SexLifeOrSexualOrientation,
    Other(String),
}

/// Specific kinds of PII expected in the data, per category.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiiKinds {
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub general: BTreeSet<GeneralPii>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub numeric: BTreeSet<NumericPii>,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub sensitive: BTreeSet<SensitivePii>,
}

impl PiiKinds {
    pub fn is_empty_for(&self, category: PiiCategory) -> bool {
        match category {
            PiiCategory::General => self.general.is_empty(),
            PiiCategory::Numeric => self.numeric.is_empty(),
            PiiCategory::Sensitive => self.sensitive.is_empty(),
        }
    }

    pub fn is_empty(&self) -> bool {
        PiiCategory::ALL.iter().all(|&c| self.is_empty_for(c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoPiiJustification {
    Fictional,
    GeneralKnowledge,
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiiAssessment {
    /// `None` records that the question was left unanswered.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contains: Option<PiiContains>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub category_likelihoods: BTreeMap<PiiCategory, Likelihood>,
    #[serde(default, skip_serializing_if = "PiiKinds::is_empty")]
    pub kinds: PiiKinds,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_pii_justification: Option<NoPiiJustification>,
}

impl PiiAssessment {
    /// A missing likelihood reads as `none`.
    pub fn likelihood(&self, category: PiiCategory) -> Likelihood {
        self.category_likelihoods
            .get(&category)
            .copied()
            .unwrap_or(Likelihood::None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Collection,
    Website,
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollectionType {
    BooksOrPublishers,
    ScientificArticlesJournals,
    NewsArticles,
    RadioPrograms,
    MoviesDocumentaries,
    Podcasts,
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WebsiteType {
    SocialMedia,
    Forum,
    NewsOrMagazine,
    Wiki,
    Blog,
    ContentRepository,
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimarySourceType {
    pub kind: SourceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collection_type: Option<CollectionType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub website_type: Option<WebsiteType>,
}

impl PrimarySourceType {
    pub fn collection(t: CollectionType) -> Self {
        Self { kind: SourceKind::Collection, collection_type: Some(t), website_type: None }
    }

    pub fn website(t: WebsiteType) -> Self {
        Self { kind: SourceKind::Website, collection_type: None, website_type: Some(t) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Originality {
    Original,
    FromPrimarySources,
}

vocabulary!(Originality { Original => "original", FromPrimarySources => "from_primary_sources" });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Investigability {
    Documented,
    Described,
    OpenlyAvailable,
    No,
}

vocabulary!(Investigability {
    Documented => "documented",
    Described => "described",
    OpenlyAvailable => "openly_available",
    No => "no",
});

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSources {
    pub originality: Originality,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sources_investigable: Option<Investigability>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub linked_primary_uids: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub source_types: Vec<PrimarySourceType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_license: Option<LicenseInfo>,
}

impl DatasetSources {
    pub fn original() -> Self {
        Self {
            originality: Originality::Original,
            sources_investigable: None,
            linked_primary_uids: Vec::new(),
            source_types: Vec::new(),
            source_license: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MediaType {
    Text,
    Audiovisual,
    Image,
}

vocabulary!(MediaType { Text => "text", Audiovisual => "audiovisual", Image => "image" });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TranscriptionSource {
    Audiovisual,
    Image,
}

vocabulary!(TranscriptionSource { Audiovisual => "audiovisual", Image => "image" });

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeUnit {
    Articles,
    Posts,
    Dialogues,
    Episodes,
    Books,
    Webpages,
    Other(String),
}

/// The decade `[10^k, 10^(k+1))`, with `k` in `0..=12`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct MagnitudeBucket(u8);

impl MagnitudeBucket {
    pub const MAX_EXPONENT: u8 = 12;

    pub fn new(exponent: u8) -> Option<Self> {
        (exponent <= Self::MAX_EXPONENT).then_some(Self(exponent))
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    /// Whether `n` falls inside this decade.
    pub fn contains(self, n: u64) -> bool {
        let lo = 10u64.pow(u32::from(self.0));
        n >= lo && n / 10 < lo
    }
}

impl TryFrom<u8> for MagnitudeBucket {
    type Error = String;

    fn try_from(k: u8) -> Result<Self, Self::Error> {
        Self::new(k).ok_or_else(|| format!("magnitude exponent {k} exceeds {}", Self::MAX_EXPONENT))
    }
}

impl From<MagnitudeBucket> for u8 {
    fn from(b: MagnitudeBucket) -> u8 {
        b.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediaSpec {
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub media: BTreeSet<MediaType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format_note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transcribed_from: Option<TranscriptionSource>,
    pub size_unit: SizeUnit,
    pub instance_count_bucket: MagnitudeBucket,
    pub words_per_instance_bucket: MagnitudeBucket,
}

/// Who submitted the entry and when they saved it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub submitter: Person,
    pub saved_at: DateTime<Utc>,
}

/// One documented resource.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogueEntry {
    pub rtype: ResourceType,
    pub general: GeneralInfo,
    pub languages: Vec<LanguageSelection>,
    /// Order is significant: the first location drives the location report.
    #[serde(default)]
    pub locations: Vec<GeoLocation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custodian: Option<Custodian>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub availability: Option<Availability>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_type: Option<PrimarySourceType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset_sources: Option<DatasetSources>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub media: Option<MediaSpec>,
    pub provenance: Provenance,
}

impl CatalogueEntry {
    pub fn uid(&self) -> &str {
        &self.general.uid
    }

    /// Sections that carry an answer in this entry. General, languages and
    /// locations are always answered.
    pub fn present_sections(&self) -> BTreeSet<Section> {
        let mut s = BTreeSet::from([Section::General, Section::Languages, Section::Locations]);
        let optional = [
            (Section::Custodian, self.custodian.is_some()),
            (Section::Availability, self.availability.is_some()),
            (Section::SourceType, self.source_type.is_some()),
            (Section::DatasetSources, self.dataset_sources.is_some()),
            (Section::Media, self.media.is_some()),
        ];
        s.extend(optional.into_iter().filter_map(|(sec, present)| present.then_some(sec)));
        s
    }

    /// Distinct target groups across the language selections.
    pub fn groups(&self) -> BTreeSet<TargetGroup> {
        self.languages.iter().filter_map(LanguageSelection::effective_group).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_per_type() {
        use Section::*;
        assert_eq!(
            applicable_sections(ResourceType::Organization),
            BTreeSet::from([General, Languages, Locations, Custodian])
        );
        assert_eq!(
            applicable_sections(ResourceType::PrimarySource),
            BTreeSet::from([General, Languages, Locations, Custodian, Availability, SourceType, Media])
        );
        assert_eq!(
            applicable_sections(ResourceType::ProcessedDataset),
            BTreeSet::from([General, Languages, Locations, Custodian, Availability, DatasetSources, Media])
        );
    }

    #[test]
    fn vocabularies_round_trip_through_ids() {
        for &t in CustodianType::ALL {
            assert_eq!(t.id().parse::<CustodianType>().unwrap(), t);
            assert_eq!(serde_json::to_value(t).unwrap(), t.id());
        }
        for &p in LicenseProperty::ALL {
            assert_eq!(serde_json::to_value(p).unwrap(), p.id());
        }
        for &s in Section::ALL {
            assert_eq!(serde_json::to_value(s).unwrap(), s.id());
        }
        assert!("university".parse::<CustodianType>().is_err());
        assert!("primary sorce".parse::<ResourceType>().is_err());
    }

    #[test]
    fn open_vocabularies_use_other_escape() {
        let v = serde_json::to_value(SizeUnit::Other("tweets".into())).unwrap();
        assert_eq!(v, serde_json::json!({"other": "tweets"}));
        assert_eq!(serde_json::to_value(SizeUnit::Books).unwrap(), "books");
        assert!(serde_json::from_value::<GeneralPii>(serde_json::json!("shoe_size")).is_err());
    }

    #[test]
    fn magnitude_bounds() {
        assert!(MagnitudeBucket::new(12).is_some());
        assert!(MagnitudeBucket::new(13).is_none());
        assert!(serde_json::from_str::<MagnitudeBucket>("13").is_err());
        let b = MagnitudeBucket::new(3).unwrap();
        assert!(b.contains(1000) && b.contains(9999));
        assert!(!b.contains(999) && !b.contains(10_000));
        assert!(MagnitudeBucket::new(0).unwrap().contains(1));
    }
}
