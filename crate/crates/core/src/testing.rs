//! Fixture builders and random generators of valid entries, shared by the
//! unit, property and acceptance tests.

use std::collections::BTreeSet;

use chrono::{DateTime, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::geo::resolve_location;
use crate::langtag::{group_of, parse_tag};
use crate::schema::*;

pub fn timestamp() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2021, 12, 14, 12, 0, 0).unwrap()
}

pub fn submitter() -> Person {
    Person::new("Ada Submitter", "ada@example.org")
}

fn provenance() -> Provenance {
    Provenance { submitter: submitter(), saved_at: timestamp() }
}

fn general(uid: &str, name: &str) -> GeneralInfo {
    GeneralInfo {
        uid: uid.to_string(),
        name: name.to_string(),
        homepage: Some(format!("https://example.org/{uid}")),
        description: format!("{name}, documented for the catalogue."),
    }
}

/// A clean organization entry with a named university custodian.
pub fn org_entry(uid: &str) -> CatalogueEntry {
    CatalogueEntry {
        rtype: ResourceType::Organization,
        general: general(uid, "Groupe Le Monde"),
        languages: vec![LanguageSelection::tag(parse_tag("fr").unwrap())],
        locations: vec![resolve_location("France")],
        custodian: Some(Custodian {
            link_uid: None,
            name: Some("Groupe Le Monde".into()),
            ctype: Some(CustodianType::Commercial),
            location: Some(resolve_location("France")),
            contact: Some("contact@lemonde.example".into()),
        }),
        availability: None,
        source_type: None,
        dataset_sources: None,
        media: None,
        provenance: provenance(),
    }
}

fn availability() -> Availability {
    let mut license = LicenseInfo::new(ExplicitTerms::Yes);
    license.properties.insert(LicenseProperty::Copyright);
    Availability {
        procurement: Procurement::OnlineAfterContact,
        download_url: None,
        contact: Some("archives@lemonde.example".into()),
        license,
        pii: PiiAssessment {
            contains: Some(PiiContains::Yes),
            category_likelihoods: [(PiiCategory::General, Likelihood::VeryLikely)].into(),
            kinds: PiiKinds {
                general: BTreeSet::from([GeneralPii::Names]),
                ..PiiKinds::default()
            },
            no_pii_justification: None,
        },
    }
}

fn media() -> MediaSpec {
    MediaSpec {
        media: BTreeSet::from([MediaType::Text]),
        format_note: Some("HTML pages".into()),
        transcribed_from: None,
        size_unit: SizeUnit::Articles,
        instance_count_bucket: MagnitudeBucket::new(6).unwrap(),
        words_per_instance_bucket: MagnitudeBucket::new(2).unwrap(),
    }
}

/// A clean primary source with an unlinked custodian.
pub fn primary_entry(uid: &str) -> CatalogueEntry {
    CatalogueEntry {
        rtype: ResourceType::PrimarySource,
        general: general(uid, "Le Monde"),
        languages: vec![LanguageSelection::tag(parse_tag("fr-FR").unwrap())],
        locations: vec![resolve_location("France"), resolve_location("World-wide")],
        custodian: Some(Custodian {
            link_uid: None,
            name: Some("Groupe Le Monde".into()),
            ctype: Some(CustodianType::Commercial),
            location: Some(resolve_location("France")),
            contact: None,
        }),
        availability: Some(availability()),
        source_type: Some(PrimarySourceType::website(WebsiteType::NewsOrMagazine)),
        dataset_sources: None,
        media: Some(media()),
        provenance: provenance(),
    }
}

/// A clean processed dataset derived from the primary source `le-monde`.
pub fn processed_entry(uid: &str) -> CatalogueEntry {
    let mut e = primary_entry(uid);
    e.rtype = ResourceType::ProcessedDataset;
    e.general = general(uid, "French news corpus");
    e.source_type = None;
    e.dataset_sources = Some(DatasetSources {
        originality: Originality::FromPrimarySources,
        sources_investigable: Some(Investigability::Documented),
        linked_primary_uids: vec!["le-monde".into()],
        source_types: vec![PrimarySourceType::website(WebsiteType::NewsOrMagazine)],
        source_license: None,
    });
    e
}

pub const TAG_POOL: &[&str] = &[
    "en", "en-GB", "en-US", "fr", "fr-CA", "es", "es-419", "pt-BR", "pt", "ar", "arb", "ar-EG", "arz",
    "eu", "ca", "zh", "zh-Hant-TW", "yue", "hi", "bn", "ta", "ur", "id", "sw", "yo", "ig", "zu", "wo",
    "vi", "ja", "ko", "de", "ru", "qu", "gn", "haw", "mi", "x-code-python", "x-code-rust", "sgn-BE-FR",
];

pub const LOCATION_POOL: &[&str] = &[
    "World-wide", "Africa", "Americas", "Asia", "Europe", "Latin America and the Caribbean",
    "Middle East and North Africa", "North Africa", "North America", "Oceania", "Spain", "France",
    "USA", "UK", "Vietnam", "Indonesia", "India", "Colombia", "Kenya", "Nigeria", "Egypt", "Jordan",
    "Basque Country", "Catalonia", "Polynesia", "Western Africa", "Atlantis", "Springfield",
];

fn pick<'a, R: Rng, T>(rng: &mut R, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("non-empty pool")
}

fn subset<R: Rng, T: Copy + Ord>(rng: &mut R, items: &[T], p: f64) -> BTreeSet<T> {
    items.iter().copied().filter(|_| rng.gen_bool(p)).collect()
}

fn random_languages<R: Rng>(rng: &mut R) -> Vec<LanguageSelection> {
    let n = rng.gen_range(1..=3);
    (0..n)
        .map(|_| {
            let tag = parse_tag(pick(rng, TAG_POOL)).unwrap();
            match rng.gen_range(0..10) {
                0 => LanguageSelection::group(*pick(rng, &crate::langtag::TargetGroup::ALL)),
                1 | 2 => LanguageSelection {
                    group: group_of(&tag),
                    tag: Some(tag),
                    variety_comment: Some("includes dialectal material".into()),
                },
                _ => LanguageSelection::tag(tag),
            }
        })
        .collect()
}

fn random_locations<R: Rng>(rng: &mut R) -> Vec<crate::geo::GeoLocation> {
    let n = rng.gen_range(0..=3);
    (0..n).map(|_| resolve_location(pick(rng, LOCATION_POOL))).collect()
}

fn random_custodian<R: Rng>(rng: &mut R, orgs: &[String]) -> Option<Custodian> {
    match rng.gen_range(0..10) {
        0 | 1 => None,
        2 | 3 if !orgs.is_empty() => Some(Custodian {
            link_uid: Some(pick(rng, orgs).clone()),
            ..Custodian::default()
        }),
        _ => Some(Custodian {
            link_uid: None,
            name: Some("Some Custodian".into()),
            ctype: Some(*pick(rng, CustodianType::ALL)),
            location: rng.gen_bool(0.7).then(|| resolve_location(pick(rng, LOCATION_POOL))),
            contact: rng.gen_bool(0.5).then(|| "custodian@example.org".to_string()),
        }),
    }
}

fn random_license<R: Rng>(rng: &mut R) -> LicenseInfo {
    let mut l = LicenseInfo::new(*pick(rng, ExplicitTerms::ALL));
    if rng.gen_bool(0.7) {
        l.properties = subset(rng, LicenseProperty::ALL, 0.3);
    }
    if rng.gen_bool(0.3) {
        l.named_licenses.push(pick(rng, &["CC-BY-4.0", "CC-BY-NC-4.0", "MIT", "ODC-BY-1.0"]).to_string());
    }
    if l.has_explicit_terms == ExplicitTerms::Unclear {
        l.usability_assessment = Some("probably fine for research".into());
    }
    l
}

fn random_pii<R: Rng>(rng: &mut R) -> PiiAssessment {
    let contains = match rng.gen_range(0..5) {
        0 => None,
        i => Some(PiiContains::ALL[i - 1]),
    };
    let mut pii = PiiAssessment { contains, ..PiiAssessment::default() };
    if contains == Some(PiiContains::No) {
        pii.no_pii_justification = Some(match rng.gen_range(0..3) {
            0 => NoPiiJustification::Fictional,
            1 => NoPiiJustification::GeneralKnowledge,
            _ => NoPiiJustification::Other("synthetic data".into()),
        });
    }
    for &c in PiiCategory::ALL {
        if rng.gen_bool(0.5) {
            let l = *pick(rng, Likelihood::ALL);
            pii.category_likelihoods.insert(c, l);
            if l != Likelihood::None && rng.gen_bool(0.5) {
                match c {
                    PiiCategory::General => {
                        pii.kinds.general.insert(GeneralPii::Names);
                    }
                    PiiCategory::Numeric => {
                        pii.kinds.numeric.insert(NumericPii::IpAddresses);
                    }
                    PiiCategory::Sensitive => {
                        pii.kinds.sensitive.insert(SensitivePii::Other("caste".into()));
                    }
                }
            }
        }
    }
    pii
}

fn random_availability<R: Rng>(rng: &mut R) -> Availability {
    let procurement = *pick(rng, Procurement::ALL);
    let direct = procurement == Procurement::OnlineDirectDownload;
    Availability {
        procurement,
        download_url: direct.then(|| "https://example.org/download".to_string()),
        contact: (!direct).then(|| "data@example.org".to_string()),
        license: random_license(rng),
        pii: random_pii(rng),
    }
}

fn random_source_type<R: Rng>(rng: &mut R) -> PrimarySourceType {
    match rng.gen_range(0..5) {
        0 => PrimarySourceType {
            kind: SourceKind::Other("oral archive".into()),
            collection_type: None,
            website_type: None,
        },
        1 | 2 => PrimarySourceType::collection(
            pick(
                rng,
                &[
                    CollectionType::BooksOrPublishers,
                    CollectionType::NewsArticles,
                    CollectionType::RadioPrograms,
                    CollectionType::Podcasts,
                    CollectionType::Other("letters".into()),
                ],
            )
            .clone(),
        ),
        _ => PrimarySourceType::website(
            pick(
                rng,
                &[WebsiteType::SocialMedia, WebsiteType::Wiki, WebsiteType::Blog, WebsiteType::Forum],
            )
            .clone(),
        ),
    }
}

fn random_media<R: Rng>(rng: &mut R) -> MediaSpec {
    let mut media = subset(rng, MediaType::ALL, 0.4);
    if media.is_empty() {
        media.insert(MediaType::Text);
    }
    let transcribed_from = (media.contains(&MediaType::Text) && rng.gen_bool(0.3))
        .then(|| *pick(rng, TranscriptionSource::ALL));
    MediaSpec {
        media,
        format_note: rng.gen_bool(0.3).then(|| "plain text".to_string()),
        transcribed_from,
        size_unit: pick(rng, &[SizeUnit::Articles, SizeUnit::Posts, SizeUnit::Books, SizeUnit::Other("tweets".into())])
            .clone(),
        instance_count_bucket: MagnitudeBucket::new(rng.gen_range(0..=12)).unwrap(),
        words_per_instance_bucket: MagnitudeBucket::new(rng.gen_range(0..=6)).unwrap(),
    }
}

/// A valid entry whose links point only into `orgs` and `primaries`.
pub fn random_entry<R: Rng>(
    rng: &mut R,
    uid: &str,
    rtype: ResourceType,
    orgs: &[String],
    primaries: &[String],
) -> CatalogueEntry {
    let mut e = CatalogueEntry {
        rtype,
        general: GeneralInfo {
            uid: uid.to_string(),
            name: format!("Resource {uid}"),
            homepage: rng.gen_bool(0.5).then(|| format!("https://example.org/{uid}")),
            description: pick(rng, &["A news archive.", "Radio transcripts", "Community forum dump"]).to_string(),
        },
        languages: random_languages(rng),
        locations: random_locations(rng),
        custodian: random_custodian(rng, orgs),
        availability: None,
        source_type: None,
        dataset_sources: None,
        media: None,
        provenance: provenance(),
    };
    match rtype {
        ResourceType::Organization => {}
        ResourceType::PrimarySource => {
            e.availability = Some(random_availability(rng));
            e.source_type = Some(random_source_type(rng));
            e.media = Some(random_media(rng));
        }
        ResourceType::ProcessedDataset => {
            e.availability = Some(random_availability(rng));
            e.media = Some(random_media(rng));
            e.dataset_sources = Some(if rng.gen_bool(0.3) {
                DatasetSources::original()
            } else {
                let n = rng.gen_range(0..=2.min(primaries.len()));
                DatasetSources {
                    originality: Originality::FromPrimarySources,
                    sources_investigable: rng.gen_bool(0.7).then(|| *pick(rng, Investigability::ALL)),
                    linked_primary_uids: primaries.choose_multiple(rng, n).cloned().collect(),
                    source_types: (0..rng.gen_range(0..=2)).map(|_| random_source_type(rng)).collect(),
                    source_license: rng.gen_bool(0.4).then(|| random_license(rng)),
                }
            });
        }
    }
    e
}

/// `n` valid entries with resolvable links, in an order that can be saved
/// one by one (organizations, then primary sources, then datasets).
pub fn random_catalogue<R: Rng>(rng: &mut R, n: usize) -> Vec<CatalogueEntry> {
    let mut types: Vec<ResourceType> = (0..n).map(|_| *pick(rng, ResourceType::ALL)).collect();
    types.sort_by_key(|t| match t {
        ResourceType::Organization => 0,
        ResourceType::PrimarySource => 1,
        ResourceType::ProcessedDataset => 2,
    });
    let mut orgs = Vec::new();
    let mut primaries = Vec::new();
    let mut out = Vec::with_capacity(n);
    for (i, rtype) in types.into_iter().enumerate() {
        let uid = format!("entry-{i:03}-{}", rng.gen_range(0..1000));
        let e = random_entry(rng, &uid, rtype, &orgs, &primaries);
        match rtype {
            ResourceType::Organization => orgs.push(uid),
            ResourceType::PrimarySource => primaries.push(uid),
            ResourceType::ProcessedDataset => {}
        }
        out.push(e);
    }
    out
}

/// An organization and a primary source that links in generated entries can
/// point at, with a lookup that knows both.
pub const KNOWN_ORG: &str = "known-org";
pub const KNOWN_PRIMARY: &str = "known-primary";

pub fn known_lookup() -> std::collections::BTreeMap<String, ResourceType> {
    [
        (KNOWN_ORG.to_string(), ResourceType::Organization),
        (KNOWN_PRIMARY.to_string(), ResourceType::PrimarySource),
    ]
    .into()
}

/// Error rules that [`inject`] knows how to break.
pub const INJECTABLE: &[Rule] = &[
    Rule::SectionApplicability,
    Rule::UidFormat,
    Rule::RequiredField,
    Rule::LanguagesRequired,
    Rule::LanguageSelectionEmpty,
    Rule::LanguageGroupMismatch,
    Rule::LocationConsistency,
    Rule::CustodianIdentity,
    Rule::LinkUnresolved,
    Rule::LinkTargetType,
    Rule::DownloadUrlRequired,
    Rule::ContactRequired,
    Rule::LicenseAssessmentRequired,
    Rule::PiiJustificationRequired,
    Rule::PiiKindLikelihood,
    Rule::SourceTypeDetail,
    Rule::OriginalDatasetSources,
    Rule::MediaRequired,
    Rule::TranscriptionRequiresText,
    Rule::EmailFormat,
    Rule::UrlFormat,
];

/// A copy of the clean entry `e` that breaks exactly `rule`, or `None`
/// when the rule cannot apply to an entry of this type. Links resolve
/// against [`known_lookup`].
pub fn inject(e: &CatalogueEntry, rule: Rule) -> Option<CatalogueEntry> {
    let mut e = e.clone();
    match rule {
        Rule::SectionApplicability => match e.rtype {
            ResourceType::Organization => e.media = Some(media()),
            ResourceType::PrimarySource => e.media = None,
            ResourceType::ProcessedDataset => {
                e.source_type = Some(PrimarySourceType::website(WebsiteType::Wiki))
            }
        },
        Rule::UidFormat => e.general.uid = "Not_A_Slug".into(),
        Rule::RequiredField => e.general.name = "  ".into(),
        Rule::LanguagesRequired => e.languages.clear(),
        Rule::LanguageSelectionEmpty => e.languages.push(LanguageSelection::default()),
        Rule::LanguageGroupMismatch => e.languages.push(LanguageSelection {
            group: Some(crate::langtag::TargetGroup::Basque),
            tag: Some(parse_tag("fr").unwrap()),
            variety_comment: None,
        }),
        Rule::LocationConsistency => e.locations.push(crate::geo::GeoLocation {
            raw: "Nowhere".into(),
            level: crate::geo::LocationLevel::Country,
            macroarea: None,
            country_code: None,
        }),
        Rule::CustodianIdentity => {
            e.custodian = Some(Custodian { name: Some("Nameless type".into()), ..Custodian::default() })
        }
        Rule::LinkUnresolved => {
            e.custodian = Some(Custodian { link_uid: Some("no-such-org".into()), ..Custodian::default() })
        }
        Rule::LinkTargetType => {
            e.custodian = Some(Custodian { link_uid: Some(KNOWN_PRIMARY.into()), ..Custodian::default() })
        }
        Rule::DownloadUrlRequired => {
            let a = e.availability.as_mut()?;
            a.procurement = Procurement::OnlineDirectDownload;
            a.download_url = None;
        }
        Rule::ContactRequired => {
            let a = e.availability.as_mut()?;
            a.procurement = Procurement::ContactCustodianOnly;
            a.download_url = None;
            a.contact = None;
            if let Some(c) = e.custodian.as_mut() {
                c.contact = None;
            }
        }
        Rule::LicenseAssessmentRequired => {
            let l = &mut e.availability.as_mut()?.license;
            l.has_explicit_terms = ExplicitTerms::Unclear;
            l.usability_assessment = None;
        }
        Rule::PiiJustificationRequired => {
            let p = &mut e.availability.as_mut()?.pii;
            p.contains = Some(PiiContains::No);
            p.no_pii_justification = None;
        }
        Rule::PiiKindLikelihood => {
            let p = &mut e.availability.as_mut()?.pii;
            p.category_likelihoods.insert(PiiCategory::General, Likelihood::None);
            p.kinds.general.insert(GeneralPii::Names);
        }
        Rule::SourceTypeDetail => {
            e.source_type.as_ref()?;
            e.source_type = Some(PrimarySourceType {
                kind: SourceKind::Collection,
                collection_type: None,
                website_type: None,
            });
        }
        Rule::OriginalDatasetSources => {
            let d = e.dataset_sources.as_mut()?;
            *d = DatasetSources::original();
            d.sources_investigable = Some(Investigability::Documented);
        }
        Rule::MediaRequired => {
            let m = e.media.as_mut()?;
            m.media.clear();
            m.transcribed_from = None;
        }
        Rule::TranscriptionRequiresText => {
            let m = e.media.as_mut()?;
            m.media = BTreeSet::from([MediaType::Audiovisual]);
            m.transcribed_from = Some(TranscriptionSource::Image);
        }
        Rule::EmailFormat => e.provenance.submitter.email = "not an email".into(),
        Rule::UrlFormat => e.general.homepage = Some("ftp://example.org".into()),
        _ => return None,
    }
    Some(e)
}

/// A random valid entry whose links point at [`KNOWN_ORG`] and
/// [`KNOWN_PRIMARY`].
pub fn random_linked_entry<R: Rng>(rng: &mut R, uid: &str) -> CatalogueEntry {
    let rtype = *pick(rng, ResourceType::ALL);
    random_entry(rng, uid, rtype, &[KNOWN_ORG.to_string()], &[KNOWN_PRIMARY.to_string()])
}
