//! A machine-readable description of the form: which sections each resource
//! type answers, the closed and open vocabularies, and the rule ids.

use serde_json::{json, Map, Value};

use super::*;
use crate::geo::Macroarea;
use crate::langtag::TargetGroup;

/// Ids of the fixed choices of each open vocabulary. Any other answer is
/// written `{"other": "<text>"}`.
pub const OPEN_VOCABULARIES: &[(&str, &[&str])] = &[
    (
        "general_pii",
        &[
            "names",
            "physical_addresses",
            "email_addresses",
            "accounts_or_handles",
            "dates",
            "full_face_photographs",
            "biometric_identifiers",
        ],
    ),
    (
        "numeric_pii",
        &[
            "contact_numbers",
            "vehicle_or_device_identifiers",
            "ip_addresses",
            "medical_or_health_plan_numbers",
            "other_unique_numbers",
        ],
    ),
    (
        "sensitive_pii",
        &[
            "racial_or_ethnic_origin",
            "political_opinions",
            "religious_or_philosophical_beliefs",
            "trade_union_membership",
            "genetic_data",
            "health_data",
            "sex_life_or_sexual_orientation",
        ],
    ),
    ("no_pii_justification", &["fictional", "general_knowledge"]),
    ("source_kind", &["collection", "website"]),
    (
        "collection_type",
        &[
            "books_or_publishers",
            "scientific_articles_journals",
            "news_articles",
            "radio_programs",
            "movies_documentaries",
            "podcasts",
        ],
    ),
    ("website_type", &["social_media", "forum", "news_or_magazine", "wiki", "blog", "content_repository"]),
    ("size_unit", &["articles", "posts", "dialogues", "episodes", "books", "webpages"]),
];

fn closed<T: Copy>(all: &[T], id: impl Fn(T) -> &'static str, label: Option<&dyn Fn(T) -> &'static str>) -> Value {
    let values: Vec<Value> = all
        .iter()
        .map(|&v| match label {
            Some(l) => json!({ "id": id(v), "label": l(v) }),
            None => json!({ "id": id(v) }),
        })
        .collect();
    json!({ "open": false, "values": values })
}

/// The document served to form clients.
pub fn schema_document() -> Value {
    let mut vocabularies = Map::new();
    vocabularies.insert("resource_type".into(), closed(ResourceType::ALL, ResourceType::id, Some(&ResourceType::label)));
    vocabularies.insert("section".into(), closed(Section::ALL, Section::id, None));
    vocabularies.insert(
        "custodian_type".into(),
        closed(CustodianType::ALL, CustodianType::id, Some(&CustodianType::label)),
    );
    vocabularies.insert("procurement".into(), closed(Procurement::ALL, Procurement::id, None));
    vocabularies.insert("explicit_terms".into(), closed(ExplicitTerms::ALL, ExplicitTerms::id, None));
    vocabularies.insert(
        "license_property".into(),
        closed(LicenseProperty::ALL, LicenseProperty::id, Some(&LicenseProperty::label)),
    );
    vocabularies.insert("pii_contains".into(), closed(PiiContains::ALL, PiiContains::id, None));
    vocabularies.insert("pii_category".into(), closed(PiiCategory::ALL, PiiCategory::id, None));
    vocabularies.insert("likelihood".into(), closed(Likelihood::ALL, Likelihood::id, None));
    vocabularies.insert("originality".into(), closed(Originality::ALL, Originality::id, None));
    vocabularies.insert("investigability".into(), closed(Investigability::ALL, Investigability::id, None));
    vocabularies.insert("media_type".into(), closed(MediaType::ALL, MediaType::id, None));
    vocabularies.insert(
        "transcription_source".into(),
        closed(TranscriptionSource::ALL, TranscriptionSource::id, None),
    );
    vocabularies.insert(
        "target_group".into(),
        closed(&TargetGroup::ALL, TargetGroup::id, Some(&TargetGroup::label)),
    );
    vocabularies.insert("macroarea".into(), closed(&Macroarea::ALL, Macroarea::id, Some(&Macroarea::label)));
    for (name, ids) in OPEN_VOCABULARIES {
        let values: Vec<Value> = ids.iter().map(|id| json!({ "id": id })).collect();
        vocabularies.insert((*name).into(), json!({ "open": true, "values": values }));
    }

    let sections: Map<String, Value> = ResourceType::ALL
        .iter()
        .map(|&t| {
            let ids: Vec<&str> = applicable_sections(t).into_iter().map(Section::id).collect();
            (t.id().to_string(), json!(ids))
        })
        .collect();
    let rules: Vec<Value> = Rule::ALL
        .iter()
        .map(|&r| json!({ "id": r.id(), "severity": r.severity() }))
        .collect();
    json!({
        "applicable_sections": sections,
        "vocabularies": vocabularies,
        "rules": rules,
        "magnitude_bucket": { "min_exponent": 0, "max_exponent": MagnitudeBucket::MAX_EXPONENT },
    })
}
