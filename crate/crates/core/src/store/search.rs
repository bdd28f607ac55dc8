use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CatalogueSnapshot;
use crate::geo::{GeoLocation, Macroarea};
use crate::langtag::TargetGroup;
use crate::schema::{
    CatalogueEntry, CustodianType, LicenseProperty, MediaType, PiiAssessment, PiiContains, ResourceType,
    UnknownVariant,
};

/// The answer to "does the data contain PII", with an explicit bucket for
/// entries that left it blank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PiiAnswer {
    Yes,
    Unclear,
    AnswerMissing,
    No,
    YesAuthorNameOnly,
}

impl PiiAnswer {
    /// Report row order.
    pub const ALL: [PiiAnswer; 5] =
        [Self::Yes, Self::Unclear, Self::AnswerMissing, Self::No, Self::YesAuthorNameOnly];

    pub fn of(pii: &PiiAssessment) -> Self {
        match pii.contains {
            Some(PiiContains::Yes) => Self::Yes,
            Some(PiiContains::YesAuthorNameOnly) => Self::YesAuthorNameOnly,
            Some(PiiContains::No) => Self::No,
            Some(PiiContains::Unclear) => Self::Unclear,
            None => Self::AnswerMissing,
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Self::Yes => "yes",
            Self::Unclear => "unclear",
            Self::AnswerMissing => "answer_missing",
            Self::No => "no",
            Self::YesAuthorNameOnly => "yes_author_name_only",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Yes => "Yes",
            Self::Unclear => "Unclear",
            Self::AnswerMissing => "Answer missing",
            Self::No => "No",
            Self::YesAuthorNameOnly => "Yes (text author's name only)",
        }
    }
}

impl fmt::Display for PiiAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for PiiAnswer {
    type Err = UnknownVariant;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| UnknownVariant { vocabulary: "PiiAnswer", value: s.to_string() })
    }
}

/// A conjunction of optional clauses; an empty filter matches everything.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchFilter {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rtype: Option<ResourceType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<TargetGroup>,
    /// Matches when any location falls in the macroarea.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub macroarea: Option<Macroarea>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub license: Option<LicenseProperty>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub media: Option<MediaType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub custodian_type: Option<CustodianType>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pii: Option<PiiAnswer>,
    /// Case-insensitive substring of the name or description.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

impl SearchFilter {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    pub fn matches(&self, e: &CatalogueEntry, snapshot: &CatalogueSnapshot) -> bool {
        if self.rtype.is_some_and(|t| t != e.rtype) {
            return false;
        }
        if self.group.is_some_and(|g| !e.groups().contains(&g)) {
            return false;
        }
        if self
            .macroarea
            .is_some_and(|m| !e.locations.iter().any(|l| l.macroarea == Some(m)))
        {
            return false;
        }
        let availability = e.availability.as_ref();
        if let Some(p) = self.license {
            if !availability.is_some_and(|a| a.license.properties.contains(&p)) {
                return false;
            }
        }
        if let Some(m) = self.media {
            if !e.media.as_ref().is_some_and(|s| s.media.contains(&m)) {
                return false;
            }
        }
        if let Some(t) = self.custodian_type {
            if custodian_view(e, snapshot).ctype != Some(t) {
                return false;
            }
        }
        if let Some(p) = self.pii {
            if !availability.is_some_and(|a| PiiAnswer::of(&a.pii) == p) {
                return false;
            }
        }
        if let Some(text) = self.text.as_deref().filter(|t| !t.is_empty()) {
            let needle = text.to_lowercase();
            let hay = [&e.general.name, &e.general.description];
            if !hay.iter().any(|h| h.to_lowercase().contains(&needle)) {
                return false;
            }
        }
        true
    }
}

/// The custodian as analytics sees it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CustodianView<'a> {
    /// The entry answers the custodian section at all.
    pub present: bool,
    pub name: Option<&'a str>,
    pub ctype: Option<CustodianType>,
    pub location: Option<&'a GeoLocation>,
}

pub(super) fn custodian_view<'a>(e: &'a CatalogueEntry, snapshot: &'a CatalogueSnapshot) -> CustodianView<'a> {
    let Some(c) = &e.custodian else {
        return CustodianView::default();
    };
    let mut view = CustodianView {
        present: true,
        name: c.name.as_deref(),
        ctype: c.ctype,
        location: c.location.as_ref(),
    };
    if let Some(org) = c.link_uid.as_deref().and_then(|uid| snapshot.resolve(uid)) {
        let linked = org.custodian.as_ref();
        view.name = view
            .name
            .or_else(|| linked.and_then(|l| l.name.as_deref()))
            .or(Some(org.general.name.as_str()));
        view.ctype = view.ctype.or_else(|| linked.and_then(|l| l.ctype));
        view.location = view.location.or_else(|| linked.and_then(|l| l.location.as_ref()));
    }
    view
}
