//! Well-formed BCP 47 language tags (RFC 5646 syntax) and the mapping from
//! tags to target language groups.
//!
//! Only well-formedness is checked. There is no registry snapshot, so a tag
//! such as `qqq-Zzzz-AA` parses fine even though none of its subtags are
//! registered.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Irregular and regular grandfathered tags, in registry casing.
const GRANDFATHERED: &[&str] = &[
    "en-GB-oed",
    "i-ami",
    "i-bnn",
    "i-default",
    "i-enochian",
    "i-hak",
    "i-klingon",
    "i-lux",
    "i-mingo",
    "i-navajo",
    "i-pwn",
    "i-tao",
    "i-tay",
    "i-tsu",
    "sgn-BE-FR",
    "sgn-BE-NL",
    "sgn-CH-DE",
    "art-lojban",
    "cel-gaulish",
    "no-bok",
    "no-nyn",
    "zh-guoyu",
    "zh-hakka",
    "zh-min",
    "zh-min-nan",
    "zh-xiang",
];

/// An extension sequence such as `u-co-phonebk`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Extension {
    pub singleton: char,
    pub subtags: Vec<String>,
}

/// A parsed language tag.
///
/// Values come out of [`LanguageTag::parse_preserving_case`] with the input
/// casing intact, or out of [`parse_tag`] already normalized.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LanguageTag {
    language: Option<String>,
    extlangs: Vec<String>,
    script: Option<String>,
    region: Option<String>,
    variants: Vec<String>,
    extensions: Vec<Extension>,
    private_use: Vec<String>,
    grandfathered: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagErrorReason {
    Empty,
    InvalidCharacter,
    EmptySubtag,
    SubtagTooLong,
    InvalidPrimaryLanguage,
    EmptyPrivateUse,
    EmptyExtension,
    UnexpectedSubtag,
}

impl fmt::Display for TagErrorReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Empty => "empty tag",
            Self::InvalidCharacter => "subtags may only contain ASCII letters and digits",
            Self::EmptySubtag => "empty subtag",
            Self::SubtagTooLong => "subtag longer than 8 characters",
            Self::InvalidPrimaryLanguage => "primary language subtag must be 2-8 letters",
            Self::EmptyPrivateUse => "private-use prefix without subtags",
            Self::EmptyExtension => "extension singleton without subtags",
            Self::UnexpectedSubtag => "subtag not allowed at this position",
        };
        f.write_str(s)
    }
}

/// Parse failure. `index` is the 1-based subtag number and `position` the
/// byte offset where that subtag starts.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid language tag: {reason} (subtag {index} {subtag:?} at byte {position})")]
pub struct TagParseError {
    pub index: usize,
    pub position: usize,
    pub subtag: String,
    pub reason: TagErrorReason,
}

struct Subtag<'a> {
    text: &'a str,
    index: usize,
    position: usize,
}

impl Subtag<'_> {
    fn error(&self, reason: TagErrorReason) -> TagParseError {
        TagParseError {
            index: self.index,
            position: self.position,
            subtag: self.text.to_string(),
            reason,
        }
    }
}

fn is_alpha(s: &str) -> bool {
    s.bytes().all(|b| b.is_ascii_alphabetic())
}

fn is_digit(s: &str) -> bool {
    s.bytes().all(|b| b.is_ascii_digit())
}

fn is_extlang(s: &str) -> bool {
    s.len() == 3 && is_alpha(s)
}

fn is_script(s: &str) -> bool {
    s.len() == 4 && is_alpha(s)
}

fn is_region(s: &str) -> bool {
    (s.len() == 2 && is_alpha(s)) || (s.len() == 3 && is_digit(s))
}

fn is_variant(s: &str) -> bool {
    (5..=8).contains(&s.len()) || (s.len() == 4 && s.as_bytes()[0].is_ascii_digit())
}

fn is_singleton(s: &str) -> bool {
    s.len() == 1 && !s.eq_ignore_ascii_case("x")
}

fn title_case(s: &str) -> String {
    let mut out = s.to_ascii_lowercase();
    if let Some(first) = out.get_mut(0..1) {
        first.make_ascii_uppercase();
    }
    out
}

impl LanguageTag {
    /// Parse a tag, keeping the casing of the input.
    pub fn parse_preserving_case(input: &str) -> Result<Self, TagParseError> {
        if input.is_empty() {
            return Err(TagParseError {
                index: 1,
                position: 0,
                subtag: String::new(),
                reason: TagErrorReason::Empty,
            });
        }

        let mut subtags = Vec::new();
        let mut position = 0;
        for (i, text) in input.split('-').enumerate() {
            let subtag = Subtag { text, index: i + 1, position };
            if text.is_empty() {
                return Err(subtag.error(TagErrorReason::EmptySubtag));
            }
            if !text.bytes().all(|b| b.is_ascii_alphanumeric()) {
                return Err(subtag.error(TagErrorReason::InvalidCharacter));
            }
            if text.len() > 8 {
                return Err(subtag.error(TagErrorReason::SubtagTooLong));
            }
            position += text.len() + 1;
            subtags.push(subtag);
        }

        if GRANDFATHERED.iter().any(|g| g.eq_ignore_ascii_case(input)) {
            return Ok(Self {
                grandfathered: Some(input.to_string()),
                ..Self::empty()
            });
        }

        let mut tag = Self::empty();
        let mut rest = subtags.iter().peekable();
        let first = rest.next().expect("split yields at least one subtag");

        if first.text.eq_ignore_ascii_case("x") {
            tag.private_use = parse_private_use(first, rest.map(|s| s.text).collect())?;
            return Ok(tag);
        }
        if !(2..=8).contains(&first.text.len()) || !is_alpha(first.text) {
            return Err(first.error(TagErrorReason::InvalidPrimaryLanguage));
        }
        tag.language = Some(first.text.to_string());

        if first.text.len() <= 3 {
            while tag.extlangs.len() < 3 {
                match rest.peek() {
                    Some(s) if is_extlang(s.text) => {
                        tag.extlangs.push(s.text.to_string());
                        rest.next();
                    }
                    _ => break,
                }
            }
        }
        if let Some(s) = rest.next_if(|s| is_script(s.text)) {
            tag.script = Some(s.text.to_string());
        }
        if let Some(s) = rest.next_if(|s| is_region(s.text)) {
            tag.region = Some(s.text.to_string());
        }
        while let Some(s) = rest.next_if(|s| is_variant(s.text)) {
            tag.variants.push(s.text.to_string());
        }
        while let Some(singleton) = rest.next_if(|s| is_singleton(s.text)) {
            let mut ext = Extension {
                singleton: singleton.text.chars().next().unwrap(),
                subtags: Vec::new(),
            };
            while let Some(s) = rest.next_if(|s| s.text.len() >= 2) {
                ext.subtags.push(s.text.to_string());
            }
            if ext.subtags.is_empty() {
                return Err(singleton.error(TagErrorReason::EmptyExtension));
            }
            tag.extensions.push(ext);
        }
        if let Some(x) = rest.next_if(|s| s.text.eq_ignore_ascii_case("x")) {
            tag.private_use = parse_private_use(x, rest.map(|s| s.text).collect())?;
            return Ok(tag);
        }
        if let Some(s) = rest.next() {
            return Err(s.error(TagErrorReason::UnexpectedSubtag));
        }
        Ok(tag)
    }

    fn empty() -> Self {
        Self {
            language: None,
            extlangs: Vec::new(),
            script: None,
            region: None,
            variants: Vec::new(),
            extensions: Vec::new(),
            private_use: Vec::new(),
            grandfathered: None,
        }
    }

    /// Primary language subtag; `None` for private-use-only and
    /// grandfathered tags.
    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    pub fn extlangs(&self) -> &[String] {
        &self.extlangs
    }

    pub fn script(&self) -> Option<&str> {
        self.script.as_deref()
    }

    pub fn region(&self) -> Option<&str> {
        self.region.as_deref()
    }

    pub fn variants(&self) -> &[String] {
        &self.variants
    }

    pub fn extensions(&self) -> &[Extension] {
        &self.extensions
    }

    /// Subtags after the `x` singleton.
    pub fn private_use(&self) -> &[String] {
        &self.private_use
    }

    pub fn grandfathered(&self) -> Option<&str> {
        self.grandfathered.as_deref()
    }

    /// Apply the RFC 5646 casing conventions: script title case, two-letter
    /// region upper case, everything else lower case. Subtags after the
    /// first singleton are always lower case.
    pub fn normalize(&self) -> Self {
        let lower = |v: &[String]| v.iter().map(|s| s.to_ascii_lowercase()).collect();
        Self {
            language: self.language.as_ref().map(|s| s.to_ascii_lowercase()),
            extlangs: lower(&self.extlangs),
            script: self.script.as_deref().map(title_case),
            region: self.region.as_ref().map(|s| s.to_ascii_uppercase()),
            variants: lower(&self.variants),
            extensions: self
                .extensions
                .iter()
                .map(|e| Extension {
                    singleton: e.singleton.to_ascii_lowercase(),
                    subtags: lower(&e.subtags),
                })
                .collect(),
            private_use: lower(&self.private_use),
            grandfathered: self.grandfathered.as_ref().map(|g| {
                GRANDFATHERED
                    .iter()
                    .find(|r| r.eq_ignore_ascii_case(g))
                    .map_or_else(|| g.clone(), |r| (*r).to_string())
            }),
        }
    }
}

fn parse_private_use(x: &Subtag<'_>, rest: Vec<&str>) -> Result<Vec<String>, TagParseError> {
    if rest.is_empty() {
        return Err(x.error(TagErrorReason::EmptyPrivateUse));
    }
    // Length and charset were already checked while splitting.
    Ok(rest.into_iter().map(str::to_string).collect())
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(g) = &self.grandfathered {
            return f.write_str(g);
        }
        let mut parts: Vec<&str> = Vec::new();
        parts.extend(self.language.as_deref());
        parts.extend(self.extlangs.iter().map(String::as_str));
        parts.extend(self.script.as_deref());
        parts.extend(self.region.as_deref());
        parts.extend(self.variants.iter().map(String::as_str));
        let singletons: Vec<String> = self.extensions.iter().map(|e| e.singleton.to_string()).collect();
        for (ext, singleton) in self.extensions.iter().zip(&singletons) {
            parts.push(singleton);
            parts.extend(ext.subtags.iter().map(String::as_str));
        }
        if !self.private_use.is_empty() {
            parts.push("x");
            parts.extend(self.private_use.iter().map(String::as_str));
        }
        f.write_str(&parts.join("-"))
    }
}

impl FromStr for LanguageTag {
    type Err = TagParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tag(s)
    }
}

impl Serialize for LanguageTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LanguageTag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_tag(&s).map_err(serde::de::Error::custom)
    }
}

/// Parse and normalize a language tag.
pub fn parse_tag(s: &str) -> Result<LanguageTag, TagParseError> {
    LanguageTag::parse_preserving_case(s).map(|t| t.normalize())
}

pub fn normalize_tag(tag: &LanguageTag) -> LanguageTag {
    tag.normalize()
}

/// The thirteen target language groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetGroup {
    Arabic,
    Basque,
    Catalan,
    Chinese,
    English,
    French,
    Indic,
    Indonesian,
    NigerCongo,
    Portuguese,
    Spanish,
    Vietnamese,
    Programming,
}

impl TargetGroup {
    pub const ALL: [TargetGroup; 13] = [
        Self::Arabic,
        Self::Basque,
        Self::Catalan,
        Self::Chinese,
        Self::English,
        Self::French,
        Self::Indic,
        Self::Indonesian,
        Self::NigerCongo,
        Self::Portuguese,
        Self::Spanish,
        Self::Vietnamese,
        Self::Programming,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Arabic => "arabic",
            Self::Basque => "basque",
            Self::Catalan => "catalan",
            Self::Chinese => "chinese",
            Self::English => "english",
            Self::French => "french",
            Self::Indic => "indic",
            Self::Indonesian => "indonesian",
            Self::NigerCongo => "niger_congo",
            Self::Portuguese => "portuguese",
            Self::Spanish => "spanish",
            Self::Vietnamese => "vietnamese",
            Self::Programming => "programming",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Arabic => "Arabic",
            Self::Basque => "Basque",
            Self::Catalan => "Catalan",
            Self::Chinese => "Chinese",
            Self::English => "English",
            Self::French => "French",
            Self::Indic => "Indic",
            Self::Indonesian => "Indonesian",
            Self::NigerCongo => "Niger-Congo",
            Self::Portuguese => "Portuguese",
            Self::Spanish => "Spanish",
            Self::Vietnamese => "Vietnamese",
            Self::Programming => "Programming",
        }
    }
}

impl fmt::Display for TargetGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown target group {0:?}")]
pub struct UnknownGroup(pub String);

impl FromStr for TargetGroup {
    type Err = UnknownGroup;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|g| g.id() == s)
            .ok_or_else(|| UnknownGroup(s.to_string()))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("line {line}: expected `subtag<TAB>group`")]
    Malformed { line: usize },
    #[error("line {line}: {source}")]
    Group { line: usize, source: UnknownGroup },
    #[error("line {line}: subtag {subtag:?} listed twice")]
    Duplicate { line: usize, subtag: String },
}

/// Subtag to group lookup table, loaded from `subtag<TAB>group` lines.
/// Blank lines and lines starting with `#` are ignored.
#[derive(Debug, Clone, Default)]
pub struct MembershipTable {
    members: HashMap<String, TargetGroup>,
}

static DEFAULT_TABLE: LazyLock<MembershipTable> = LazyLock::new(|| {
    MembershipTable::parse(include_str!("../data/language_groups.tsv"))
        .expect("bundled language group table is well-formed")
});

impl MembershipTable {
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let mut members = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let (subtag, group) = raw.split_once('\t').ok_or(TableError::Malformed { line })?;
            let group = group
                .trim()
                .parse()
                .map_err(|source| TableError::Group { line, source })?;
            let subtag = subtag.trim().to_ascii_lowercase();
            if members.insert(subtag.clone(), group).is_some() {
                return Err(TableError::Duplicate { line, subtag });
            }
        }
        Ok(Self { members })
    }

    /// The table shipped with the crate.
    pub fn bundled() -> &'static MembershipTable {
        &DEFAULT_TABLE
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Looks at the extlang first (so `zh-yue` and `ar-arz` resolve through
    /// the specific variety), then the primary language subtag.
    pub fn group_of(&self, tag: &LanguageTag) -> Option<TargetGroup> {
        if tag.language().is_none() {
            let pu = tag.private_use();
            return (pu.len() >= 2 && pu[0].eq_ignore_ascii_case("code")).then_some(TargetGroup::Programming);
        }
        tag.extlangs()
            .first()
            .and_then(|e| self.members.get(&e.to_ascii_lowercase()))
            .or_else(|| {
                tag.language()
                    .and_then(|l| self.members.get(&l.to_ascii_lowercase()))
            })
            .copied()
    }
}

/// [`MembershipTable::group_of`] on the bundled table.
pub fn group_of(tag: &LanguageTag) -> Option<TargetGroup> {
    MembershipTable::bundled().group_of(tag)
}
