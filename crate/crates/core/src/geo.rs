//! Mixed-granularity locations and their macroarea assignment.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::schema::CatalogueEntry;

/// Coarse geographic buckets used by the location reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Macroarea {
    Africa,
    /// "Americas" without saying North or Latin America.
    AmericasUnspecified,
    Asia,
    Europe,
    LatinAmericaCaribbean,
    MiddleEastNorthAfrica,
    NorthAfrica,
    NorthAmerica,
    Oceania,
    WorldWide,
}

impl Macroarea {
    pub const ALL: [Macroarea; 10] = [
        Self::Africa,
        Self::AmericasUnspecified,
        Self::Asia,
        Self::Europe,
        Self::LatinAmericaCaribbean,
        Self::MiddleEastNorthAfrica,
        Self::NorthAfrica,
        Self::NorthAmerica,
        Self::Oceania,
        Self::WorldWide,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Africa => "africa",
            Self::AmericasUnspecified => "americas_unspecified",
            Self::Asia => "asia",
            Self::Europe => "europe",
            Self::LatinAmericaCaribbean => "latin_america_caribbean",
            Self::MiddleEastNorthAfrica => "middle_east_north_africa",
            Self::NorthAfrica => "north_africa",
            Self::NorthAmerica => "north_america",
            Self::Oceania => "oceania",
            Self::WorldWide => "world_wide",
        }
    }

    /// Row label as printed in location reports.
    pub fn label(self) -> &'static str {
        match self {
            Self::Africa => "Africa",
            Self::AmericasUnspecified => "Americas",
            Self::Asia => "Asia",
            Self::Europe => "Europe",
            Self::LatinAmericaCaribbean => "Latin America and the Caribbean",
            Self::MiddleEastNorthAfrica => "Middle East and North Africa",
            Self::NorthAfrica => "North Africa",
            Self::NorthAmerica => "North America",
            Self::Oceania => "Oceania",
            Self::WorldWide => "World-wide",
        }
    }
}

impl fmt::Display for Macroarea {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown macroarea {0:?}")]
pub struct UnknownMacroarea(pub String);

impl FromStr for Macroarea {
    type Err = UnknownMacroarea;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| UnknownMacroarea(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocationLevel {
    Worldwide,
    Macroarea,
    Country,
    Region,
}

impl FromStr for LocationLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "worldwide" => Ok(Self::Worldwide),
            "macroarea" => Ok(Self::Macroarea),
            "country" => Ok(Self::Country),
            "region" => Ok(Self::Region),
            other => Err(format!("unknown location level {other:?}")),
        }
    }
}

/// A place as submitted, plus what the gazetteer made of it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeoLocation {
    pub raw: String,
    pub level: LocationLevel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub macroarea: Option<Macroarea>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub country_code: Option<String>,
}

impl GeoLocation {
    /// True when the level-dependent invariants hold: countries carry a
    /// country code and the worldwide level carries the world-wide area.
    pub fn is_consistent(&self) -> bool {
        match self.level {
            LocationLevel::Country => self.country_code.is_some(),
            LocationLevel::Worldwide => self.macroarea == Some(Macroarea::WorldWide),
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct GazetteerRecord {
    name: String,
    level: LocationLevel,
    country_code: Option<String>,
    macroarea: Macroarea,
}

#[derive(Debug, thiserror::Error)]
pub enum GazetteerError {
    #[error("line {line}: expected 4 tab-separated columns")]
    Columns { line: usize },
    #[error("line {line}: {message}")]
    Value { line: usize, message: String },
    #[error("line {line}: name {name:?} listed twice")]
    Duplicate { line: usize, name: String },
}

/// Name lookup table backing the location drop-down.
///
/// Matching is exact up to ASCII case and surrounding whitespace.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    records: Vec<GazetteerRecord>,
    by_name: HashMap<String, usize>,
    country_names: HashMap<String, usize>,
}

static BUNDLED: LazyLock<Gazetteer> = LazyLock::new(|| {
    Gazetteer::parse(include_str!("../data/gazetteer.tsv")).expect("bundled gazetteer is well-formed")
});

fn fold(name: &str) -> String {
    name.trim().to_lowercase()
}

impl Gazetteer {
    /// Parse `name<TAB>level<TAB>country_code?<TAB>macroarea` lines. Blank
    /// lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, GazetteerError> {
        let mut gz = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').collect();
            let [name, level, code, area] = cols[..] else {
                return Err(GazetteerError::Columns { line });
            };
            let value_err = |message: String| GazetteerError::Value { line, message };
            let level: LocationLevel = level.parse().map_err(value_err)?;
            let macroarea: Macroarea = area.parse().map_err(|e: UnknownMacroarea| value_err(e.to_string()))?;
            let country_code = (!code.is_empty()).then(|| code.to_ascii_uppercase());
            if level == LocationLevel::Country && country_code.is_none() {
                return Err(value_err("country rows need a country code".into()));
            }
            let key = fold(name);
            if gz.by_name.contains_key(&key) {
                return Err(GazetteerError::Duplicate { line, name: name.to_string() });
            }
            let idx = gz.records.len();
            if level == LocationLevel::Country {
                gz.country_names
                    .entry(country_code.clone().unwrap())
                    .or_insert(idx);
            }
            gz.by_name.insert(key, idx);
            gz.records.push(GazetteerRecord {
                name: name.to_string(),
                level,
                country_code,
                macroarea,
            });
        }
        Ok(gz)
    }

    pub fn bundled() -> &'static Gazetteer {
        &BUNDLED
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Resolve a submitted place name. Unknown names become a region with no
    /// macroarea; the raw text is always kept.
    pub fn resolve(&self, raw: &str) -> GeoLocation {
        match self.by_name.get(&fold(raw)).map(|&i| &self.records[i]) {
            Some(rec) => GeoLocation {
                raw: raw.to_string(),
                level: rec.level,
                macroarea: Some(rec.macroarea),
                country_code: rec.country_code.clone(),
            },
            None => GeoLocation {
                raw: raw.to_string(),
                level: LocationLevel::Region,
                macroarea: None,
                country_code: None,
            },
        }
    }

    /// Display name of a country code (the first country row listing it).
    pub fn country_name(&self, code: &str) -> Option<&str> {
        self.country_names
            .get(&code.to_ascii_uppercase())
            .map(|&i| self.records[i].name.as_str())
    }

    /// All known names with their resolution, in file order.
    pub fn entries(&self) -> impl Iterator<Item = GeoLocation> + '_ {
        self.records.iter().map(|r| GeoLocation {
            raw: r.name.clone(),
            level: r.level,
            macroarea: Some(r.macroarea),
            country_code: r.country_code.clone(),
        })
    }
}

/// [`Gazetteer::resolve`] on the bundled gazetteer.
pub fn resolve_location(raw: &str) -> GeoLocation {
    Gazetteer::bundled().resolve(raw)
}

/// Macroarea of the first listed location; `None` when there is no location
/// or the first one did not resolve.
pub fn first_location_macroarea(entry: &CatalogueEntry) -> Option<Macroarea> {
    entry.locations.first().and_then(|l| l.macroarea)
}
