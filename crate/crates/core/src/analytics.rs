//! Distributions over a catalogue snapshot, and their CSV, markdown and
//! JSON renderings.
//!
//! Every function here is a pure function of the snapshot and counts only
//! latest versions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geo::{first_location_macroarea, Gazetteer, GeoLocation, Macroarea};
use crate::langtag::{group_of, TargetGroup};
use crate::schema::{to_canonical_bytes, CustodianType, LicenseProperty, ResourceType};
use crate::store::{CatalogueSnapshot, PiiAnswer};

/// Key of the row that collects entries without an answer.
pub const MISSING: &str = "missing";
/// Key of the row for languages outside the target groups.
pub const OTHER: &str = "other";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DenominatorKind {
    Entries,
    TagOccurrences,
    Custodians,
    LicenseMentions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PercentStyle {
    /// Whole percent, halves rounded up: 98/192 is 51%.
    Integer,
    /// Hundredths of a percent, halves rounded up: 18/192 is 9.38%.
    TwoDecimals,
}

/// Round-half-up of `count / denominator * scale`.
fn scaled(count: u64, denominator: u64, scale: u64) -> u64 {
    let (c, d, s) = (u128::from(count), u128::from(denominator), u128::from(scale));
    ((2 * s * c + d) / (2 * d)) as u64
}

/// Format `count / denominator` as a percent string.
pub fn format_percent(count: u64, denominator: u64, style: PercentStyle) -> String {
    if denominator == 0 {
        return String::new();
    }
    match style {
        PercentStyle::Integer => format!("{}%", scaled(count, denominator, 100)),
        PercentStyle::TwoDecimals => {
            let h = scaled(count, denominator, 10_000);
            format!("{}.{:02}%", h / 100, h % 100)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub key: String,
    pub label: String,
    pub count: u64,
}

impl Row {
    fn new(key: impl Into<String>, label: impl Into<String>, count: u64) -> Self {
        Self { key: key.into(), label: label.into(), count }
    }
}

/// Labelled counts over a common denominator. An empty snapshot yields no
/// rows and a zero denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    pub table: Table,
    pub rows: Vec<Row>,
    pub denominator: u64,
    pub denominator_kind: DenominatorKind,
    pub style: PercentStyle,
}

impl Distribution {
    fn new(table: Table, rows: Vec<Row>, denominator: u64, style: PercentStyle) -> Self {
        let rows = if denominator == 0 { Vec::new() } else { rows };
        Self { table, rows, denominator, denominator_kind: DenominatorKind::Entries, style }
    }

    pub fn count(&self, key: &str) -> Option<u64> {
        self.rows.iter().find(|r| r.key == key).map(|r| r.count)
    }

    /// The exact share of a row as (count, denominator).
    pub fn ratio(&self, key: &str) -> Option<(u64, u64)> {
        self.count(key).map(|c| (c, self.denominator))
    }

    pub fn percent(&self, row: &Row) -> String {
        format_percent(row.count, self.denominator, self.style)
    }

    /// CSV with a `key,label,count,percent` header.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["key", "label", "count", "percent"]).expect("writing to memory");
        for r in &self.rows {
            w.write_record([r.key.as_str(), &r.label, &r.count.to_string(), &self.percent(r)])
                .expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is UTF-8")
    }

    /// A markdown table with padded columns; counts and percents are
    /// right-aligned.
    pub fn to_markdown(&self) -> String {
        let header = [self.table.label_heading(), "Count", "Percent"];
        let body: Vec<[String; 3]> = self
            .rows
            .iter()
            .map(|r| [r.label.clone(), r.count.to_string(), self.percent(r)])
            .collect();
        let mut widths = header.map(|h| h.chars().count());
        for row in &body {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count()).max(3);
            }
        }
        let pad = |s: &str, w: usize, right: bool| {
            let fill = " ".repeat(w - s.chars().count());
            if right { format!("{fill}{s}") } else { format!("{s}{fill}") }
        };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "| {} | {} | {} |",
            pad(header[0], widths[0], false),
            pad(header[1], widths[1], true),
            pad(header[2], widths[2], true)
        );
        let _ = writeln!(
            out,
            "| :{} | {}: | {}: |",
            "-".repeat(widths[0] - 1),
            "-".repeat(widths[1] - 1),
            "-".repeat(widths[2] - 1)
        );
        for [label, count, pct] in &body {
            let _ = writeln!(
                out,
                "| {} | {} | {} |",
                pad(label, widths[0], false),
                pad(count, widths[1], true),
                pad(pct, widths[2], true)
            );
        }
        out
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(DistributionJson::from(self)).expect("distribution serializes")
    }

    /// Canonical JSON bytes.
    pub fn to_json(&self) -> Vec<u8> {
        to_canonical_bytes(&DistributionJson::from(self))
    }
}

#[derive(Serialize)]
struct DistributionJson<'a> {
    table: Table,
    denominator: u64,
    denominator_kind: DenominatorKind,
    percent_style: PercentStyle,
    rows: Vec<RowJson<'a>>,
}

#[derive(Serialize)]
struct RowJson<'a> {
    key: &'a str,
    label: &'a str,
    count: u64,
    percent: String,
}

impl<'a> From<&'a Distribution> for DistributionJson<'a> {
    fn from(d: &'a Distribution) -> Self {
        Self {
            table: d.table,
            denominator: d.denominator,
            denominator_kind: d.denominator_kind,
            percent_style: d.style,
            rows: d
                .rows
                .iter()
                .map(|r| RowJson { key: &r.key, label: &r.label, count: r.count, percent: d.percent(r) })
                .collect(),
        }
    }
}

/// The available reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Table {
    Types,
    Languages,
    FirstLocations,
    LanguageRegions,
    CustodianTypes,
    CustodianLocations,
    Licenses,
    Pii,
    Singletons,
}

impl Table {
    pub const ALL: [Table; 9] = [
        Self::Types,
        Self::Languages,
        Self::FirstLocations,
        Self::LanguageRegions,
        Self::CustodianTypes,
        Self::CustodianLocations,
        Self::Licenses,
        Self::Pii,
        Self::Singletons,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Types => "types",
            Self::Languages => "languages",
            Self::FirstLocations => "first-locations",
            Self::LanguageRegions => "language-regions",
            Self::CustodianTypes => "custodian-types",
            Self::CustodianLocations => "custodian-locations",
            Self::Licenses => "licenses",
            Self::Pii => "pii",
            Self::Singletons => "singletons",
        }
    }

    fn label_heading(self) -> &'static str {
        match self {
            Self::Types => "Resource type",
            Self::Languages => "Language group",
            Self::FirstLocations | Self::LanguageRegions => "Location",
            Self::CustodianTypes => "Custodian type",
            Self::CustodianLocations => "Custodian location",
            Self::Licenses => "License property",
            Self::Pii => "Contains PII",
            Self::Singletons => "Language tag",
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown report table {0:?}")]
pub struct UnknownTable(pub String);

impl FromStr for Table {
    type Err = UnknownTable;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "locations" {
            return Ok(Self::FirstLocations);
        }
        Self::ALL
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| UnknownTable(s.to_string()))
    }
}

/// Entry counts per resource type.
pub fn type_distribution(snap: &CatalogueSnapshot) -> Distribution {
    let order = [ResourceType::PrimarySource, ResourceType::ProcessedDataset, ResourceType::Organization];
    let mut counts = [0u64; 3];
    for e in snap.entries() {
        counts[order.iter().position(|t| *t == e.rtype).expect("all types listed")] += 1;
    }
    let rows = order
        .iter()
        .zip(counts)
        .map(|(t, c)| Row::new(t.id(), t.label(), c))
        .collect();
    Distribution::new(Table::Types, rows, snap.len() as u64, PercentStyle::Integer)
}

/// Entries per target group, each entry counted once per distinct group.
/// `other` counts entries with at least one language outside every group.
pub fn language_group_distribution(snap: &CatalogueSnapshot) -> Distribution {
    let mut counts: BTreeMap<TargetGroup, u64> = BTreeMap::new();
    let mut other = 0;
    for e in snap.entries() {
        for g in e.groups() {
            *counts.entry(g).or_default() += 1;
        }
        if e.languages.iter().any(|l| l.effective_group().is_none()) {
            other += 1;
        }
    }
    let mut rows: Vec<Row> = TargetGroup::ALL
        .iter()
        .map(|g| Row::new(g.id(), g.label(), counts.get(g).copied().unwrap_or(0)))
        .collect();
    rows.push(Row::new(OTHER, "Other", other));
    Distribution::new(Table::Languages, rows, snap.len() as u64, PercentStyle::TwoDecimals)
}

fn macroarea_rows(counts: &BTreeMap<Macroarea, u64>) -> Vec<Row> {
    Macroarea::ALL
        .iter()
        .map(|m| Row::new(m.id(), m.label(), counts.get(m).copied().unwrap_or(0)))
        .collect()
}

/// Macroarea of each entry's first location.
pub fn first_location_distribution(snap: &CatalogueSnapshot) -> Distribution {
    let mut counts = BTreeMap::new();
    let mut missing = 0;
    for e in snap.entries() {
        match first_location_macroarea(e) {
            Some(m) => *counts.entry(m).or_default() += 1,
            None => missing += 1,
        }
    }
    let mut rows = macroarea_rows(&counts);
    rows.push(Row::new(MISSING, "Missing", missing));
    Distribution::new(Table::FirstLocations, rows, snap.len() as u64, PercentStyle::TwoDecimals)
}

/// For entries in `group`: each distinct macroarea over all locations.
/// The denominator is the number of entries in the group.
pub fn language_by_region(snap: &CatalogueSnapshot, group: TargetGroup) -> Distribution {
    let mut counts = BTreeMap::new();
    let mut n = 0;
    for e in snap.entries().filter(|e| e.groups().contains(&group)) {
        n += 1;
        let areas: BTreeSet<Macroarea> = e.locations.iter().filter_map(|l| l.macroarea).collect();
        for m in areas {
            *counts.entry(m).or_default() += 1;
        }
    }
    Distribution::new(Table::LanguageRegions, macroarea_rows(&counts), n, PercentStyle::TwoDecimals)
}

/// Custodian type per entry, following organization links one hop.
/// Entries without a type (or without a custodian) count as missing.
pub fn custodian_type_distribution(snap: &CatalogueSnapshot) -> Distribution {
    let mut counts: BTreeMap<CustodianType, u64> = BTreeMap::new();
    let mut missing = 0;
    for e in snap.entries() {
        match snap.custodian_view(e).ctype {
            Some(t) => *counts.entry(t).or_default() += 1,
            None => missing += 1,
        }
    }
    let mut rows: Vec<Row> = CustodianType::ALL
        .iter()
        .map(|t| Row::new(t.id(), t.label(), counts.get(t).copied().unwrap_or(0)))
        .collect();
    rows.push(Row::new(MISSING, "Missing", missing));
    Distribution::new(Table::CustodianTypes, rows, snap.len() as u64, PercentStyle::TwoDecimals)
}

/// Grouping key and display label of a custodian location: the country
/// when one is known, otherwise the trimmed raw text.
pub fn custodian_location_key(loc: &GeoLocation) -> (String, String) {
    match &loc.country_code {
        Some(code) => {
            let name = Gazetteer::bundled().country_name(code).unwrap_or(code).to_string();
            (code.clone(), name)
        }
        None => {
            let raw = loc.raw.trim().to_string();
            (raw.clone(), raw)
        }
    }
}

/// The `n` most frequent custodian locations, ties broken by label
/// ascending, followed by the count of entries without one.
pub fn custodian_location_top(snap: &CatalogueSnapshot, n: usize) -> Distribution {
    let mut counts: BTreeMap<String, (String, u64)> = BTreeMap::new();
    let mut missing = 0;
    for e in snap.entries() {
        match snap.custodian_view(e).location.filter(|l| !l.raw.trim().is_empty()) {
            Some(loc) => {
                let (key, label) = custodian_location_key(loc);
                counts.entry(key).or_insert((label, 0)).1 += 1;
            }
            None => missing += 1,
        }
    }
    let mut ranked: Vec<Row> = counts.into_iter().map(|(k, (l, c))| Row::new(k, l, c)).collect();
    ranked.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.label.cmp(&b.label)).then_with(|| a.key.cmp(&b.key)));
    ranked.truncate(n.max(1));
    ranked.push(Row::new(MISSING, "Missing", missing));
    Distribution::new(Table::CustodianLocations, ranked, snap.len() as u64, PercentStyle::TwoDecimals)
}

/// License properties over entries with an availability section; each
/// property counted once per entry, empty property sets as missing.
pub fn license_property_distribution(snap: &CatalogueSnapshot) -> Distribution {
    let mut counts: BTreeMap<LicenseProperty, u64> = BTreeMap::new();
    let mut missing = 0;
    let mut n = 0;
    for a in snap.entries().filter_map(|e| e.availability.as_ref()) {
        n += 1;
        if a.license.properties.is_empty() {
            missing += 1;
        }
        for &p in &a.license.properties {
            *counts.entry(p).or_default() += 1;
        }
    }
    let mut rows = vec![Row::new(MISSING, "Missing", missing)];
    rows.extend(
        LicenseProperty::ALL
            .iter()
            .map(|p| Row::new(p.id(), p.label(), counts.get(p).copied().unwrap_or(0))),
    );
    Distribution::new(Table::Licenses, rows, n, PercentStyle::Integer)
}

/// The PII answer of entries with an availability section.
pub fn pii_distribution(snap: &CatalogueSnapshot) -> Distribution {
    let mut counts: BTreeMap<PiiAnswer, u64> = BTreeMap::new();
    let mut n = 0;
    for a in snap.entries().filter_map(|e| e.availability.as_ref()) {
        n += 1;
        *counts.entry(PiiAnswer::of(&a.pii)).or_default() += 1;
    }
    let rows = PiiAnswer::ALL
        .iter()
        .map(|p| Row::new(p.id(), p.label(), counts.get(p).copied().unwrap_or(0)))
        .collect();
    Distribution::new(Table::Pii, rows, n, PercentStyle::Integer)
}

/// Language tags used by at most two entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingletonLanguages {
    /// Tag to number of entries using it.
    pub tags: BTreeMap<String, u64>,
    pub count: usize,
    /// Distinct tags in the whole catalogue.
    pub distinct_tags: usize,
}

impl SingletonLanguages {
    /// Rows per tag over the number of distinct tags.
    pub fn to_distribution(&self) -> Distribution {
        let rows = self.tags.iter().map(|(t, c)| Row::new(t.clone(), t.clone(), *c)).collect();
        let mut d = Distribution::new(Table::Singletons, rows, self.distinct_tags as u64, PercentStyle::TwoDecimals);
        d.denominator_kind = DenominatorKind::TagOccurrences;
        d
    }
}

/// Tags occurring in one or two entries. With `exclude_target_group_members`
/// tags that belong to a target group are dropped.
pub fn singleton_languages(snap: &CatalogueSnapshot, exclude_target_group_members: bool) -> SingletonLanguages {
    let mut per_tag: BTreeMap<String, u64> = BTreeMap::new();
    let mut groups = BTreeMap::new();
    for e in snap.entries() {
        let tags: BTreeMap<String, _> = e
            .languages
            .iter()
            .filter_map(|l| l.tag.as_ref())
            .map(|t| (t.to_string(), t))
            .collect();
        for (s, t) in tags {
            groups.entry(s.clone()).or_insert_with(|| group_of(t));
            *per_tag.entry(s).or_default() += 1;
        }
    }
    let distinct_tags = per_tag.len();
    let tags: BTreeMap<String, u64> = per_tag
        .into_iter()
        .filter(|(_, c)| *c <= 2)
        .filter(|(t, _)| !exclude_target_group_members || groups[t].is_none())
        .collect();
    SingletonLanguages { count: tags.len(), tags, distinct_tags }
}

/// Parameters of the parameterized reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReportParams {
    pub group: TargetGroup,
    pub top: usize,
    pub exclude_target_groups: bool,
}

impl Default for ReportParams {
    fn default() -> Self {
        Self { group: TargetGroup::English, top: 12, exclude_target_groups: false }
    }
}

/// Compute any report as a distribution.
pub fn report(snap: &CatalogueSnapshot, table: Table, params: &ReportParams) -> Distribution {
    match table {
        Table::Types => type_distribution(snap),
        Table::Languages => language_group_distribution(snap),
        Table::FirstLocations => first_location_distribution(snap),
        Table::LanguageRegions => language_by_region(snap, params.group),
        Table::CustodianTypes => custodian_type_distribution(snap),
        Table::CustodianLocations => custodian_location_top(snap, params.top),
        Table::Licenses => license_property_distribution(snap),
        Table::Pii => pii_distribution(snap),
        Table::Singletons => singleton_languages(snap, params.exclude_target_groups).to_distribution(),
    }
}
