//! A brute-force recount of every report, working on the exported JSON and
//! on its own reading of the bundled data files.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use serde_json::Value;

const GROUPS_TSV: &str = include_str!("../../data/language_groups.tsv");
const GAZETTEER_TSV: &str = include_str!("../../data/gazetteer.tsv");

pub const GROUPS: [&str; 13] = [
    "arabic", "basque", "catalan", "chinese", "english", "french", "indic", "indonesian", "niger_congo",
    "portuguese", "spanish", "vietnamese", "programming",
];
pub const MACROAREAS: [&str; 10] = [
    "africa", "americas_unspecified", "asia", "europe", "latin_america_caribbean", "middle_east_north_africa",
    "north_africa", "north_america", "oceania", "world_wide",
];
pub const CUSTODIAN_TYPES: [&str; 8] = [
    "university_or_research", "commercial", "nonprofit_ngo", "private_individual", "government",
    "library_museum_archive", "community", "startup",
];
pub const LICENSE_PROPERTIES: [&str; 7] = [
    "open_license", "public_domain", "research_use", "non_commercial_use", "copyright", "multiple_licenses",
    "do_not_distribute",
];
pub const PII_ANSWERS: [&str; 5] = ["yes", "unclear", "answer_missing", "no", "yes_author_name_only"];

/// Keys, counts and denominator of one report, plus how many decimals its
/// percents carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub rows: Vec<(String, u64)>,
    pub denominator: u64,
    pub decimals: u32,
}

impl Expected {
    fn new(rows: Vec<(String, u64)>, denominator: u64, decimals: u32) -> Self {
        let rows = if denominator == 0 { Vec::new() } else { rows };
        Self { rows, denominator, decimals }
    }

    pub fn percents(&self) -> Vec<String> {
        self.rows.iter().map(|(_, c)| percent(*c, self.denominator, self.decimals)).collect()
    }
}

/// Long division with the final digit rounded half up.
pub fn percent(count: u64, denominator: u64, decimals: u32) -> String {
    if denominator == 0 {
        return String::new();
    }
    let mut scaled = count as u128 * 100;
    for _ in 0..decimals {
        scaled *= 10;
    }
    let d = denominator as u128;
    let mut q = scaled / d;
    if (scaled % d) * 2 >= d {
        q += 1;
    }
    if decimals == 0 {
        return format!("{q}%");
    }
    let unit = 10u128.pow(decimals);
    format!("{}.{:0width$}%", q / unit, q % unit, width = decimals as usize)
}

fn table_rows(text: &str) -> impl Iterator<Item = Vec<&str>> {
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split('\t').collect())
}

fn members() -> &'static HashMap<String, String> {
    static TABLE: OnceLock<HashMap<String, String>> = OnceLock::new();
    TABLE.get_or_init(|| {
        table_rows(GROUPS_TSV)
            .map(|cols| (cols[0].to_ascii_lowercase(), cols[1].to_string()))
            .collect()
    })
}

fn country_names() -> HashMap<String, String> {
    let mut out = HashMap::new();
    for cols in table_rows(GAZETTEER_TSV) {
        if cols[1] == "country" {
            out.entry(cols[2].to_ascii_uppercase()).or_insert_with(|| cols[0].to_string());
        }
    }
    out
}

const GRANDFATHERED: &[&str] = &[
    "en-gb-oed", "i-ami", "i-bnn", "i-default", "i-enochian", "i-hak", "i-klingon", "i-lux", "i-mingo",
    "i-navajo", "i-pwn", "i-tao", "i-tay", "i-tsu", "sgn-be-fr", "sgn-be-nl", "sgn-ch-de", "art-lojban",
    "cel-gaulish", "no-bok", "no-nyn", "zh-guoyu", "zh-hakka", "zh-min", "zh-min-nan", "zh-xiang",
];

/// Target group of a tag string.
pub fn group_of(tag: &str) -> Option<String> {
    let lower = tag.to_ascii_lowercase();
    if GRANDFATHERED.contains(&lower.as_str()) {
        return None;
    }
    let parts: Vec<&str> = lower.split('-').collect();
    if parts[0] == "x" {
        return (parts.len() >= 3 && parts[1] == "code").then(|| "programming".to_string());
    }
    let table = members();
    let is_extlang = |s: &&str| s.len() == 3 && s.chars().all(|c| c.is_ascii_alphabetic());
    if parts[0].len() <= 3 {
        if let Some(ext) = parts.get(1).copied().filter(is_extlang) {
            if let Some(g) = table.get(ext) {
                return Some(g.clone());
            }
        }
    }
    table.get(parts[0]).cloned()
}

fn str_at<'a>(v: &'a Value, path: &[&str]) -> Option<&'a str> {
    path.iter().try_fold(v, |v, k| v.get(k))?.as_str()
}

/// One entry's languages as (explicit group, tag) pairs.
fn effective_groups(e: &Value) -> Vec<Option<String>> {
    e["languages"]
        .as_array()
        .map(|ls| {
            ls.iter()
                .map(|l| match l.get("group").and_then(Value::as_str) {
                    Some(g) => Some(g.to_string()),
                    None => l.get("tag").and_then(Value::as_str).and_then(group_of),
                })
                .collect()
        })
        .unwrap_or_default()
}

fn groups(e: &Value) -> BTreeSet<String> {
    effective_groups(e).into_iter().flatten().collect()
}

fn fixed(keys: &[&str], counts: &BTreeMap<String, u64>) -> Vec<(String, u64)> {
    keys.iter()
        .map(|k| (k.to_string(), counts.get(*k).copied().unwrap_or(0)))
        .collect()
}

pub struct Oracle<'a> {
    entries: Vec<&'a Value>,
    by_uid: HashMap<&'a str, &'a Value>,
}

impl<'a> Oracle<'a> {
    pub fn new(export: &'a Value) -> Self {
        let entries: Vec<&Value> = export.as_array().expect("export is an array").iter().collect();
        let by_uid = entries
            .iter()
            .map(|e| (str_at(e, &["general", "uid"]).expect("uid"), *e))
            .collect();
        Self { entries, by_uid }
    }

    fn n(&self) -> u64 {
        self.entries.len() as u64
    }

    pub fn types(&self) -> Expected {
        let mut counts = BTreeMap::new();
        for e in &self.entries {
            *counts.entry(e["rtype"].as_str().unwrap().to_string()).or_default() += 1;
        }
        Expected::new(fixed(&["primary_source", "processed_dataset", "organization"], &counts), self.n(), 0)
    }

    pub fn languages(&self) -> Expected {
        let mut counts = BTreeMap::new();
        for e in &self.entries {
            for g in groups(e) {
                *counts.entry(g).or_default() += 1;
            }
            if effective_groups(e).iter().any(Option::is_none) {
                *counts.entry("other".to_string()).or_default() += 1;
            }
        }
        let mut keys = GROUPS.to_vec();
        keys.push("other");
        Expected::new(fixed(&keys, &counts), self.n(), 2)
    }

    pub fn first_locations(&self) -> Expected {
        let mut counts = BTreeMap::new();
        for e in &self.entries {
            let first = e["locations"].get(0).and_then(|l| l.get("macroarea")).and_then(Value::as_str);
            *counts.entry(first.unwrap_or("missing").to_string()).or_default() += 1;
        }
        let mut keys = MACROAREAS.to_vec();
        keys.push("missing");
        Expected::new(fixed(&keys, &counts), self.n(), 2)
    }

    pub fn language_regions(&self, group: &str) -> Expected {
        let mut counts = BTreeMap::new();
        let mut n = 0;
        for e in self.entries.iter().filter(|e| groups(e).contains(group)) {
            n += 1;
            let areas: BTreeSet<&str> = e["locations"]
                .as_array()
                .into_iter()
                .flatten()
                .filter_map(|l| l.get("macroarea").and_then(Value::as_str))
                .collect();
            for a in areas {
                *counts.entry(a.to_string()).or_default() += 1;
            }
        }
        Expected::new(fixed(&MACROAREAS, &counts), n, 2)
    }

    /// Own custodian field, else the same field of a linked organization.
    fn custodian_field(&self, e: &'a Value, field: &str) -> Option<&'a Value> {
        let c = e.get("custodian")?;
        c.get(field).or_else(|| {
            let target = self.by_uid.get(c.get("link_uid")?.as_str()?)?;
            target.get("custodian")?.get(field)
        })
    }

    pub fn custodian_types(&self) -> Expected {
        let mut counts = BTreeMap::new();
        for e in &self.entries {
            let t = self.custodian_field(e, "type").and_then(Value::as_str).unwrap_or("missing");
            *counts.entry(t.to_string()).or_default() += 1;
        }
        let mut keys = CUSTODIAN_TYPES.to_vec();
        keys.push("missing");
        Expected::new(fixed(&keys, &counts), self.n(), 2)
    }

    /// Also returns the display label of each kept row.
    pub fn custodian_locations(&self, top: usize) -> (Expected, Vec<String>) {
        let names = country_names();
        let mut counts: BTreeMap<String, (String, u64)> = BTreeMap::new();
        let mut missing = 0;
        for e in &self.entries {
            let loc = self
                .custodian_field(e, "location")
                .filter(|l| l["raw"].as_str().is_some_and(|r| !r.trim().is_empty()));
            let Some(loc) = loc else {
                missing += 1;
                continue;
            };
            let (key, label) = match loc.get("country_code").and_then(Value::as_str) {
                Some(code) => (code.to_string(), names.get(code).cloned().unwrap_or_else(|| code.to_string())),
                None => {
                    let raw = loc["raw"].as_str().unwrap().trim().to_string();
                    (raw.clone(), raw)
                }
            };
            counts.entry(key).or_insert((label, 0)).1 += 1;
        }
        let mut ranked: Vec<(String, String, u64)> = counts.into_iter().map(|(k, (l, c))| (k, l, c)).collect();
        // Most frequent first, then alphabetical by label.
        ranked.sort_by(|a, b| (std::cmp::Reverse(a.2), &a.1, &a.0).cmp(&(std::cmp::Reverse(b.2), &b.1, &b.0)));
        ranked.truncate(top.max(1));
        let mut labels: Vec<String> = ranked.iter().map(|r| r.1.clone()).collect();
        let mut rows: Vec<(String, u64)> = ranked.into_iter().map(|(k, _, c)| (k, c)).collect();
        rows.push(("missing".into(), missing));
        labels.push("Missing".into());
        let expected = Expected::new(rows, self.n(), 2);
        if expected.rows.is_empty() {
            labels.clear();
        }
        (expected, labels)
    }

    fn with_availability(&self) -> impl Iterator<Item = &'a Value> + '_ {
        self.entries.iter().filter_map(|e| e.get("availability"))
    }

    pub fn licenses(&self) -> Expected {
        let mut counts = BTreeMap::new();
        let mut n = 0;
        for a in self.with_availability() {
            n += 1;
            let props: BTreeSet<&str> = a["license"]["properties"]
                .as_array()
                .into_iter()
                .flatten()
                .filter_map(Value::as_str)
                .collect();
            if props.is_empty() {
                *counts.entry("missing".to_string()).or_default() += 1;
            }
            for p in props {
                *counts.entry(p.to_string()).or_default() += 1;
            }
        }
        let mut keys = vec!["missing"];
        keys.extend(LICENSE_PROPERTIES);
        Expected::new(fixed(&keys, &counts), n, 0)
    }

    pub fn pii(&self) -> Expected {
        let mut counts = BTreeMap::new();
        let mut n = 0;
        for a in self.with_availability() {
            n += 1;
            let answer = a["pii"].get("contains").and_then(Value::as_str).unwrap_or("answer_missing");
            *counts.entry(answer.to_string()).or_default() += 1;
        }
        Expected::new(fixed(&PII_ANSWERS, &counts), n, 0)
    }

    pub fn singletons(&self, exclude_target_groups: bool) -> Expected {
        let mut per_tag: BTreeMap<String, u64> = BTreeMap::new();
        for e in &self.entries {
            let tags: BTreeSet<&str> = e["languages"]
                .as_array()
                .into_iter()
                .flatten()
                .filter_map(|l| l.get("tag").and_then(Value::as_str))
                .collect();
            for t in tags {
                *per_tag.entry(t.to_string()).or_default() += 1;
            }
        }
        let distinct = per_tag.len() as u64;
        let rows = per_tag
            .into_iter()
            .filter(|(t, c)| *c <= 2 && !(exclude_target_groups && group_of(t).is_some()))
            .collect();
        Expected::new(rows, distinct, 2)
    }
}

/// Compare a rendered distribution (`{denominator, rows: [{key, count,
/// percent}]}`) with the recount.
pub fn check_json(what: &str, got: &Value, want: &Expected) -> Result<(), String> {
    let denominator = got["denominator"].as_u64();
    if denominator != Some(want.denominator) {
        return Err(format!("{what}: denominator {denominator:?}, expected {}", want.denominator));
    }
    let rows: Vec<(String, u64, String)> = got["rows"]
        .as_array()
        .ok_or_else(|| format!("{what}: no rows array"))?
        .iter()
        .map(|r| {
            (
                r["key"].as_str().unwrap_or_default().to_string(),
                r["count"].as_u64().unwrap_or(u64::MAX),
                r["percent"].as_str().unwrap_or_default().to_string(),
            )
        })
        .collect();
    let expected: Vec<(String, u64, String)> = want
        .rows
        .iter()
        .zip(want.percents())
        .map(|((k, c), p)| (k.clone(), *c, p))
        .collect();
    if rows != expected {
        return Err(format!("{what}: rows {rows:?}, expected {expected:?}"));
    }
    Ok(())
}

/// Every report with the parameters the service and CLI use by default,
/// keyed by the table id and query string.
pub fn all_reports(oracle: &Oracle<'_>) -> Vec<(String, Expected)> {
    let mut out = vec![
        ("types".to_string(), oracle.types()),
        ("languages".to_string(), oracle.languages()),
        ("first-locations".to_string(), oracle.first_locations()),
        ("custodian-types".to_string(), oracle.custodian_types()),
        ("custodian-locations".to_string(), oracle.custodian_locations(12).0),
        ("custodian-locations?top=3".to_string(), oracle.custodian_locations(3).0),
        ("licenses".to_string(), oracle.licenses()),
        ("pii".to_string(), oracle.pii()),
        ("singletons".to_string(), oracle.singletons(false)),
        ("singletons?exclude_target_groups=true".to_string(), oracle.singletons(true)),
    ];
    for g in GROUPS {
        out.push((format!("language-regions?group={g}"), oracle.language_regions(g)));
    }
    out
}
