//! An independent BCP-47 well-formedness oracle: the RFC 5646 grammar
//! transcribed into one anchored regular expression, plus generators for
//! well-formed and malformed tags.

#![allow(dead_code)]

use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::Rng;
use regex::Regex;

pub const GRANDFATHERED: &[&str] = &[
    "en-GB-oed", "i-ami", "i-bnn", "i-default", "i-enochian", "i-hak", "i-klingon", "i-lux", "i-mingo",
    "i-navajo", "i-pwn", "i-tao", "i-tay", "i-tsu", "sgn-BE-FR", "sgn-BE-NL", "sgn-CH-DE", "art-lojban",
    "cel-gaulish", "no-bok", "no-nyn", "zh-guoyu", "zh-hakka", "zh-min", "zh-min-nan", "zh-xiang",
];

fn grammar() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        let alnum = "[a-z0-9]";
        let language = r"(?:[a-z]{2,3}(?:-[a-z]{3}(?:-[a-z]{3}){0,2})?|[a-z]{4}|[a-z]{5,8})";
        let script = "[a-z]{4}";
        let region = "(?:[a-z]{2}|[0-9]{3})";
        let variant = format!("(?:{alnum}{{5,8}}|[0-9]{alnum}{{3}})");
        let extension = format!("(?:[0-9a-wyz](?:-{alnum}{{2,8}})+)");
        let privateuse = format!("(?:x(?:-{alnum}{{1,8}})+)");
        let langtag = format!(
            "{language}(?:-{script})?(?:-{region})?(?:-{variant})*(?:-{extension})*(?:-{privateuse})?"
        );
        let grandfathered = GRANDFATHERED.iter().map(|g| regex::escape(g)).collect::<Vec<_>>().join("|");
        Regex::new(&format!("(?i)^(?:{langtag}|{privateuse}|{grandfathered})$")).unwrap()
    })
}

pub fn is_well_formed(s: &str) -> bool {
    s.is_ascii() && grammar().is_match(s)
}

fn letters<R: Rng>(rng: &mut R, len: std::ops::RangeInclusive<usize>) -> String {
    let n = rng.gen_range(len);
    (0..n)
        .map(|_| {
            let c = rng.gen_range(b'a'..=b'z') as char;
            if rng.gen_bool(0.2) { c.to_ascii_uppercase() } else { c }
        })
        .collect()
}

fn digits<R: Rng>(rng: &mut R, len: std::ops::RangeInclusive<usize>) -> String {
    let n = rng.gen_range(len);
    (0..n).map(|_| rng.gen_range(b'0'..=b'9') as char).collect()
}

fn alnums<R: Rng>(rng: &mut R, len: std::ops::RangeInclusive<usize>) -> String {
    let n = rng.gen_range(len);
    (0..n)
        .map(|_| if rng.gen_bool(0.7) { letters(rng, 1..=1) } else { digits(rng, 1..=1) })
        .collect()
}

/// A random tag that the grammar accepts.
pub fn well_formed<R: Rng>(rng: &mut R) -> String {
    match rng.gen_range(0..20) {
        0 => return GRANDFATHERED.choose(rng).unwrap().to_string(),
        1 => {
            let n = rng.gen_range(1..4);
            let parts: Vec<String> = (0..n).map(|_| alnums(rng, 1..=8)).collect();
            return format!("x-{}", parts.join("-"));
        }
        _ => {}
    }
    let mut parts = Vec::new();
    match rng.gen_range(0..10) {
        0 => parts.push(letters(rng, 4..=4)),
        1 => parts.push(letters(rng, 5..=8)),
        _ => {
            parts.push(letters(rng, 2..=3));
            if rng.gen_bool(0.15) {
                for _ in 0..rng.gen_range(1..=3) {
                    parts.push(letters(rng, 3..=3));
                }
            }
        }
    }
    if rng.gen_bool(0.3) {
        parts.push(letters(rng, 4..=4));
    }
    if rng.gen_bool(0.4) {
        parts.push(if rng.gen_bool(0.7) { letters(rng, 2..=2) } else { digits(rng, 3..=3) });
    }
    for _ in 0..rng.gen_range(0..3) {
        parts.push(if rng.gen_bool(0.5) {
            alnums(rng, 5..=8)
        } else {
            digits(rng, 1..=1) + &alnums(rng, 3..=3)
        });
    }
    for _ in 0..rng.gen_range(0..3) {
        let singleton = *b"0123456789abcdefghijklmnopqrstuvwyz".choose(rng).unwrap() as char;
        parts.push(singleton.to_string());
        for _ in 0..rng.gen_range(1..3) {
            parts.push(alnums(rng, 2..=8));
        }
    }
    if rng.gen_bool(0.2) {
        parts.push("x".into());
        for _ in 0..rng.gen_range(1..3) {
            parts.push(alnums(rng, 1..=8));
        }
    }
    parts.join("-")
}

/// A random string derived from a well-formed tag by a small corruption.
/// Most results are malformed; callers filter with [`is_well_formed`].
pub fn corrupted<R: Rng>(rng: &mut R) -> String {
    let base = well_formed(rng);
    let mut parts: Vec<String> = base.split('-').map(str::to_string).collect();
    match rng.gen_range(0..9) {
        0 => format!("{base}-"),
        1 => format!("-{base}"),
        2 => base.replacen('-', "--", 1),
        3 => base.replacen('-', "_", 1),
        4 => {
            let i = rng.gen_range(0..parts.len());
            parts[i] = alnums(rng, 9..=12);
            parts.join("-")
        }
        5 => format!("{base}-{}", ['a', 'u', 't', '1'].choose(rng).unwrap()),
        6 => {
            let i = rng.gen_range(0..parts.len());
            parts[i].push(*['é', ' ', '!', '.', '*'].choose(rng).unwrap());
            parts.join("-")
        }
        7 => format!("{}-{base}", digits(rng, 1..=3)),
        _ => format!("{base}-x"),
    }
}

/// A random string the grammar rejects.
pub fn malformed<R: Rng>(rng: &mut R) -> String {
    loop {
        let s = corrupted(rng);
        if !is_well_formed(&s) {
            return s;
        }
    }
}

/// Hand-picked tags on both sides of the grammar.
pub const ACCEPTED: &[&str] = &[
    "en", "fr-FR", "zh-Hant-TW", "zh-yue", "ar-arz", "sr-Latn-RS", "de-CH-1996", "es-419", "x-code-python",
    "en-x-code-rust", "qaa", "tlh", "en-US-u-ca-gregory", "en-a-bbb-x-a-ccc", "sl-rozaj-biske", "hy-Latn-IT-arevela",
    "i-klingon", "zh-min-nan", "EN-gb-OED", "x-whatever", "abcd", "abcdefgh", "en-US-x-twain",
];

pub const REJECTED: &[&str] = &[
    "", "-", "e", "en-", "-en", "en--US", "en_US", "abcdefghi", "en-US-", "x", "x-", "en-x", "en-a", "en-a-x-b",
    "1en", "en-123456789", "en-ü", "zh-Hant-TW-", "en US", "en-a-b", "i-notgrandfathered",
];
