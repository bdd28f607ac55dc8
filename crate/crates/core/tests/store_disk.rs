use std::fs::{self, OpenOptions};
use std::io::Write;
use std::sync::Arc;
use std::thread;

use catalogue_core::schema::Person;
use catalogue_core::store::{Store, StoreError};
use catalogue_core::testing::{org_entry, random_catalogue, submitter};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn filled(store: &Store, seed: u64, n: usize) {
    let mut rng = StdRng::seed_from_u64(seed);
    for e in random_catalogue(&mut rng, n) {
        store.save_entry(&e, &submitter()).unwrap();
    }
}

#[test]
fn reopening_restores_everything() {
    let dir = tempfile::tempdir().unwrap();
    let (export, versions) = {
        let store = Store::open(dir.path()).unwrap();
        filled(&store, 1, 40);
        let mut e = org_entry("extra-org");
        store.save_entry(&e, &submitter()).unwrap();
        e.general.description = "Second revision.".into();
        store.save_entry(&e, &Person::new("Grace Reviewer", "grace@example.org")).unwrap();
        (store.export_catalogue(), store.list_versions("extra-org").unwrap())
    };
    let store = Store::open(dir.path()).unwrap();
    assert_eq!(store.export_catalogue(), export);
    let reloaded = store.list_versions("extra-org").unwrap();
    assert_eq!(reloaded, versions);
    assert_eq!(reloaded[1].author.email, "grace@example.org");
    assert_eq!(store.latest("extra-org").unwrap().1.general.description, "Second revision.");
}

#[test]
fn torn_trailing_line_is_dropped() {
    let dir = tempfile::tempdir().unwrap();
    {
        let store = Store::open(dir.path()).unwrap();
        store.save_entry(&org_entry("some-org"), &submitter()).unwrap();
    }
    let index = dir.path().join("entries/some-org/index.jsonl");
    OpenOptions::new().append(true).open(&index).unwrap().write_all(b"{\"version_no\":2,\"sav").unwrap();
    let store = Store::open(dir.path()).unwrap();
    assert_eq!(store.list_versions("some-org").unwrap().len(), 1);
    let out = store.save_entry(&org_entry("some-org"), &submitter()).unwrap();
    assert_eq!(out.version_no, 2);
    drop(store);
    let store = Store::open(dir.path()).unwrap();
    assert_eq!(store.list_versions("some-org").unwrap().len(), 2);
}

#[test]
fn gaps_in_the_index_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    {
        let store = Store::open(dir.path()).unwrap();
        store.save_entry(&org_entry("some-org"), &submitter()).unwrap();
    }
    let index = dir.path().join("entries/some-org/index.jsonl");
    let text = fs::read_to_string(&index).unwrap().replace("\"version_no\":1", "\"version_no\":3");
    fs::write(&index, text).unwrap();
    let err = Store::open(dir.path()).unwrap_err();
    assert!(matches!(err, StoreError::Corrupt { .. }), "{err}");
    assert_eq!(err.kind(), "storage-io");
}

#[test]
fn export_import_export_is_identity() {
    let a = Store::in_memory();
    filled(&a, 2, 50);
    let first = a.export_catalogue();
    let dir = tempfile::tempdir().unwrap();
    let b = Store::open(dir.path()).unwrap();
    let report = b.import_json(&first).unwrap();
    assert!(report.errors.is_empty(), "{:?}", report.errors);
    assert_eq!(report.saved.len(), 50);
    assert_eq!(b.export_catalogue(), first);
    assert_eq!(Store::open(dir.path()).unwrap().export_catalogue(), first);
}

#[test]
fn concurrent_saves_to_one_uid_get_distinct_versions() {
    let dir = tempfile::tempdir().unwrap();
    let store = Arc::new(Store::open(dir.path()).unwrap());
    let handles: Vec<_> = (0..8)
        .map(|t| {
            let store = store.clone();
            thread::spawn(move || {
                let mut e = org_entry("shared-org");
                (0..10)
                    .map(|i| {
                        e.general.description = format!("writer {t} save {i}");
                        store.save_entry(&e, &submitter()).unwrap().version_no
                    })
                    .collect::<Vec<_>>()
            })
        })
        .collect();
    let mut numbers: Vec<u32> = handles.into_iter().flat_map(|h| h.join().unwrap()).collect();
    numbers.sort_unstable();
    assert_eq!(numbers, (1..=80).collect::<Vec<_>>());
    let versions = store.list_versions("shared-org").unwrap();
    assert!(versions.windows(2).all(|w| w[0].saved_at <= w[1].saved_at));
    drop(store);
    assert_eq!(Store::open(dir.path()).unwrap().list_versions("shared-org").unwrap().len(), 80);
}

#[test]
fn readers_see_whole_versions_during_writes() {
    let store = Arc::new(Store::in_memory());
    store.save_entry(&org_entry("busy-org"), &submitter()).unwrap();
    let writer = {
        let store = store.clone();
        thread::spawn(move || {
            let mut e = org_entry("busy-org");
            for i in 0..200 {
                e.general.description = format!("revision {i}");
                store.save_entry(&e, &submitter()).unwrap();
            }
        })
    };
    let mut last = 0;
    while !writer.is_finished() {
        let snap = store.snapshot();
        let v = snap.latest_version("busy-org").unwrap();
        let from_payload = catalogue_core::schema::entry_from_json(&v.payload).unwrap();
        assert_eq!(&from_payload, snap.get("busy-org").unwrap());
        assert!(v.version_no >= last);
        last = v.version_no;
    }
    writer.join().unwrap();
    assert_eq!(store.list_versions("busy-org").unwrap().len(), 201);
}

#[test]
fn interleaved_saves_across_uids() {
    let dir = tempfile::tempdir().unwrap();
    let store = Arc::new(Store::open(dir.path()).unwrap());
    let handles: Vec<_> = (0..6)
        .map(|t| {
            let store = store.clone();
            thread::spawn(move || {
                for i in 0..5 {
                    let mut e = org_entry(&format!("org-{}", (t + i) % 4));
                    e.general.name = format!("Org {t}/{i}");
                    store.save_entry(&e, &submitter()).unwrap();
                }
            })
        })
        .collect();
    for h in handles {
        h.join().unwrap();
    }
    let total: usize = store.uids().iter().map(|u| store.list_versions(u).unwrap().len()).sum();
    assert_eq!(total, 30);
    let reopened = Store::open(dir.path()).unwrap();
    assert_eq!(reopened.export_catalogue(), store.export_catalogue());
}
