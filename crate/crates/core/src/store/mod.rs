//! Append-only, versioned entry storage.
//!
//! On disk every uid gets its own directory:
//!
//! ```text
//! <data-dir>/entries/<uid>/v1.json          canonical payload of version 1
//! <data-dir>/entries/<uid>/v2.json
//! <data-dir>/entries/<uid>/index.jsonl      one line of metadata per version
//! <data-dir>/entries/<uid>/validations.jsonl
//! ```
//!
//! A version exists once its index line is written; payload files without an
//! index line are ignored on load. Nothing is ever rewritten or deleted.

mod csv;
mod disk;
mod search;

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::{DateTime, Utc};
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};

use crate::review::ValidationRecord;
use crate::schema::{
    entry_from_json, entry_to_canonical_json, validate_entry, CatalogueEntry, EntryLookup, JsonError,
    Person, ResourceType, Rule, ValidationReport,
};

pub use self::csv::{export_csv, CSV_COLUMNS};
pub use search::{CustodianView, PiiAnswer, SearchFilter};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("entry failed validation:\n{0}")]
    ValidationFailed(ValidationReport),
    #[error("no entry with uid {0:?}")]
    NotFound(String),
    #[error("storage I/O: {0}")]
    StorageIo(#[from] std::io::Error),
    #[error("corrupt data in {}: {message}", path.display())]
    Corrupt { path: PathBuf, message: String },
    #[error("malformed CSV: {0}")]
    MalformedCsv(String),
    #[error("malformed JSON: {0}")]
    MalformedJson(JsonError),
}

impl StoreError {
    /// Machine-readable error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::ValidationFailed(_) => "validation-failed",
            Self::NotFound(_) => "not-found",
            Self::StorageIo(_) | Self::Corrupt { .. } => "storage-io",
            Self::MalformedCsv(_) => "malformed-csv",
            Self::MalformedJson(_) => "parse-error",
        }
    }
}

pub type Result<T, E = StoreError> = std::result::Result<T, E>;

/// One immutable saved state of an entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryVersion {
    pub uid: String,
    pub version_no: u32,
    pub saved_at: DateTime<Utc>,
    pub author: Person,
    /// Canonical JSON of the entry.
    #[serde(skip)]
    pub payload: Arc<[u8]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaveOutcome {
    pub version_no: u32,
}

#[derive(Debug, Clone, Default)]
struct UidState {
    versions: Vec<Arc<EntryVersion>>,
    latest: Option<Arc<CatalogueEntry>>,
    validations: Vec<Arc<ValidationRecord>>,
}

/// A consistent read-only view of the catalogue: the latest version of
/// every entry plus all validation records.
#[derive(Debug, Clone, Default)]
pub struct CatalogueSnapshot {
    entries: BTreeMap<String, (Arc<EntryVersion>, Arc<CatalogueEntry>)>,
    validations: BTreeMap<String, Vec<Arc<ValidationRecord>>>,
    /// The unfiltered entries, kept by filtered views for link resolution.
    universe: Option<Arc<Entries>>,
}

type Entries = BTreeMap<String, (Arc<EntryVersion>, Arc<CatalogueEntry>)>;

impl CatalogueSnapshot {
    /// Build a snapshot straight from entries, each as its own version 1.
    /// Later duplicates of a uid replace earlier ones.
    pub fn from_entries<I: IntoIterator<Item = CatalogueEntry>>(entries: I) -> Self {
        let entries = entries
            .into_iter()
            .map(|e| {
                let version = EntryVersion {
                    uid: e.uid().to_string(),
                    version_no: 1,
                    saved_at: e.provenance.saved_at,
                    author: e.provenance.submitter.clone(),
                    payload: entry_to_canonical_json(&e).into(),
                };
                (e.uid().to_string(), (Arc::new(version), Arc::new(e)))
            })
            .collect();
        Self { entries, validations: BTreeMap::new(), universe: None }
    }

    /// Parse an export (a JSON array of entries).
    pub fn from_export(bytes: &[u8]) -> Result<Self> {
        let values: Vec<serde_json::Value> =
            serde_json::from_slice(bytes).map_err(|e| StoreError::MalformedJson(JsonError {
                path: ".".into(),
                message: e.to_string(),
            }))?;
        let mut entries = Vec::with_capacity(values.len());
        for (i, v) in values.iter().enumerate() {
            let e = entry_from_json(&serde_json::to_vec(v).expect("value serializes"))
                .map_err(|e| StoreError::MalformedJson(JsonError { path: format!("[{i}].{}", e.path), ..e }))?;
            entries.push(e);
        }
        Ok(Self::from_entries(entries))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Latest entries in uid order.
    pub fn entries(&self) -> impl Iterator<Item = &CatalogueEntry> {
        self.entries.values().map(|(_, e)| e.as_ref())
    }

    pub fn get(&self, uid: &str) -> Option<&CatalogueEntry> {
        self.entries.get(uid).map(|(_, e)| e.as_ref())
    }

    pub fn latest_version(&self, uid: &str) -> Option<&EntryVersion> {
        self.entries.get(uid).map(|(v, _)| v.as_ref())
    }

    pub fn validations(&self, uid: &str) -> &[Arc<ValidationRecord>] {
        self.validations.get(uid).map_or(&[], Vec::as_slice)
    }

    /// The subset of entries matching `filter`. Cross-references still
    /// resolve against the full catalogue through the retained records.
    pub fn filtered(&self, filter: &SearchFilter) -> Self {
        let entries = self
            .entries
            .iter()
            .filter(|(_, (_, e))| filter.matches(e, self))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let validations = self
            .validations
            .iter()
            .filter(|(k, _)| self.entries.contains_key(*k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let universe = self.universe.clone().unwrap_or_else(|| Arc::new(self.entries.clone()));
        Self { entries, validations, universe: Some(universe) }
    }

    /// Look up a link target, in the full catalogue when this is a
    /// filtered view.
    pub fn resolve(&self, uid: &str) -> Option<&CatalogueEntry> {
        let all = self.universe.as_deref().unwrap_or(&self.entries);
        all.get(uid).map(|(_, e)| e.as_ref())
    }

    /// Matching uids in ascending order.
    pub fn search(&self, filter: &SearchFilter) -> Vec<String> {
        self.entries
            .iter()
            .filter(|(_, (_, e))| filter.matches(e, self))
            .map(|(k, _)| k.clone())
            .collect()
    }

    /// Custodian type and location, following a link to an organization
    /// entry when the entry itself does not name them.
    pub fn custodian_view<'a>(&'a self, entry: &'a CatalogueEntry) -> CustodianView<'a> {
        search::custodian_view(entry, self)
    }

    /// JSON array of the latest canonical payloads in uid order.
    pub fn export(&self) -> Vec<u8> {
        let mut out = Vec::from(&b"["[..]);
        for (i, (v, _)) in self.entries.values().enumerate() {
            if i > 0 {
                out.push(b',');
            }
            out.extend_from_slice(&v.payload);
        }
        out.push(b']');
        out
    }
}

impl EntryLookup for CatalogueSnapshot {
    fn resource_type(&self, uid: &str) -> Option<ResourceType> {
        self.resolve(uid).map(|e| e.rtype)
    }
}

struct StateLookup<'a>(&'a BTreeMap<String, UidState>);

impl EntryLookup for StateLookup<'_> {
    fn resource_type(&self, uid: &str) -> Option<ResourceType> {
        self.0.get(uid).and_then(|s| s.latest.as_ref()).map(|e| e.rtype)
    }
}

/// One problem with one row of an import.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowError {
    /// CSV: line number of the record (the header is line 1).
    /// JSON: 1-based array index.
    pub row: usize,
    pub rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ImportReport {
    pub saved: Vec<SavedRow>,
    pub errors: Vec<RowError>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SavedRow {
    pub row: usize,
    pub uid: String,
    pub version_no: u32,
}

/// The catalogue store. Readers never block on each other; writers are
/// serialized per uid.
pub struct Store {
    dir: Option<PathBuf>,
    state: RwLock<BTreeMap<String, UidState>>,
    writers: Mutex<HashMap<String, Arc<Mutex<()>>>>,
}

impl std::fmt::Debug for Store {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Store").field("dir", &self.dir).finish_non_exhaustive()
    }
}

impl Store {
    /// A store that keeps everything in memory.
    pub fn in_memory() -> Self {
        Self {
            dir: None,
            state: RwLock::new(BTreeMap::new()),
            writers: Mutex::new(HashMap::new()),
        }
    }

    /// Open (creating if needed) a store rooted at `dir`.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        let loaded = disk::load(&dir)?;
        let mut state = BTreeMap::new();
        for (uid, (versions, validations)) in loaded {
            let latest = match versions.last() {
                Some(v) => Some(Arc::new(entry_from_json(&v.payload).map_err(|e| StoreError::Corrupt {
                    path: disk::entry_dir(&dir, &uid),
                    message: e.to_string(),
                })?)),
                None => None,
            };
            state.insert(
                uid,
                UidState {
                    versions: versions.into_iter().map(Arc::new).collect(),
                    latest,
                    validations: validations.into_iter().map(Arc::new).collect(),
                },
            );
        }
        Ok(Self {
            dir: Some(dir),
            state: RwLock::new(state),
            writers: Mutex::new(HashMap::new()),
        })
    }

    pub fn data_dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn writer_lock(&self, uid: &str) -> Arc<Mutex<()>> {
        self.writers.lock().entry(uid.to_string()).or_default().clone()
    }

    /// Validate and append a new version of `entry`.
    pub fn save_entry(&self, entry: &CatalogueEntry, author: &Person) -> Result<SaveOutcome> {
        let lock = self.writer_lock(entry.uid());
        let _guard = lock.lock();
        self.save_locked(entry, author)
    }

    fn save_locked(&self, entry: &CatalogueEntry, author: &Person) -> Result<SaveOutcome> {
        let report = validate_entry(entry, &StateLookup(&self.state.read()));
        if !report.is_accepted() {
            return Err(StoreError::ValidationFailed(report));
        }
        let uid = entry.uid().to_string();
        let last = self
            .state
            .read()
            .get(&uid)
            .and_then(|s| s.versions.last().cloned());
        let now = Utc::now();
        let version = EntryVersion {
            uid: uid.clone(),
            version_no: last.as_ref().map_or(1, |v| v.version_no + 1),
            saved_at: last.as_ref().map_or(now, |v| v.saved_at.max(now)),
            author: author.clone(),
            payload: entry_to_canonical_json(entry).into(),
        };
        if let Some(dir) = &self.dir {
            disk::write_version(dir, &version)?;
        }
        let version_no = version.version_no;
        let mut state = self.state.write();
        let slot = state.entry(uid).or_default();
        slot.versions.push(Arc::new(version));
        slot.latest = Some(Arc::new(entry.clone()));
        Ok(SaveOutcome { version_no })
    }

    /// Run `f` while holding the write lock of `uid`. `f` receives a writer
    /// that can save versions and append validation records.
    pub(crate) fn with_writer<T>(&self, uid: &str, f: impl FnOnce(&UidWriter<'_>) -> Result<T>) -> Result<T> {
        let lock = self.writer_lock(uid);
        let _guard = lock.lock();
        f(&UidWriter { store: self, uid })
    }

    /// All versions of `uid`, ascending.
    pub fn list_versions(&self, uid: &str) -> Result<Vec<Arc<EntryVersion>>> {
        self.state
            .read()
            .get(uid)
            .filter(|s| !s.versions.is_empty())
            .map(|s| s.versions.clone())
            .ok_or_else(|| StoreError::NotFound(uid.to_string()))
    }

    pub fn get_version(&self, uid: &str, version_no: u32) -> Result<Arc<EntryVersion>> {
        self.list_versions(uid)?
            .into_iter()
            .find(|v| v.version_no == version_no)
            .ok_or_else(|| StoreError::NotFound(format!("{uid}@{version_no}")))
    }

    pub fn latest(&self, uid: &str) -> Result<(Arc<EntryVersion>, Arc<CatalogueEntry>)> {
        let state = self.state.read();
        let slot = state.get(uid).ok_or_else(|| StoreError::NotFound(uid.to_string()))?;
        match (slot.versions.last(), &slot.latest) {
            (Some(v), Some(e)) => Ok((v.clone(), e.clone())),
            _ => Err(StoreError::NotFound(uid.to_string())),
        }
    }

    pub fn list_validations(&self, uid: &str) -> Result<Vec<Arc<ValidationRecord>>> {
        let state = self.state.read();
        let slot = state
            .get(uid)
            .filter(|s| !s.versions.is_empty())
            .ok_or_else(|| StoreError::NotFound(uid.to_string()))?;
        Ok(slot.validations.clone())
    }

    pub fn uids(&self) -> Vec<String> {
        self.state
            .read()
            .iter()
            .filter(|(_, s)| s.latest.is_some())
            .map(|(k, _)| k.clone())
            .collect()
    }

    /// Take an immutable snapshot of the latest versions.
    pub fn snapshot(&self) -> CatalogueSnapshot {
        let state = self.state.read();
        let mut snap = CatalogueSnapshot::default();
        for (uid, slot) in state.iter() {
            if let (Some(v), Some(e)) = (slot.versions.last(), &slot.latest) {
                snap.entries.insert(uid.clone(), (v.clone(), e.clone()));
                snap.validations.insert(uid.clone(), slot.validations.clone());
            }
        }
        snap
    }

    pub fn search(&self, filter: &SearchFilter) -> Vec<String> {
        self.snapshot().search(filter)
    }

    pub fn export_catalogue(&self) -> Vec<u8> {
        self.snapshot().export()
    }

    /// Import a JSON array of entries (an export). Each element is saved
    /// independently; the submitter recorded in each entry is the author.
    pub fn import_json(&self, bytes: &[u8]) -> Result<ImportReport> {
        let values: Vec<serde_json::Value> = serde_json::from_slice(bytes).map_err(|e| {
            StoreError::MalformedJson(JsonError { path: ".".into(), message: e.to_string() })
        })?;
        let rows = values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let bytes = serde_json::to_vec(v).expect("value serializes");
                let parsed = entry_from_json(&bytes).map_err(|e| {
                    vec![RowError {
                        row: i + 1,
                        rule: "parse-error".into(),
                        field: Some(e.path.clone()),
                        message: e.message,
                    }]
                });
                (i + 1, parsed)
            })
            .collect();
        self.import_rows(rows)
    }

    /// Import CSV in the documented column layout.
    pub fn import_csv<R: std::io::Read>(&self, reader: R) -> Result<ImportReport> {
        let rows = csv::parse_rows(reader)?;
        self.import_rows(rows)
    }

    /// Save parsed rows. Rows whose only problem is a link to an entry that
    /// a later row creates are retried until no further progress is made.
    fn import_rows(&self, rows: Vec<(usize, Result<CatalogueEntry, Vec<RowError>>)>) -> Result<ImportReport> {
        let mut report = ImportReport::default();
        let mut pending = Vec::new();
        for (row, parsed) in rows {
            match parsed {
                Ok(entry) => pending.push((row, entry)),
                Err(errs) => report.errors.extend(errs),
            }
        }
        loop {
            let mut retry = Vec::new();
            let mut failed = Vec::new();
            let before = pending.len();
            for (row, entry) in pending {
                let author = entry.provenance.submitter.clone();
                match self.save_entry(&entry, &author) {
                    Ok(out) => report.saved.push(SavedRow {
                        row,
                        uid: entry.uid().to_string(),
                        version_no: out.version_no,
                    }),
                    Err(StoreError::ValidationFailed(r))
                        if r.errors().all(|v| v.rule == Rule::LinkUnresolved) =>
                    {
                        retry.push((row, entry));
                        failed.push((row, r));
                    }
                    Err(StoreError::ValidationFailed(r)) => report.errors.extend(row_errors(row, &r)),
                    Err(e) => return Err(e),
                }
            }
            if retry.is_empty() || retry.len() == before {
                for (row, r) in failed {
                    report.errors.extend(row_errors(row, &r));
                }
                break;
            }
            pending = retry;
        }
        report.saved.sort_by_key(|s| s.row);
        report.errors.sort_by_key(|e| e.row);
        Ok(report)
    }
}

fn row_errors(row: usize, report: &ValidationReport) -> Vec<RowError> {
    report
        .errors()
        .map(|v| RowError {
            row,
            rule: v.rule.id().to_string(),
            field: Some(v.path.clone()),
            message: v.message.clone(),
        })
        .collect()
}

/// Write access to one uid while its lock is held.
pub(crate) struct UidWriter<'a> {
    store: &'a Store,
    uid: &'a str,
}

impl UidWriter<'_> {
    pub(crate) fn save(&self, entry: &CatalogueEntry, author: &Person) -> Result<SaveOutcome> {
        debug_assert_eq!(entry.uid(), self.uid);
        self.store.save_locked(entry, author)
    }

    pub(crate) fn last_validation_time(&self) -> Option<DateTime<Utc>> {
        let state = self.store.state.read();
        state
            .get(self.uid)
            .and_then(|s| s.validations.last())
            .map(|r| r.saved_at)
    }

    pub(crate) fn append_validation(&self, record: ValidationRecord) -> Result<Arc<ValidationRecord>> {
        if let Some(dir) = &self.store.dir {
            disk::append_validation(dir, &record)?;
        }
        let record = Arc::new(record);
        self.store
            .state
            .write()
            .entry(self.uid.to_string())
            .or_default()
            .validations
            .push(record.clone());
        Ok(record)
    }
}
