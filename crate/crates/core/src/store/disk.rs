use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::{EntryVersion, Result, StoreError};
use crate::review::ValidationRecord;
use crate::schema::{to_canonical_bytes, Person};

const INDEX: &str = "index.jsonl";
const VALIDATIONS: &str = "validations.jsonl";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexLine {
    version_no: u32,
    saved_at: DateTime<Utc>,
    author: Person,
}

pub(super) type Loaded = BTreeMap<String, (Vec<EntryVersion>, Vec<ValidationRecord>)>;

pub(super) fn entry_dir(root: &Path, uid: &str) -> PathBuf {
    root.join("entries").join(uid)
}

fn corrupt(path: &Path, message: impl ToString) -> StoreError {
    StoreError::Corrupt { path: path.to_path_buf(), message: message.to_string() }
}

/// Read a JSON-lines file. A final line without its newline is the residue
/// of an interrupted append: it is cut off so later appends start clean.
fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let complete = text.rfind('\n').map_or(0, |i| i + 1);
    if complete < text.len() {
        OpenOptions::new().write(true).open(path)?.set_len(complete as u64)?;
    }
    Ok(text[..complete].lines().filter(|l| !l.trim().is_empty()).map(str::to_string).collect())
}

pub(super) fn load(root: &Path) -> Result<Loaded> {
    let entries = root.join("entries");
    fs::create_dir_all(&entries)?;
    let mut out = Loaded::new();
    for dirent in fs::read_dir(&entries)? {
        let dirent = dirent?;
        if !dirent.file_type()?.is_dir() {
            continue;
        }
        let uid = dirent.file_name().to_string_lossy().into_owned();
        let dir = dirent.path();
        let mut versions = Vec::new();
        let index_path = dir.join(INDEX);
        for line in read_lines(&index_path)? {
            let meta: IndexLine = serde_json::from_str(&line).map_err(|e| corrupt(&index_path, e))?;
            let expected = versions.len() as u32 + 1;
            if meta.version_no != expected {
                return Err(corrupt(&index_path, format!("expected version {expected}, found {}", meta.version_no)));
            }
            let payload_path = dir.join(format!("v{}.json", meta.version_no));
            let payload = fs::read(&payload_path).map_err(|e| corrupt(&payload_path, e))?;
            versions.push(EntryVersion {
                uid: uid.clone(),
                version_no: meta.version_no,
                saved_at: meta.saved_at,
                author: meta.author,
                payload: payload.into(),
            });
        }
        let validations_path = dir.join(VALIDATIONS);
        let validations = read_lines(&validations_path)?
            .iter()
            .map(|l| serde_json::from_str(l).map_err(|e| corrupt(&validations_path, e)))
            .collect::<Result<Vec<ValidationRecord>>>()?;
        if !versions.is_empty() {
            out.insert(uid, (versions, validations));
        }
    }
    Ok(out)
}

fn sync_dir(dir: &Path) -> io::Result<()> {
    File::open(dir)?.sync_all()
}

fn append_line(path: &Path, line: &[u8]) -> io::Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    let mut buf = Vec::with_capacity(line.len() + 1);
    buf.extend_from_slice(line);
    buf.push(b'\n');
    f.write_all(&buf)?;
    f.sync_data()
}

pub(super) fn write_version(root: &Path, version: &EntryVersion) -> Result<()> {
    let dir = entry_dir(root, &version.uid);
    if !dir.exists() {
        fs::create_dir_all(&dir)?;
        sync_dir(dir.parent().expect("entry dir has a parent"))?;
    }
    let name = format!("v{}.json", version.version_no);
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = File::create(&tmp)?;
        f.write_all(&version.payload)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, dir.join(&name))?;
    sync_dir(&dir)?;
    let line = to_canonical_bytes(&IndexLine {
        version_no: version.version_no,
        saved_at: version.saved_at,
        author: version.author.clone(),
    });
    append_line(&dir.join(INDEX), &line)?;
    Ok(())
}

pub(super) fn append_validation(root: &Path, record: &ValidationRecord) -> Result<()> {
    let dir = entry_dir(root, &record.uid);
    append_line(&dir.join(VALIDATIONS), &to_canonical_bytes(record))?;
    Ok(())
}
