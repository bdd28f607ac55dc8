//! `catalogue`: validate entry files, move data in and out of a store,
//! print reports, and run the HTTP service.
//!
//! Exit codes: 0 success, 1 validation failure, 2 I/O failure, 3 usage.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use catalogue_core::analytics::{report, ReportParams, Table};
use catalogue_core::langtag::TargetGroup;
use catalogue_core::schema::{entry_from_json, validate_entry, CatalogueEntry, JsonError, ResourceType};
use catalogue_core::store::{export_csv, CatalogueSnapshot, ImportReport, SearchFilter, Store, StoreError};
use catalogue_service::Config;
use clap::{Parser, Subcommand, ValueEnum};

const DEFAULT_DATA_DIR: &str = "catalogue-data";

#[derive(Parser)]
#[command(name = "catalogue", version, about = "Language-resource catalogue operator tool")]
struct Cli {
    /// Store directory.
    #[arg(long, global = true, env = "CATALOGUE_DATA_DIR")]
    data_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an entry file (one entry or an array); exit 1 on any error.
    Validate { file: PathBuf },
    /// Import a CSV file or a JSON export into the store.
    Import {
        file: PathBuf,
        /// Defaults to the file extension.
        #[arg(long, value_enum)]
        format: Option<DataFormat>,
    },
    /// Write the latest version of every entry to stdout.
    Export {
        #[arg(long, value_enum, default_value = "json")]
        format: DataFormat,
    },
    /// Print one report.
    Report {
        /// types, languages, first-locations, language-regions, custodian-types,
        /// custodian-locations, licenses, pii or singletons
        #[arg(long)]
        table: Table,
        #[arg(long, value_enum, default_value = "md")]
        format: ReportFormat,
        /// Read this export file instead of the store.
        #[arg(long)]
        from: Option<PathBuf>,
        /// Target group of the language-regions report.
        #[arg(long, default_value = "english")]
        group: TargetGroup,
        /// Rows kept by the custodian-locations report.
        #[arg(long, default_value_t = 12)]
        top: usize,
        /// Leave target-group tags out of the singletons report.
        #[arg(long)]
        exclude_target_groups: bool,
        /// Restrict to entries matching a filter given as JSON,
        /// e.g. '{"rtype":"primary_source"}'.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DataFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Csv,
    Md,
    Json,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::ValidationFailed(_) | StoreError::MalformedCsv(_) | StoreError::MalformedJson(_) => {
                Self::validation(e.to_string())
            }
            other => Self::io(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn write_stdout(bytes: &[u8]) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    out.write_all(bytes)
        .and_then(|_| out.flush())
        .map_err(|e| Failure::io(format!("stdout: {e}")))
}

fn open_store(dir: &Path) -> Result<Store, Failure> {
    Store::open(dir).map_err(Failure::from)
}

fn parse_entries(bytes: &[u8]) -> Result<Vec<CatalogueEntry>, Failure> {
    let value: serde_json::Value =
        serde_json::from_slice(bytes).map_err(|e| Failure::validation(format!("not JSON: {e}")))?;
    let items = match value {
        serde_json::Value::Array(items) => items,
        single => vec![single],
    };
    items
        .iter()
        .enumerate()
        .map(|(i, v)| {
            entry_from_json(v.to_string().as_bytes()).map_err(|e: JsonError| Failure::validation(format!("entry {i}: {e}")))
        })
        .collect()
}

fn validate(file: &Path, data_dir: Option<&Path>) -> Result<(), Failure> {
    let entries = parse_entries(&read(file)?)?;
    // Links resolve against the store, if there is one, and the file itself.
    let mut known: BTreeMap<String, ResourceType> = BTreeMap::new();
    if let Some(dir) = data_dir.filter(|d| d.join("entries").is_dir()) {
        known.extend(open_store(dir)?.snapshot().entries().map(|e| (e.uid().to_string(), e.rtype)));
    }
    known.extend(entries.iter().map(|e| (e.uid().to_string(), e.rtype)));
    let mut failed = 0;
    for e in &entries {
        let report = validate_entry(e, &known);
        if !report.is_empty() {
            eprint!("{}:\n{report}", e.uid());
        }
        if !report.is_accepted() {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(Failure::validation(format!("{failed} of {} entries rejected", entries.len())));
    }
    eprintln!("{} entries ok", entries.len());
    Ok(())
}

fn import(dir: &Path, file: &Path, format: Option<DataFormat>) -> Result<(), Failure> {
    let format = match format {
        Some(f) => f,
        None => match file.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => DataFormat::Csv,
            Some(e) if e.eq_ignore_ascii_case("json") => DataFormat::Json,
            _ => return Err(Failure::usage(format!("cannot tell the format of {}; pass --format", file.display()))),
        },
    };
    let bytes = read(file)?;
    let store = open_store(dir)?;
    let report: ImportReport = match format {
        DataFormat::Csv => store.import_csv(&bytes[..])?,
        DataFormat::Json => store.import_json(&bytes)?,
    };
    for e in &report.errors {
        eprintln!("row {}: [{}] {}: {}", e.row, e.rule, e.field.as_deref().unwrap_or("-"), e.message);
    }
    eprintln!("saved {} entries, {} errors", report.saved.len(), report.errors.len());
    if !report.errors.is_empty() {
        return Err(Failure::validation("some rows were not imported"));
    }
    Ok(())
}

fn export(dir: &Path, format: DataFormat) -> Result<(), Failure> {
    let snap = open_store(dir)?.snapshot();
    match format {
        DataFormat::Json => write_stdout(&snap.export()),
        DataFormat::Csv => {
            let mut out = Vec::new();
            export_csv(&snap, &mut out).map_err(|e| Failure::io(e.to_string()))?;
            write_stdout(&out)
        }
    }
}

fn snapshot_for_report(dir: &Path, from: Option<&Path>) -> Result<CatalogueSnapshot, Failure> {
    match from {
        Some(file) => Ok(CatalogueSnapshot::from_export(&read(file)?)?),
        None => {
            if !dir.join("entries").is_dir() {
                return Err(Failure::io(format!("no catalogue at {}", dir.display())));
            }
            Ok(open_store(dir)?.snapshot())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let dir = cli.data_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_DATA_DIR));
    match cli.command {
        Command::Validate { file } => validate(&file, cli.data_dir.as_deref()),
        Command::Import { file, format } => import(&dir, &file, format),
        Command::Export { format } => export(&dir, format),
        Command::Report { table, format, from, group, top, exclude_target_groups, filter } => {
            let mut snap = snapshot_for_report(&dir, from.as_deref())?;
            if let Some(f) = filter {
                let f: SearchFilter =
                    serde_json::from_str(&f).map_err(|e| Failure::usage(format!("bad --filter: {e}")))?;
                snap = snap.filtered(&f);
            }
            let d = report(&snap, table, &ReportParams { group, top, exclude_target_groups });
            match format {
                ReportFormat::Md => write_stdout(d.to_markdown().as_bytes()),
                ReportFormat::Csv => write_stdout(d.to_csv().as_bytes()),
                ReportFormat::Json => write_stdout(&d.to_json()),
            }
        }
        Command::Serve { config } => {
            let mut config = Config::load(config.as_deref()).map_err(|e| Failure::usage(e.to_string()))?;
            if let Some(d) = cli.data_dir {
                config.data_dir = d;
            }
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::io(e.to_string()))?;
            rt.block_on(catalogue_service::serve(config)).map_err(|e| Failure::io(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
