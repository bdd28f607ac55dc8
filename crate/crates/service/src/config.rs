use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use catalogue_core::review::ReviewPolicy;
use serde::Deserialize;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("invalid {var}={value:?}: {message}")]
    Env { var: &'static str, value: String, message: String },
}

/// Service settings: a TOML file, then `CATALOGUE_*` environment overrides.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub listen: SocketAddr,
    pub data_dir: PathBuf,
    /// Origin allowed to call the API from a browser.
    pub cors_origin: Option<String>,
    pub review: ReviewPolicy,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            listen: SocketAddr::from(([127, 0, 0, 1], 8080)),
            data_dir: PathBuf::from("catalogue-data"),
            cors_origin: None,
            review: ReviewPolicy::default(),
        }
    }
}

impl Config {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|source| ConfigError::Parse { path: path.to_path_buf(), source })
    }

    /// Read `path` if given, then apply the process environment.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|source| ConfigError::Read { path: p.to_path_buf(), source })?;
                Self::from_toml(&text, p)?
            }
            None => Self::default(),
        };
        config.with_env(|k| std::env::var(k).ok())
    }

    /// Apply `CATALOGUE_LISTEN`, `CATALOGUE_DATA_DIR` and
    /// `CATALOGUE_CORS_ORIGIN` as read through `var`.
    pub fn with_env(mut self, var: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        if let Some(v) = var("CATALOGUE_LISTEN") {
            self.listen = v.parse().map_err(|e: std::net::AddrParseError| ConfigError::Env {
                var: "CATALOGUE_LISTEN",
                value: v.clone(),
                message: e.to_string(),
            })?;
        }
        if let Some(v) = var("CATALOGUE_DATA_DIR") {
            self.data_dir = PathBuf::from(v);
        }
        if let Some(v) = var("CATALOGUE_CORS_ORIGIN") {
            self.cors_origin = Some(v).filter(|s| !s.is_empty());
        }
        Ok(self)
    }
}
