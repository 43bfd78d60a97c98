//! Configuration-driven runner: presets, sweeps, CSV output and the
//! acceptance suite.

pub mod acceptance;
pub mod config;
pub mod presets;
pub mod runner;

use std::path::PathBuf;

use thiserror::Error;

/// Environment variable overriding the output root.
pub const OUT_DIR_ENV: &str = "CSC_OUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    ConfigParse(String),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] csc_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigParse(_) | CliError::UnknownPreset(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } | CliError::Csv(_) => 1,
        }
    }

    /// Rescaled time of a numerical failure, when known.
    pub fn failing_s(&self) -> Option<f64> {
        match self {
            CliError::Numerical(csc_core::Error::AtStep { s, .. }) => Some(*s),
            _ => None,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Output root: the environment override wins over the command line.
pub fn resolve_out_root(cli: Option<PathBuf>) -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .or(cli)
        .unwrap_or_else(|| PathBuf::from("out"))
}
