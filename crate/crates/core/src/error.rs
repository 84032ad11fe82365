use std::path::PathBuf;

use thiserror::Error;

use crate::fis_config::ParseIssue;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid membership function: {0}")]
    InvalidMembership(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("invalid fuzzy system: {}", summarize_issues(.0))]
    InvalidFis(Vec<ParseIssue>),

    #[error("SNR undefined: {0}")]
    UndefinedSnr(String),

    #[error("no grid point reaches accuracy threshold {threshold}")]
    EmptyRegion { threshold: f64 },

    #[error("{}: row {row}: {message}", path_label(.path))]
    Load {
        path: Option<PathBuf>,
        row: usize,
        message: String,
    },

    #[error("I/O error on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn summarize_issues(issues: &[ParseIssue]) -> String {
    issues
        .iter()
        .filter(|i| i.is_error())
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

fn path_label(path: &Option<PathBuf>) -> String {
    match path {
        Some(p) => p.display().to_string(),
        None => "<table>".to_string(),
    }
}
