//! Command-line front end for `serre-core`: JSON input and bundle
//! documents, and the `build`, `verify`, `compare` and `cohomology`
//! commands.

pub mod commands;
pub mod convert;
pub mod document;

/// Output format of every command.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// What a command produced: exit code, the document, and a diagnostic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: Option<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Json(serde_json::Error),
    #[error("invalid document: {0}")]
    Document(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Json(_) => "parse",
            CliError::Document(_) => "document",
        }
    }
}
