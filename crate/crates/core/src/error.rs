// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Ingest(#[from] crate::ingest::IngestError),

    #[error("{0}")]
    Refs(#[from] crate::refs::RefError),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Report(#[from] crate::report::ReportError),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short stable reason string for machine consumption.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io error",
            Error::Ingest(e) => e.reason(),
            Error::Refs(e) => e.reason(),
            Error::Config(_) => "invalid configuration",
            Error::Report(e) => e.reason(),
        }
    }
}
