//! Reading, writing and synthesizing quantitative databases.

mod generate;
mod native;
mod spmf;

use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::model::ModelError;

pub use generate::{generate, GeneratorConfig, ZIPF_EXPONENT};
pub use native::{parse_native, parse_native_str, to_native_string, write_native};
pub use spmf::{import_spmf_huim, import_spmf_huim_str, parse_utility_table, parse_utility_table_str};

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid generator config: {0}")]
    Config(String),
}

impl DatasetError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        DatasetError::Parse { line, message: message.into() }
    }

    pub(crate) fn io(path: &std::path::Path, source: io::Error) -> Self {
        DatasetError::Io { path: path.to_path_buf(), source }
    }
}
