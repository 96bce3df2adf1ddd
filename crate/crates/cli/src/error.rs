use magres_core::LabError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Lab(#[from] LabError),

    #[error("writing {path}: {source}")]
    Output { path: String, source: std::io::Error },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;
