use std::path::PathBuf;

use cremona::birep::BirepError;
use cremona::flows::FlowError;
use cremona::latticedyn::LatticeError;
use cremona::rootdata::RootError;
use cremona::symfield::FieldError;
use cremona::taucocycle::TauError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("reading {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("writing output: {0}")]
    Write(#[from] std::io::Error),
    #[error("config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Birep(#[from] BirepError),
    #[error(transparent)]
    Tau(#[from] TauError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    /// A computation stopped at a pole or blew up.
    #[error("{0}")]
    Singular(String),
}

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_SINGULAR: u8 = 3;
pub const EXIT_INTERNAL: u8 = 4;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Read { .. } | CliError::Toml(_) | CliError::Root(_) => EXIT_CONFIG,
            CliError::Birep(BirepError::Parse { .. } | BirepError::Root(_)) => EXIT_CONFIG,
            CliError::Field(FieldError::Parse { .. }) | CliError::Tau(TauError::Mode(_)) => EXIT_CONFIG,
            CliError::Singular(_) => EXIT_SINGULAR,
            CliError::Lattice(LatticeError::DivisionByZero { .. }) => EXIT_SINGULAR,
            CliError::Flow(FlowError::Pole { .. } | FlowError::Incomplete(_)) => EXIT_SINGULAR,
            CliError::Flow(FlowError::Param(_) | FlowError::Step(_) | FlowError::Range(..)) => EXIT_CONFIG,
            _ => EXIT_INTERNAL,
        }
    }
}
