//! Experiment runner behind the `epsedge` binary: runs EDGE or the grid
//! baseline on a named classifier, scores it and writes the artifacts.

pub mod compare;
pub mod output;
pub mod run;
pub mod svg;
pub mod target;

use epsedge_core::dcopf::{LpError, NetworkError};
use epsedge_core::metrics::MetricsError;
use epsedge_core::EdgeError;
use thiserror::Error;

pub use compare::{compare, CompareRow};
pub use run::{execute, Method, RunOptions, RunOutcome, RunReport};
pub use target::Target;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const NO_BOUNDARY: i32 = 2;
    pub const BUDGET_EXHAUSTED: i32 = 3;
    pub const INPUT: i32 = 4;
    pub const GEOMETRY: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Edge(#[from] EdgeError),
    #[error("reference boundary: {0}")]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Edge(EdgeError::NoBoundaryFound { .. }) => exit::NO_BOUNDARY,
            CliError::Edge(EdgeError::BudgetExhausted(_)) => exit::BUDGET_EXHAUSTED,
            CliError::Metrics(MetricsError::Edge(EdgeError::NoBoundaryFound { .. })) => {
                exit::NO_BOUNDARY
            }
            CliError::Metrics(MetricsError::Edge(EdgeError::BudgetExhausted(_))) => {
                exit::BUDGET_EXHAUSTED
            }
            CliError::Lp(_) => exit::GEOMETRY,
            _ => exit::INPUT,
        }
    }
}
