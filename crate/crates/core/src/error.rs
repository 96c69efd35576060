use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// The variants fall into three families that the CLI maps onto distinct exit
/// codes: numerical failures, data/input failures, and configuration errors.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: argument {value} is outside the domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("{what}: series did not converge after {terms} terms (partial sum {partial})")]
    NonConvergence {
        what: &'static str,
        terms: usize,
        partial: f64,
    },

    #[error("quadrature tolerance not met: estimate {estimate}, error bound {error_bound}")]
    Tolerance { estimate: f64, error_bound: f64 },

    #[error("Jeffreys radicand is not positive at alpha = {alpha} (value {value})")]
    Radicand { alpha: f64, value: f64 },

    #[error("chain is empty")]
    EmptyChain,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: line {line}: {message}")]
    Data {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures caused by input files or dataset contents.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Data { .. } | Error::InvalidData(_) | Error::Io { .. }
        )
    }

    /// True for failures of the numerical machinery (series, quadrature, domain).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::NonConvergence { .. }
                | Error::Tolerance { .. }
                | Error::Radicand { .. }
                | Error::EmptyChain
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
