//! Library side of the `dblint` command-line tool.

// `!(v > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod format;
pub mod problem_file;

use thiserror::Error;

pub use problem_file::ProblemFile;

/// Environment variable overriding the inner Gauss order.
pub const QUAD_ORDER_ENV: &str = "RC_QUAD_ORDER";

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input.
    #[error("{0}")]
    Usage(String),
    /// The numerics failed on valid input.
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<dblint_core::Error> for CliError {
    fn from(e: dblint_core::Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

/// Inner Gauss order from the environment, or the library default.
pub fn quad_order_from_env() -> Result<usize, CliError> {
    match std::env::var(QUAD_ORDER_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::Usage(format!("{QUAD_ORDER_ENV} must be an integer, got `{v}`"))
        }),
        Err(_) => Ok(dblint_core::quad::DEFAULT_ORDER),
    }
}
