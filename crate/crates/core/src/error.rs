use thiserror::Error;

/// Errors produced by the solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("region has {size} {what}, exceeding the limit of {limit}")]
    Capacity {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("set cover instance is infeasible: element {0} is not covered by any set")]
    Infeasible(usize),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("clause {0} has a non-positive measure reduction")]
    DegenerateClause(String),

    #[error("fixed-point iteration did not converge within {0} rounds")]
    NonConvergence(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by user-supplied data rather than a solver bug.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Input(_)
                | Error::VertexOutOfRange { .. }
                | Error::Parse { .. }
                | Error::Capacity { .. }
                | Error::Infeasible(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
