//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or command was given values that violate a type invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// Two grids with different (alpha, mu) specs were combined.
    #[error("grid spec mismatch: {0}")]
    SpecMismatch(String),

    /// Division by a grid that contains a (near-)zero entry.
    #[error("division by zero grid entry at alpha={alpha}, mu={mu}")]
    SingularPoint { alpha: f64, mu: f64 },

    /// An argument left the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// An ODE solve produced a non-finite state.
    #[error("divergent trajectory: variable {var} became non-finite at node {node} (u={u}) for alpha={alpha}, mu={mu}")]
    Divergence {
        var: usize,
        node: usize,
        u: f64,
        alpha: f64,
        mu: f64,
    },

    /// Sequences that must have equal length do not.
    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    /// Text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Divergence { .. } => 3,
            _ => 2,
        }
    }
}
