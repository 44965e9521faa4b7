use thiserror::Error;

use crate::field::Fp2;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// `q` does not divide `p^2 - 1`, so no primitive q-th root of unity
    /// exists in F_{p^2} and only the cyclic loop of order pq exists.
    #[error("no primitive {q}th root of unity in F_{{{p}^2}}: {q} does not divide {p}^2 - 1")]
    NoPrimitiveRoot { p: u64, q: u64 },

    #[error("division by zero")]
    DivisionByZero,

    /// A denominator of the theta formula vanished; the parameter is not in
    /// the admissible set.
    #[error("degenerate gamma = {gamma}: a denominator vanishes, so gamma is not admissible")]
    DegenerateGamma { gamma: Fp2 },

    #[error("inadmissible theta vector: {0}")]
    InadmissibleTheta(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
