//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("operator is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("qubit count {n} exceeds the dense-realization limit {max}")]
    TooManyQubits { n: usize, max: usize },

    #[error("qubit register must contain at least one qubit")]
    EmptyRegister,

    #[error("twist angle count {angles} does not match qubit count {qubits}")]
    AngleCountMismatch { angles: usize, qubits: usize },

    #[error("time {t} lies outside the annealing interval [0, {annealing_time}]")]
    TimeOutOfRange { t: f64, annealing_time: f64 },

    #[error("level index {level} out of range ({available} levels available)")]
    LevelOutOfRange { level: usize, available: usize },

    #[error("state vector not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("numerical abort: {0}")]
    NumericalAbort(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
