//! Library-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty word has no convergence class")]
    EmptyWord,

    #[error("word parse error: {0}")]
    ParseWord(String),

    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u32, u32),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("word of weight {weight} exceeds truncation {trunc}")]
    WeightOverflow { weight: usize, trunc: usize },

    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("series constant term is not 1")]
    ConstantTermNotOne,

    #[error("series is not group-like (residual {residual} on ({u}, {v}))")]
    NotGrouplike { residual: String, u: String, v: String },

    #[error("series is not primitive at weight {weight}; residual on {word}")]
    NotPrimitive { weight: usize, word: String },

    #[error("word {0} is not a Lyndon word")]
    NotLyndon(String),

    #[error("index is not admissible: leading (s, zeta) = (1, 1) diverges")]
    NotAdmissible,

    #[error("word {0} is not convergent")]
    NotConvergent(String),

    #[error("tolerance {target} not met within budget: {detail}")]
    ToleranceNotMet { target: String, detail: String },

    #[error("inconsistent convergent coefficients: shuffle relation violated by ({u}, {v}), residual {residual}")]
    InconsistentInput { u: String, v: String, residual: String },

    #[error("insufficient input precision: requested {requested} digits, values carry about {available}")]
    InsufficientPrecision { requested: u32, available: u32 },

    #[error("series file format error: {0}")]
    FileFormat(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    InvalidArgument(String),
}
