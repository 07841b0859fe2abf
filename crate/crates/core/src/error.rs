use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed coefficient {0:?}")]
    BadCoefficient(String),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("duplicate variable {0:?}")]
    DuplicateVariable(String),
    #[error(
        "odd variable {name:?} appears with total exponent {exponent}; odd elements square to zero"
    )]
    OddExponent { name: String, exponent: u32 },
    #[error("variable {0:?} has exponent 0")]
    ZeroExponent(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degree {degree} lies outside the computable range [{lo}, {hi}] of this window")]
    InsufficientWindow { degree: i32, lo: i32, hi: i32 },
    #[error("variable {0:?} has degree 0; an exponent cap is required to expand it")]
    UncappedDegreeZero(String),
    #[error("divided power oracle rejects {element}: {reason}")]
    PdRejected { element: String, reason: String },
    #[error("divided power defect in block {block} (degree {degree}): relation r({i},{j}) maps to {residue}, not 0")]
    PdDefect {
        block: String,
        degree: i32,
        i: usize,
        j: usize,
        residue: String,
    },
    #[error("{0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
