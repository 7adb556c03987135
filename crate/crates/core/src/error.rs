use thiserror::Error;

/// Errors produced by the exact and numeric layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial degree {degree} exceeds the cap of {cap}")]
    DegreeCap { degree: u32, cap: u32 },

    #[error("Hermite index ({m}, {n}) exceeds the exact-layer cap of {cap}")]
    HermiteCap { m: u32, n: u32, cap: u32 },

    #[error("polynomial of bidegree ({p}, {q}) does not fit a ({m_max}, {n_max}) truncation")]
    DegreeOverflow { p: u32, q: u32, m_max: usize, n_max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("weight is not real-valued: conj(phi) != phi")]
    ComplexWeight,

    #[error("Gram solve failed on chain (m={m}, r={residue}): pivot {pivot}")]
    GramSolve { m: usize, residue: usize, pivot: f64 },

    #[error("node computation did not converge for degree {0}")]
    NodeConvergence(usize),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
