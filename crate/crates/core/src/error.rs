use thiserror::Error;

/// Every failure the kernel can report. The variant names are the error
/// names printed by the command line tool.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("TypeMismatch: {0}")]
    TypeMismatch(String),
    #[error("IllFormedSubset: {0}")]
    IllFormedSubset(String),
    #[error("IllTyped: {0}")]
    IllTyped(String),
    #[error("NotFirstOrder: {0}")]
    NotFirstOrder(String),
    #[error("NoPoint: {0}")]
    NoPoint(String),
    #[error("NotPointed: {0}")]
    NotPointed(String),
    #[error("LevelMismatch: {0}")]
    LevelMismatch(String),
    #[error("NotCodable: {0}")]
    NotCodable(String),
    #[error("NotEndo: {0}")]
    NotEndo(String),
    #[error("RankNotFound: {0}")]
    RankNotFound(String),
    #[error("StratumExceeded: code of stratum {code} exceeds bound {bound}")]
    StratumExceeded { code: u32, bound: u32 },
    #[error("FuelExhausted: budget of {budget} steps exceeded")]
    FuelExhausted { budget: u64 },
    #[error("SyntaxError at {line}:{column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("DecodeError: {0}")]
    DecodeError(String),
    #[error("Unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// The bare error name, e.g. `TypeMismatch`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::TypeMismatch(_) => "TypeMismatch",
            Error::IllFormedSubset(_) => "IllFormedSubset",
            Error::IllTyped(_) => "IllTyped",
            Error::NotFirstOrder(_) => "NotFirstOrder",
            Error::NoPoint(_) => "NoPoint",
            Error::NotPointed(_) => "NotPointed",
            Error::LevelMismatch(_) => "LevelMismatch",
            Error::NotCodable(_) => "NotCodable",
            Error::NotEndo(_) => "NotEndo",
            Error::RankNotFound(_) => "RankNotFound",
            Error::StratumExceeded { .. } => "StratumExceeded",
            Error::FuelExhausted { .. } => "FuelExhausted",
            Error::SyntaxError { .. } => "SyntaxError",
            Error::DecodeError(_) => "DecodeError",
            Error::Unsupported(_) => "Unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
