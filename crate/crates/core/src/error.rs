use thiserror::Error;

/// Errors raised by evaluators in this crate.
///
/// Every variant has a stable machine-readable [`code`](ZetaError::code) that
/// the command-line front end prints on failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZetaError {
    #[error("pole at s = 1")]
    PoleAtOne,
    #[error("invalid alpha: {0}")]
    InvalidAlpha(String),
    #[error("tolerance not reached within {max_terms} terms ({detail})")]
    PrecisionExhausted { max_terms: usize, detail: String },
    #[error("derivative order {0} unsupported (maximum is 4)")]
    UnsupportedOrder(usize),
    #[error("index {index} exceeds configured maximum {max}")]
    IndexTooLarge { index: usize, max: usize },
    #[error("|alpha| = {abs} is outside the disc of radius {radius}")]
    RadiusViolation { abs: f64, radius: f64 },
    #[error("modulus {0} too large (maximum 10000)")]
    ModulusTooLarge(u64),
    #[error("character parity mismatch: expected {expected}")]
    CharacterParityMismatch { expected: &'static str },
    #[error("character is not primitive (conductor {conductor}, modulus {modulus})")]
    NotPrimitive { conductor: u64, modulus: u64 },
    #[error("formula refuted by the validation ledger: {0}")]
    FormulaRefuted(String),
    #[error("invalid precision context: {0}")]
    InvalidContext(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl ZetaError {
    pub fn code(&self) -> &'static str {
        match self {
            ZetaError::PoleAtOne => "POLE_AT_ONE",
            ZetaError::InvalidAlpha(_) => "INVALID_ALPHA",
            ZetaError::PrecisionExhausted { .. } => "PRECISION_EXHAUSTED",
            ZetaError::UnsupportedOrder(_) => "UNSUPPORTED_ORDER",
            ZetaError::IndexTooLarge { .. } => "INDEX_TOO_LARGE",
            ZetaError::RadiusViolation { .. } => "RADIUS_VIOLATION",
            ZetaError::ModulusTooLarge(_) => "MODULUS_TOO_LARGE",
            ZetaError::CharacterParityMismatch { .. } => "CHARACTER_PARITY_MISMATCH",
            ZetaError::NotPrimitive { .. } => "NOT_PRIMITIVE",
            ZetaError::FormulaRefuted(_) => "FORMULA_REFUTED",
            ZetaError::InvalidContext(_) => "INVALID_CONTEXT",
            ZetaError::Parse(_) => "PARSE_ERROR",
            ZetaError::Io(_) => "IO_ERROR",
        }
    }

    pub(crate) fn exhausted(max_terms: usize, detail: impl Into<String>) -> Self {
        ZetaError::PrecisionExhausted {
            max_terms,
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for ZetaError {
    fn from(e: std::io::Error) -> Self {
        ZetaError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, ZetaError>;
