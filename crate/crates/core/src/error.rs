use alloc::string::String;

/// Errors raised by the homogenizers, searches and creature operations.
///
/// Search exhaustion inside a truncated problem is reported as
/// [`Error::NotFoundWithinDepth`]; it never means the underlying infinite
/// statement is false.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cap exceeded while computing {what}{}", step.map(|s| alloc::format!(" (step {s})")).unwrap_or_default())]
    CapExceeded { what: &'static str, step: Option<u32> },

    #[error("coordinate {coordinate} has size {have}, the bound requires {need}")]
    ShapeTooSmall { coordinate: usize, have: u64, need: u64 },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("internal contradiction: {0}")]
    InternalContradiction(String),

    #[error("no certificate within depth {depth}{}", if *budget_exhausted { " (search budget exhausted)" } else { "" })]
    NotFoundWithinDepth { depth: usize, budget_exhausted: bool },

    #[error("fusion aborted at step {step}: {reason}")]
    FusionAborted { step: usize, reason: String },

    #[error("invalid composition choice: {0}")]
    InvalidChoice(String),

    #[error("enumeration guard of {limit} exceeded")]
    GuardExceeded { limit: usize },

    #[error("source prefix cannot supply the creature needed at index {index}")]
    InsufficientMaterial { index: usize },

    #[error("S_k,n bounds are only stated for n <= 1 (got n = {0})")]
    UnsupportedN(u32),

    #[error("creature is not a subcomposition of the given blocks: {0}")]
    NotInSigma(String),
}

pub type Result<T> = core::result::Result<T, Error>;
