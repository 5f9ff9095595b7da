use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MgtError {
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resolvent is near-singular at mode {mode} (z = {re} + {im}i)")]
    NearSingular { mode: usize, re: f64, im: f64 },

    #[error("fractional powers require Re σ(𝔸) > 0")]
    Unstable,

    #[error("complex residue {residue:e} too large to discard at mode {mode}")]
    ComplexResidue { mode: usize, residue: f64 },

    #[error("matrix exponential overflow (t·‖L‖ = {scale:e}); split the interval into steps of length ≤ {suggested_step:e}")]
    ExpmOverflow { scale: f64, suggested_step: f64 },

    #[error("nonlinear dynamics require a collocation model")]
    NoCollocation,

    #[error("supercritical dimension constraint violated: N = {n} must exceed 2m = {two_m}")]
    Supercritical { n: u32, two_m: u32 },

    #[error("unknown gallery function `{0}`")]
    UnknownGallery(String),

    #[error("local existence window not found at this resolution")]
    NoExistenceWindow,

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, MgtError>;
