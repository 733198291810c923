use thiserror::Error;

/// Errors shared across the field, curve, reduction and solver layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("curve parameters are singular (4a^3 + 27b^2 = 0 mod p)")]
    SingularCurve,

    #[error("modulus {0} is not an odd prime >= 3")]
    BadModulus(u64),

    #[error("point ({x}, {y}) is not on the curve")]
    PointNotOnCurve { x: u64, y: u64 },

    #[error("iteration cap exceeded ({0})")]
    CapExceeded(u64),

    #[error("a power-of-two multiple of the base point is the neutral element")]
    DegeneratePower,

    #[error("target point is not in the subgroup generated by the base point")]
    NotInSubgroup,

    #[error("variable u{0} has no assigned value")]
    UnassignedVariable(u32),

    #[error("shifted target Q + [{shift}]P is the neutral element; classical answer y = {classical}")]
    ShiftedTargetAtInfinity { shift: u64, classical: u64 },

    #[error("truth chain cannot be encoded: {0}")]
    UnencodableChain(String),

    #[error("assignment length {got} does not match variable count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("shift {shift} is not valid for method {method}")]
    InvalidShift { method: u8, shift: u64 },

    #[error("invalid annealing parameters: {0}")]
    InvalidSaParams(String),

    #[error("line {line}: {msg}")]
    ParseError { line: usize, msg: String },

    #[error("header declares {declared} but body contains {found} ({what})")]
    HeaderMismatch {
        what: &'static str,
        declared: usize,
        found: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
