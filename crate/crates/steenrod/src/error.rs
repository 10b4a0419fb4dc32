use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("composite {0} is not admissible")]
    NonAdmissible(String),

    #[error("Adem expansion requires 0 < a < 2b, got a={a}, b={b}")]
    OutOfAdemRange { a: u32, b: u32 },

    #[error("exponent {got} exceeds the ceiling {ceiling}")]
    ExponentCeiling { got: u64, ceiling: u64 },

    #[error("parse error at byte {pos}: {msg} (token `{token}`)")]
    Parse {
        pos: usize,
        token: String,
        msg: String,
    },

    #[error("relative degree {deg} exceeds the window ceiling {window}")]
    WindowExceeded { deg: u32, window: u32 },

    #[error("stability requires r > {needed}, got r = {r}")]
    StabilityViolation { r: u32, needed: u32 },

    #[error("m = {0} is outside the supported range")]
    UnsupportedM(u32),

    #[error("dimension mismatch at degree {degree}: expected {expected}, computed {actual}")]
    DimensionMismatch {
        degree: i64,
        expected: usize,
        actual: usize,
    },

    #[error("linear system is singular: {0}")]
    SingularSystem(String),

    #[error("degree configuration does not fit this check: {0}")]
    BadDegreeConfig(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
