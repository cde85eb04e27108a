use thiserror::Error;

use crate::arith::RingSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operands belong to different parents")]
    ParentMismatch,
    #[error("exponent {exponent} outside [0, {n}]")]
    ExponentOutOfRange { exponent: usize, n: usize },
    #[error("d_out * d_in is nonzero; not a complex")]
    CompositionNonzero,
    #[error("cochain is not homogeneous")]
    InhomogeneousCochain,
    #[error("element is not homogeneous")]
    InhomogeneousElement,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("transferred operator disagrees with closed form: {0}")]
    TransferMismatch(String),
    #[error("truncation window {window} is unstable at degree {degree}")]
    UnstableTruncation { degree: i64, window: usize },
    #[error("element is not a cocycle")]
    NotACocycle,
    #[error("level {level} outside computed range 0..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("operation not supported over {0}")]
    UnsupportedRing(RingSpec),
    #[error("malformed presentation: {0}")]
    Presentation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
