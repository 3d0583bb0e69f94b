use thiserror::Error;

/// Everything that can go wrong in the engine. Messages name the offending
/// witness (basis triple, degree, column) where there is one.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    InputParse(String),
    #[error("multiplication is not commutative: b{i}*b{j} != b{j}*b{i}")]
    NotCommutative { i: usize, j: usize },
    #[error("multiplication is not associative: (b{i}*b{j})*b{l} != b{i}*(b{j}*b{l})")]
    NotAssociative { i: usize, j: usize, l: usize },
    #[error("no unit: {0}")]
    NoUnit(String),
    #[error("algebra is not local: {0}")]
    NotLocal(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("inconsistent linear system: {0}")]
    Inconsistent(String),
    #[error("modules live over different rings")]
    RingMismatch,
    #[error("sequence is not exact at position {0}")]
    NotExact(isize),
    #[error("index {index} outside range [{lo}, {hi}]")]
    IndexOutOfRange { index: isize, lo: isize, hi: isize },
    #[error("strategies disagree in degree {degree}: direct {direct}, formula {formula}")]
    CrossCheckMismatch { degree: usize, direct: usize, formula: usize },
    #[error("Hom(C, -) of the sequence is not exact at position {0}")]
    NotHomCExact(isize),
    #[error("C (x) - of the sequence is not exact at position {0}")]
    NotTensorCExact(isize),
    #[error("map is not injective (kernel dimension {0})")]
    NotInjective(usize),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("map is not R-linear: fails against generator {0}")]
    NotRLinear(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
