use thiserror::Error;

use crate::linalg::LinalgError;

/// Domain errors. Each variant has a stable machine-readable [`Error::code`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("gamma is not antisymmetric")]
    NotAntisymmetric,
    #[error("group element is singular")]
    SingularGroupElement,
    #[error("matrices {0} and {1} do not commute (commutator norm {2:e})")]
    NotCommuting(usize, usize, f64),
    #[error("marking vector is zero")]
    ZeroMarking,
    #[error("flag step {step} is not invariant under matrix {matrix}")]
    FlagNotInvariant { step: usize, matrix: usize },
    #[error("flag weights must be nonincreasing")]
    WeightsNotDecreasing,
    #[error("marked tuple is not stable")]
    NotStable,
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
    #[error("logarithm of a zero base coordinate")]
    LogAtZero,
    #[error("value is not representable in exact mode: {0}")]
    NotRepresentable(String),
    #[error("holonomy coordinate {0} is zero")]
    ZeroHolonomy(usize),
    #[error("period matrix is degenerate")]
    DegeneratePeriodMatrix,
    #[error("tau is zero")]
    TauZero,
    #[error("matrix {0} has a zero eigenvalue")]
    ZeroEigenvalue(usize),
    #[error("merged marking is not cyclic")]
    MarkingNotCyclic,
    #[error("fiber space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Linalg(e) => e.code(),
            Error::NotAntisymmetric => "NotAntisymmetric",
            Error::SingularGroupElement => "SingularGroupElement",
            Error::NotCommuting(..) => "NotCommuting",
            Error::ZeroMarking => "ZeroMarking",
            Error::FlagNotInvariant { .. } => "FlagNotInvariant",
            Error::WeightsNotDecreasing => "WeightsNotDecreasing",
            Error::NotStable => "NotStable",
            Error::DuplicatePoint(..) => "DuplicatePoint",
            Error::LogAtZero => "LogAtZero",
            Error::NotRepresentable(_) => "NotRepresentable",
            Error::ZeroHolonomy(_) => "ZeroHolonomy",
            Error::DegeneratePeriodMatrix => "DegeneratePeriodMatrix",
            Error::TauZero => "TauZero",
            Error::ZeroEigenvalue(_) => "ZeroEigenvalue",
            Error::MarkingNotCyclic => "MarkingNotCyclic",
            Error::SpaceMismatch(_) => "SpaceMismatch",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
