use thiserror::Error;

use crate::weights::ChamberReport;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. Variant names double as the
/// stable error identifiers printed by the CLI.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("both homogeneous coordinates are zero")]
    InvalidProjectivePoint,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("rational function with zero denominator")]
    ZeroDenominator,
    #[error("cannot parse {what}: {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("total weight {0} is not an integer")]
    NonIntegerTotal(String),
    #[error("weight pair {index} violates 0 <= a1 < a2 < 1")]
    WeightOrderViolation { index: usize },
    #[error("degree {degree} outside the admissible range for n = {n}")]
    DegreeOutOfRange { degree: i64, n: usize },
    #[error("need at least 4 marked points, got {0}")]
    TooFewPoints(usize),
    #[error("operation requires {expected} degree")]
    ParityMismatch { expected: &'static str },
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("weights are outside the optimum chamber")]
    ChamberViolation(Box<ChamberReport>),
    #[error("marked points are not pairwise distinct or an interior point is infinite")]
    InvalidCurve,
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the last three flags are not pairwise distinct")]
    DegenerateTriple,
    #[error("parabolic structure is not stable")]
    UnstableInput,
    #[error("flag {index} lies on the distinguished line")]
    InfiniteFlag { index: usize },

    #[error("residue constraints violated: {residuals:?}")]
    ResidueConstraintViolation { residuals: Vec<String> },
    #[error("input is not in the required gauge: {0}")]
    GaugeViolation(&'static str),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("quadratic differential is identically zero")]
    ZeroDifferential,
    #[error("operation requires n = 4, got {0}")]
    WrongN(usize),
    #[error("cone polynomial has a root that is not a Gaussian rational")]
    NonRationalRoot,
}

impl Error {
    /// Stable identifier used in CLI reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidProjectivePoint => "InvalidProjectivePoint",
            Error::SingularMatrix => "SingularMatrix",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::Parse { .. } => "ParseError",
            Error::NonIntegerTotal(_) => "NonIntegerTotal",
            Error::WeightOrderViolation { .. } => "WeightOrderViolation",
            Error::DegreeOutOfRange { .. } => "DegreeOutOfRange",
            Error::TooFewPoints(_) => "TooFewPoints",
            Error::ParityMismatch { .. } => "ParityMismatch",
            Error::ConstraintViolation(_) => "ConstraintViolation",
            Error::ChamberViolation(_) => "ChamberViolation",
            Error::InvalidCurve => "InvalidCurve",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::DegenerateTriple => "DegenerateTriple",
            Error::UnstableInput => "UnstableInput",
            Error::InfiniteFlag { .. } => "InfiniteFlag",
            Error::ResidueConstraintViolation { .. } => "ResidueConstraintViolation",
            Error::GaugeViolation(_) => "GaugeViolation",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::ZeroDifferential => "ZeroDifferential",
            Error::WrongN(_) => "WrongN",
            Error::NonRationalRoot => "NonRationalRoot",
        }
    }
}
