use thiserror::Error;

/// Broad failure category, used by callers to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad inputs: malformed data, inconsistent dimensions, invalid settings.
    Validation,
    /// The computation itself broke down (non-finite values, factorization
    /// failures, degenerate traces).
    Numerical,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("degenerate bounds on axis {axis}: min == max == {value}")]
    DegenerateBounds { axis: char, value: f64 },

    #[error("axis {axis} has {distinct} distinct coordinate(s) but {requested} knots were requested")]
    TooFewDistinctCoordinates {
        axis: char,
        distinct: usize,
        requested: usize,
    },

    #[error("duplicate knot at ({x}, {y})")]
    DuplicateKnot { x: f64, y: f64 },

    #[error("non-finite coordinates for point(s): {ids}")]
    NonFinitePoints { ids: String },

    #[error("reflectance {value} outside [0, 1] for record {id}")]
    ReflectanceOutOfRange { id: String, value: f64 },

    #[error("dimension mismatch for {name}: expected {expected}, got {got}")]
    DimensionMismatch {
        name: &'static str,
        expected: String,
        got: String,
    },

    #[error("cover type {category} has {available} eligible site(s), {requested} requested")]
    TooFewSitesInCategory {
        category: usize,
        available: usize,
        requested: usize,
    },

    #[error("cover-type weights for site {id} are all zero")]
    AllZeroWeights { id: String },

    #[error("non-finite {what}: {value}")]
    NonFinite { what: String, value: f64 },

    #[error(
        "initial log posterior is not finite ({value}); adjust the starting state or priors and re-initialize"
    )]
    BadInitialState { value: f64 },

    #[error("covariance factorization failed even after adding diagonal jitter")]
    CovarianceFactorization,

    #[error("slice sampler could not find an acceptable point after {steps} shrinkage steps")]
    SliceShrinkageExhausted { steps: u32 },

    #[error("trace of length {0} is too short for an ESS estimate (need >= 10)")]
    TraceTooShort(usize),

    #[error("joint enumeration needs {assignments} assignments, above the limit of {limit}")]
    JointEnumerationTooLarge { assignments: f64, limit: f64 },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_)
            | Error::Data(_)
            | Error::DegenerateBounds { .. }
            | Error::TooFewDistinctCoordinates { .. }
            | Error::DuplicateKnot { .. }
            | Error::NonFinitePoints { .. }
            | Error::ReflectanceOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::TooFewSitesInCategory { .. }
            | Error::JointEnumerationTooLarge { .. } => ErrorClass::Validation,
            Error::AllZeroWeights { .. }
            | Error::NonFinite { .. }
            | Error::BadInitialState { .. }
            | Error::CovarianceFactorization
            | Error::SliceShrinkageExhausted { .. }
            | Error::TraceTooShort(_) => ErrorClass::Numerical,
        }
    }
}
