use alloc::string::String;

/// Every failure the toolkit can report.
///
/// Variants fall in two groups: input errors (bad labels, malformed
/// scalars, structures that do not satisfy a precondition) and internal
/// self-check failures, which should be unreachable and indicate a bug.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("label {label} out of range 1..={n}")]
    BadLabel { label: usize, n: usize },
    #[error("relation contains a cycle through {x} and {y}")]
    CycleDetected { x: usize, y: usize },
    #[error("{x} is not below {y}")]
    NotComparable { x: usize, y: usize },
    #[error("approximation class {class} projects onto several sim classes")]
    ProjectionBroken { class: usize },
    #[error("poset size {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },

    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar {0:?}")]
    ParseError(String),
    #[error("{0:?} has no value in the field")]
    NotInField(String),

    #[error("operands belong to different algebras")]
    MixedContext,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("sigma is not constant on chains: pairs {first:?} and {second:?} disagree")]
    ChainConflict {
        first: (usize, usize),
        second: (usize, usize),
    },
    #[error("invalid mu table: {0}")]
    BadMu(String),
    #[error("linear map is not in the centroid")]
    NotCentroid,
    #[error("linear map is not an automorphism")]
    NotAutomorphism,
    #[error("linear map is not an antiautomorphism")]
    NotAntiautomorphism,
    #[error("linear map is singular")]
    Singular,
    #[error("duplicate structure entry for {a:?} x {b:?}")]
    DuplicateEntry { a: (usize, usize), b: (usize, usize) },

    #[error("product is not a totally compatible structure: {0}")]
    NotTotallyCompatible(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("certificate verification failed: {0}")]
    VerificationFailed(String),
    #[error("self-check failed: {0}")]
    SelfCheckFailed(String),
    #[error("span mismatch in {0} check")]
    SpanMismatch(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::BadLabel { .. } => "BadLabel",
            Error::CycleDetected { .. } => "CycleDetected",
            Error::NotComparable { .. } => "NotComparable",
            Error::ProjectionBroken { .. } => "ProjectionBroken",
            Error::TooLarge { .. } => "TooLarge",
            Error::NotPrime(_) => "NotPrime",
            Error::DivisionByZero => "DivisionByZero",
            Error::ParseError(_) => "ParseError",
            Error::NotInField(_) => "NotInField",
            Error::MixedContext => "MixedContext",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ChainConflict { .. } => "ChainConflict",
            Error::BadMu(_) => "BadMu",
            Error::NotCentroid => "NotCentroid",
            Error::NotAutomorphism => "NotAutomorphism",
            Error::NotAntiautomorphism => "NotAntiautomorphism",
            Error::Singular => "Singular",
            Error::DuplicateEntry { .. } => "DuplicateEntry",
            Error::NotTotallyCompatible(_) => "NotTotallyCompatible",
            Error::InternalInconsistency(_) => "InternalInconsistency",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::SelfCheckFailed(_) => "SelfCheckFailed",
            Error::SpanMismatch(_) => "SpanMismatch",
        }
    }

    /// True for failures that signal a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::ProjectionBroken { .. }
                | Error::InternalInconsistency(_)
                | Error::VerificationFailed(_)
                | Error::SelfCheckFailed(_)
                | Error::SpanMismatch(_)
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
