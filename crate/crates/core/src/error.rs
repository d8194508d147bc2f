use thiserror::Error;

/// Errors raised by fan, divisor and cohomology computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension n = {0} is not supported: the blow-up constructions require n >= 3")]
    DimensionTooSmall(usize),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("fan is not complete: facet {facet:?} is shared by {count} maximal cone(s)")]
    NotComplete { facet: Vec<usize>, count: usize },

    #[error("cone {cone:?} is not a maximal cone of the fan")]
    NotMaximal { cone: Vec<usize> },

    #[error("cone {cone:?} is not smooth")]
    NotSmooth { cone: Vec<usize> },

    #[error("generator matrix of cone {cone:?} is singular")]
    SingularCone { cone: Vec<usize> },

    #[error("divisor is not Cartier on cone {cone:?}")]
    NotCartier { cone: Vec<usize> },

    #[error("fine cone {cone:?} is contained in no cone of the coarse fan")]
    NotRefinement { cone: Vec<usize> },

    #[error("pullback is inconsistent at ray {ray}")]
    InconsistentPullback { ray: usize },

    #[error("vector {0:?} lies in no maximal cone")]
    NotInSupport(Vec<String>),

    #[error("the rays of the fan do not span the lattice")]
    RaysDoNotSpan,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("search box holds {size} characters, above the cap of {cap}")]
    CapExceeded { size: String, cap: u64 },

    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
