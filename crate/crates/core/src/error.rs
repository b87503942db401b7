use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("complex input is empty")]
    EmptyComplex,

    #[error("simplex {0:?} is empty or repeats a vertex")]
    InvalidSimplex(Vec<usize>),

    #[error("simplex {simplex:?} has dimension above the configured maximum {max}")]
    DimensionTooLarge { simplex: Vec<usize>, max: usize },

    #[error("vertex {vertex} is out of range for a complex with {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("simplex {0:?} is not in the complex")]
    UnknownSimplex(Vec<usize>),

    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("filtering functions have {left} and {right} components")]
    ComponentMismatch { left: usize, right: usize },

    #[error("filtration values must be finite")]
    NonFiniteValue,

    #[error("filtration is not monotone on simplex {0:?}")]
    NonMonotone(Vec<usize>),

    #[error("invalid simplex order: {0}")]
    InvalidOrder(String),

    #[error("expected u ≺ v componentwise")]
    NotStrictlyBelow,

    #[error("invalid epsilon: {0}")]
    InvalidEpsilon(String),

    #[error("rank function produced a negative multiplicity at {0}")]
    NegativeMultiplicity(String),

    #[error("field characteristic {0} is not prime")]
    NotPrime(u64),

    #[error("brute-force matching supports at most {cap} points per diagram, got {points}")]
    TooManyPoints { points: usize, cap: usize },

    #[error("pair is not admissible: {0}")]
    NotAdmissible(String),

    #[error("scheme {0} needs roots that are not exact; use float mode")]
    RequiresFloat(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("cannot parse {0:?} as a number")]
    ParseNumber(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse_number(text: &str) -> Self {
        Error::ParseNumber(text.to_string())
    }
}
