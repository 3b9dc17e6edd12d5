use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("linear system has no solution")]
    NoSolution,

    #[error("malformed circuit at node {node}: {reason}")]
    MalformedCircuit { node: usize, reason: String },

    #[error("degree cap {cap} is below the degree bound {needed}")]
    DegreeCapTooSmall { cap: u32, needed: u32 },

    #[error("letter {letter} out of range for alphabet of size {alphabet}")]
    LetterOutOfRange { letter: usize, alphabet: usize },

    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),

    #[error("explosion guard: {what} would need {size} items, cap is {cap}")]
    ExplosionGuard { what: String, size: String, cap: u64 },

    #[error("family member {member} vanishes on the whole grid")]
    Unhittable { member: usize },

    #[error("family member {member} is the zero polynomial")]
    ZeroMember { member: usize },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("variable mismatch: {0}")]
    VariableMismatch(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("group element is singular")]
    SingularGroupElement,

    #[error("hitting-set coordinate is negative")]
    NegativeCoordinate,

    #[error("expansion exceeds {limit} terms")]
    ExpansionTooLarge { limit: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
