use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown group name `{0}`")]
    UnknownGroup(String),

    #[error("group order exceeds cap of {cap}")]
    OrderCapExceeded { cap: usize },

    #[error("subgroup count exceeds cap of {cap}")]
    SubgroupCapExceeded { cap: usize },

    #[error("quotient order {order} exceeds cap of {cap}")]
    QuotientOrderCapExceeded { order: usize, cap: usize },

    #[error("permutation degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("generator {0} is not an element of the ambient group")]
    NotAnElement(String),

    #[error("subgroups are not nested")]
    NotNested,

    #[error("numeric rank ambiguous: relative eigenvalue {value:e} falls inside the ambiguity band")]
    NumericRankAmbiguous { value: f64 },

    #[error("element is not positive (min eigenvalue {min:e})")]
    NotPositive { min: f64 },

    #[error("biprojection check failed: {0}")]
    BiprojectionCheckFailed(String),

    #[error("elements belong to different contexts")]
    ContextMismatch,

    #[error("operation needs a trivial subgroup")]
    NotTrivialH,

    #[error("lattice is not boolean")]
    NotBoolean,

    #[error("element is not a biprojection")]
    NotABiprojection,

    #[error("basis does not span the algebra (rank {rank} < {dim})")]
    BasisNotSpanning { rank: usize, dim: usize },

    #[error("fusion axiom violated: {0}")]
    AxiomViolation(String),

    #[error("theorem violated: {0}")]
    TheoremViolation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::UnknownGroup(_) | Error::NotAnElement(_) | Error::Io(_) => 1,
            Error::OrderCapExceeded { .. }
            | Error::SubgroupCapExceeded { .. }
            | Error::QuotientOrderCapExceeded { .. } => 2,
            Error::NumericRankAmbiguous { .. } => 3,
            _ => 4,
        }
    }
}
