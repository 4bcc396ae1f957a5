use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: malformed input: {text:?}")]
    MalformedLine { line: usize, text: String },

    #[error("unknown argument {0:?}")]
    UnknownArgument(String),

    #[error("argument {0:?} declared twice")]
    DuplicateArgument(String),

    #[error("TGF input has no '#' separator line")]
    MissingSeparator,

    #[error("framework has {size} arguments, limit for this operation is {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("property {0} is not expressible as a linear constraint system")]
    UnsupportedProperty(String),

    #[error("unknown property name {0:?}")]
    UnknownProperty(String),

    #[error("constraints are infeasible; conflicting constraints: {}", .certificate.join("; "))]
    Infeasible { certificate: Vec<String> },

    #[error("probability {value} for {argument:?} outside [0,1]")]
    InvalidProbability { argument: String, value: f64 },

    #[error("assignment does not cover argument {0:?}")]
    IncompleteAssignment(String),

    #[error("distribution is invalid: {0}")]
    InvalidDistribution(String),

    #[error("size mismatch: expected {expected} values, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("solver did not converge: {0}")]
    NoConvergence(String),
}
