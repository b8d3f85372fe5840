use thiserror::Error;

/// Errors raised while building or checking finite structures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("order is not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("elements `{a}` and `{b}` have no {kind}")]
    MissingBound {
        a: String,
        b: String,
        kind: &'static str,
    },
    #[error("lattice is not a frame: a ∧ (b ∨ c) ≠ (a ∧ b) ∨ (a ∧ c) at ({0}, {1}, {2})")]
    NotAFrame(String, String, String),
    #[error("adjoint undefined: map does not preserve {kind} at {witness}")]
    AdjointUndefined { kind: &'static str, witness: String },
    #[error("quantale law `{law}` fails at {witness}")]
    QuantaleLaw { law: &'static str, witness: String },
    #[error("partial units require a unit")]
    NotUnital,
    #[error("hypothesis unmet: {0}")]
    Hypothesis(String),
    #[error("inverse semigroup axiom `{law}` fails at {witness}")]
    SemigroupLaw { law: &'static str, witness: String },
    #[error("not an abstract complete pseudogroup: {0}")]
    NotAcp(String),
    #[error("groupoid law `{law}` fails at {witness}")]
    GroupoidLaw { law: &'static str, witness: String },
    #[error("not a topology: {0}")]
    NotTopology(String),
    #[error("groupoid multiplication not open: {0}")]
    MultiplicationNotOpen(String),
    #[error("not spatial at finite scale: {0}")]
    NotSpatial(String),
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error("operands live over different bases")]
    BaseMismatch,
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("action is not by partial open embeddings: {0}")]
    BadAction(String),
    #[error("structure too large: {0}")]
    TooLarge(String),
    #[error("{path}: parse error: {msg}")]
    Parse { path: String, msg: String },
    #[error("{path}: invalid `{field}`: {msg}")]
    Validation {
        path: String,
        field: String,
        msg: String,
    },
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
