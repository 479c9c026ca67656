use thiserror::Error;

/// Failure modes shared by every module. Witnesses are rendered in the
/// canonical text form so that errors stay independent of the coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("dimension mismatch: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },
    #[error("not a p-th power: {0}")]
    NotPthPower(String),
    #[error("infinite multiplicity: the zero polynomial is divisible by every power")]
    InfiniteMultiplicity,
    #[error("inconsistent prime: {0}")]
    InconsistentPrime(String),
    #[error("precondition violated ({what}); witness: {witness}")]
    Precondition { what: String, witness: String },
    #[error("saturation failure; common factor {witness}")]
    Saturation { witness: String },
    #[error("euler failure; contraction with the radial field is {witness}")]
    Euler { witness: String },
    #[error("integrability failure; w ^ dw = {witness}")]
    Integrability { witness: String },
    #[error("degenerate intersection: the two forms are proportional")]
    DegenerateIntersection,
    #[error("degenerate pullback: {0}")]
    DegeneratePullback(String),
    #[error("inseparable map: the Jacobian determinant vanishes identically")]
    InseparableMap,
    #[error("invariant hypersurface: {0}")]
    InvariantHypersurface(String),
    #[error("bad reduction at p = {p}: {reason}")]
    BadReduction { p: u64, reason: String },
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("field too large: {0} elements exceed the table limit")]
    FieldTooLarge(u64),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown variable `{name}` at {line}:{col}")]
    UnknownVariable { name: String, line: usize, col: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// The part of the library an error originates from.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Parse { .. } | Error::UnknownVariable { .. } => "text",
            Error::NotPthPower(_) | Error::InfiniteMultiplicity => "poly",
            Error::FieldTooLarge(_) => "field",
            Error::Precondition { .. }
            | Error::Saturation { .. }
            | Error::Euler { .. }
            | Error::Integrability { .. }
            | Error::DegenerateIntersection => "foliation",
            Error::DegeneratePullback(_) | Error::InseparableMap | Error::InvariantHypersurface(_) => "maps",
            Error::BadReduction { .. } | Error::InconsistentPrime(_) => "models",
            Error::Unsupported(_) | Error::DegenerateInput(_) | Error::DimensionMismatch { .. } | Error::Internal(_) => "core",
        }
    }
}
