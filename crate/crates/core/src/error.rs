use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("precision must be at least one digit")]
    ZeroPrecision,
    #[error("hensel lifting is not supported for p = 2")]
    UnsupportedPrime,
    #[error("square root of zero has no unit part")]
    ZeroSquareRoot,
    #[error("valuation {0} is odd, no square root in Q_p")]
    OddValuation(i64),
    #[error("residue {residue} is not a square modulo {p}")]
    NotASquare { residue: u64, p: u64 },
    #[error("the fixed points are not rational over Q_p (discriminant is a p-adic non-square)")]
    NotASquareInQp,
    #[error("the identity fixes every point")]
    IdentityHasNoFixedPoints,
    #[error("matrix is singular")]
    Singular,
    #[error("point lies inside the disk")]
    PointInsideDisk,
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("coefficient of degree {0} has absolute value > 1")]
    CoefficientTooLarge(usize),
    #[error("axiom ({axiom}) fails: {detail}")]
    AxiomViolation { axiom: u8, detail: String },
    #[error("group has not been verified")]
    NotVerified,
    #[error("word is not reduced at position {0}")]
    NotReduced(usize),
    #[error("letter refers to generator {0}, group has rank {1}")]
    UnknownGenerator(usize, usize),
    #[error("reduction did not reach the fundamental domain within {0} steps")]
    MaxStepsExceeded(usize),
    #[error("point lies in a depth-{0} cover disk")]
    PointNearLimitSet(usize),
    #[error("no word of length <= {0} has its disk inside the target")]
    DepthExceeded(usize),
    #[error("the target disk does not contain B(prefix)")]
    TargetMissesPrefix,
    #[error("cyclic links in the flat at coordinate {0}")]
    CyclicLinks(usize),
    #[error("invalid flat: {0}")]
    InvalidFlat(String),
    #[error("parse error in {field}: {message}")]
    Parse { field: String, message: String },
}

impl Error {
    pub(crate) fn parse(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
