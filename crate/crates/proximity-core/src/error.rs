//! Error types shared across the crate.

use thiserror::Error;

/// Errors from construction, certification, and solving.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // Metric space construction.
    #[error("a metric space needs at least one point")]
    EmptySpace,
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("distance table: {0}")]
    TableShape(String),
    #[error("d({p:?},{q:?}) = {value} is not a finite number")]
    NonFiniteDistance { p: String, q: String, value: f64 },
    #[error("d({p:?},{p:?}) = {value}; the diagonal must be exactly zero")]
    NonZeroDiagonal { p: String, value: f64 },
    #[error("d({p:?},{q:?}) = {pq} differs from d({q:?},{p:?}) = {qp}")]
    AsymmetricDistance { p: String, q: String, pq: f64, qp: f64 },
    #[error("d({p:?},{q:?}) = {value}; distinct points need a positive distance")]
    NonPositiveDistance { p: String, q: String, value: f64 },
    #[error(
        "triangle inequality fails: d({p:?},{r:?}) = {lhs} exceeds d({p:?},{q:?}) + d({q:?},{r:?}) = {rhs}"
    )]
    TriangleViolation { p: String, q: String, r: String, lhs: f64, rhs: f64 },

    // Problem construction.
    #[error("point {0:?} is not in the space")]
    UnknownPoint(String),
    #[error("{which} must be a nonempty subset of the space's points")]
    EmptySubset { which: &'static str },
    #[error("{which}: {detail}")]
    InvalidMapping { which: &'static str, detail: String },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("the proximal core of {which} is empty")]
    EmptyCore { which: &'static str },

    // F-functions.
    #[error("F is only defined for positive arguments, got {0}")]
    NonPositiveArgument(f64),
    #[error("custom F table has no sample at {0}")]
    UnsampledPoint(f64),
    #[error("k exponent must lie strictly between 0 and 1, got {0}")]
    InvalidKExponent(f64),
    #[error("custom F table: {0}")]
    InvalidTable(String),
    #[error("grid: {0}")]
    InvalidGrid(String),
    #[error("probe sequence: {0}")]
    InvalidProbe(String),

    // Solver.
    #[error("{0:?} is not in the proximal core of s1")]
    NotInCore(String),
    #[error("phi({x:?}) = {image:?} has no psi-preimage in the proximal core")]
    NoPreimage { x: String, image: String },
    #[error("phi({x:?}) = {image:?} is attained by no core point at the set distance")]
    NoAttainment { x: String, image: String },
    #[error("phi({x:?}) = {phi:?} but psi({x:?}) = {psi:?}; not a coincidence point")]
    NotCoincidence { x: String, phi: String, psi: String },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("trace too short to audit: {0}")]
    InsufficientTrace(String),
    #[error("psi is not injective on the proximal core: {x1:?} and {x2:?} share an image")]
    PsiNotInjective { x1: String, x2: String },
    #[error("precondition not certified: {0}")]
    NotCertified(String),

    // Gallery builders.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sample is not closed under the maps; missing images: {missing:?}")]
    SampleNotClosed { missing: Vec<String> },
    #[error("sample is missing required image values: {missing:?}")]
    SampleMissingImages { missing: Vec<String> },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Problem-file parse failure, anchored to a 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}
