use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Domain errors. `name()` gives the stable upper-case identifier used by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prefix code")]
    NotACode(String),
    #[error("{0} has no prefix in the domain code")]
    RefinementOutsideDomain(String),
    #[error("arity {0} does not match arity {1}")]
    ArityMismatch(u8, u8),
    #[error("table is not invertible: {0}")]
    NotInvertible(String),
    #[error("element is not in the group")]
    NotGroupElement,
    #[error("composite has empty domain")]
    EmptyComposite,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("bad transposition indices ({0},{1})")]
    BadTauIndex(usize, usize),
    #[error("token `{0}` has no inverse")]
    NotInvertibleToken(String),
    #[error("expected input of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{needed} exceeds the cap {cap}")]
    CapExceeded { needed: usize, cap: usize },
    #[error("function is not a bijection")]
    NotBijective,
    #[error("size {size} is smaller than the input width {m}")]
    BadSize { size: usize, m: usize },
    #[error("circuit contains {0} gates; desugar it first")]
    NotDesugared(String),
    #[error("not length-equality preserving: {0}")]
    NotLep(String),
    #[error("circuit has no inputs or no outputs")]
    EmptyInput,
    #[error("circuits are not mutually inverse: {0}")]
    NotInversePair(String),
    #[error("no circuit of size <= {cap} computes {what}")]
    CapTooSmall { cap: usize, what: String },
    #[error("search frontier exceeded {0} nodes")]
    FrontierLimit(usize),
    #[error("{0} is missing from a length profile")]
    DomainNotCovered(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotACode(_) => "NOT_A_CODE",
            Error::RefinementOutsideDomain(_) => "REFINEMENT_OUTSIDE_DOMAIN",
            Error::ArityMismatch(..) => "ARITY_MISMATCH",
            Error::NotInvertible(_) => "NOT_INVERTIBLE",
            Error::NotGroupElement => "NOT_GROUP_ELEMENT",
            Error::EmptyComposite => "EMPTY_COMPOSITE",
            Error::UnknownGenerator(_) => "UNKNOWN_GENERATOR",
            Error::BadTauIndex(..) => "BAD_TAU_INDEX",
            Error::NotInvertibleToken(_) => "NOT_INVERTIBLE_TOKEN",
            Error::LengthMismatch { .. } => "LENGTH_MISMATCH",
            Error::CapExceeded { .. } => "CAP_EXCEEDED",
            Error::NotBijective => "NOT_BIJECTIVE",
            Error::BadSize { .. } => "BAD_SIZE",
            Error::NotDesugared(_) => "NOT_DESUGARED",
            Error::NotLep(_) => "NOT_LEP",
            Error::EmptyInput => "EMPTY_INPUT",
            Error::NotInversePair(_) => "NOT_INVERSE_PAIR",
            Error::CapTooSmall { .. } => "CAP_TOO_SMALL",
            Error::FrontierLimit(_) => "FRONTIER_LIMIT",
            Error::DomainNotCovered(_) => "DOMAIN_NOT_COVERED",
            Error::Parse(_) => "PARSE_ERROR",
        }
    }
}
