use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),

    #[error("prime {p} divides the index [O_K : Z[theta]]; splitting cannot be read from the defining polynomial")]
    IndexPrimeUnsupported { p: u64 },

    #[error("descriptor schema error: {0}")]
    Schema(String),

    #[error("invariant violated ({invariant}): {detail}")]
    InvariantViolation {
        invariant: &'static str,
        detail: String,
    },

    #[error("defining polynomial is reducible over Q: {0}")]
    ReducibleDefiningPolynomial(String),

    #[error("class-number data missing: key `{0}` not supplied")]
    MissingClassData(&'static str),

    #[error("residue kappa_K is required but was not supplied")]
    MissingResidue,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("structure flags insufficient to select a Stark case: {0}")]
    UnknownStructureFlags(&'static str),

    #[error("no prime ideal has norm <= {x}")]
    EmptyProduct { x: f64 },

    #[error("x = {x} exceeds the dense-sieve limit {limit}")]
    SieveLimit { x: f64, limit: f64 },
}

impl Error {
    pub(crate) fn invariant(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::InvariantViolation {
            invariant,
            detail: detail.into(),
        }
    }
}
