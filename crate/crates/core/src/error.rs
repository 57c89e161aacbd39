use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant is a domain error: the inputs were well formed but do not
/// describe a valid object, or the requested computation is undefined for
/// them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("field of order {p}^{a} exceeds the supported bound of {max} elements")]
    FieldTooLarge { p: u64, a: u32, max: u64 },

    #[error("no element of order {m}: {m} does not divide q - 1 = {group_order}")]
    NoRootOfUnity { m: u64, group_order: u64 },

    #[error("division by zero in F_{q}")]
    DivisionByZero { q: u64 },

    #[error("operands live in different fields (F_{left} and F_{right})")]
    FieldMismatch { left: u64, right: u64 },

    #[error("invalid field element: {0}")]
    InvalidElement(String),

    #[error("the zero Laurent polynomial has no {0}")]
    ZeroPolynomial(&'static str),

    #[error("disconnected cover: standard form is zero, conductor undefined")]
    Disconnected,

    #[error("invalid cover: {0}")]
    InvalidCover(String),

    #[error("action not irreducible: [F_p(z):F_p] = {degree}, expected a = {a}")]
    ReducibleAction { degree: u32, a: u32 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("argument must be nonnegative, got {0}")]
    NegativeArgument(String),

    #[error("invalid dimension datum: {0}")]
    InvalidDatum(String),

    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    #[error("invalid tower: {0}")]
    InvalidTower(String),

    #[error("step {step} is not totally ramified: {reason}")]
    NotTotallyRamified { step: String, reason: String },

    #[error("precision exhausted at {precision} terms: {what}")]
    PrecisionExhausted { precision: usize, what: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::ZeroDegree => "zero_degree",
            Error::FieldTooLarge { .. } => "field_too_large",
            Error::NoRootOfUnity { .. } => "no_root_of_unity",
            Error::DivisionByZero { .. } => "division_by_zero",
            Error::FieldMismatch { .. } => "field_mismatch",
            Error::InvalidElement(_) => "invalid_element",
            Error::ZeroPolynomial(_) => "zero_polynomial",
            Error::Disconnected => "disconnected",
            Error::InvalidCover(_) => "invalid_cover",
            Error::ReducibleAction { .. } => "reducible_action",
            Error::Unsupported(_) => "unsupported",
            Error::InvalidFiltration(_) => "invalid_filtration",
            Error::NegativeArgument(_) => "negative_argument",
            Error::InvalidDatum(_) => "invalid_datum",
            Error::Inconsistent(_) => "inconsistent",
            Error::InvalidTower(_) => "invalid_tower",
            Error::NotTotallyRamified { .. } => "not_totally_ramified",
            Error::PrecisionExhausted { .. } => "precision_exhausted",
        }
    }
}
