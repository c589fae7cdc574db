use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(
        "characteristic {0} is too small (p > 3 is required; p = 3 needs the explicit override)"
    )]
    CharacteristicTooSmall(u64),
    #[error("prime {0} exceeds the supported width (p < 2^32)")]
    PrimeTooLarge(u64),
    #[error("extension degree must be positive, got {0}")]
    InvalidDegree(usize),
    #[error("field GF({p}^{d}) exceeds the configured size budget of 2^{bits}")]
    FieldTooLarge { p: u64, d: usize, bits: u32 },
    #[error("operands belong to different field contexts")]
    ContextMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{n} does not divide the group order {order}")]
    NotDividing { n: u128, order: u128 },
    #[error("the zero polynomial has no well-defined root set")]
    ZeroPolynomial,
    #[error("Artin invariant must lie in 1..=10, got {0}")]
    InvalidSigma(usize),
    #[error("working degree {degree} is not a positive multiple of 2*sigma = {needed}")]
    WorkingDegree { degree: usize, needed: usize },
    #[error("discriminant self-check failed: {0}")]
    DiscriminantCheck(String),
    #[error("{what}: {needed} exceeds budget {budget}")]
    BudgetExceeded {
        what: String,
        needed: u128,
        budget: u128,
    },
    #[error("basis has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subspace is not strictly characteristic: {0}")]
    NotCharacteristic(String),
    #[error("v1 . v(sigma+1) cannot be normalized to 1 inside the working field; enlarge the working degree")]
    NotNormalizable,
    #[error("intersection matrix shape violated: {0}")]
    ShapeViolation(String),
    #[error("m = {m} is not admissible for sigma = {sigma}")]
    InadmissibleM { sigma: usize, m: usize },
    #[error("no m <= {bound} with F^-m(xi) = xi^-1; xi lies outside the expected roots of unity")]
    EigenvalueOutOfRange { bound: usize },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("gcd({p}, {n}) > 1")]
    NotCoprime { p: u64, n: u64 },
    #[error("vector has norm {got}, expected {expected}")]
    NormMismatch { expected: i64, got: String },
    #[error("degenerate lattice (Gram determinant is zero)")]
    DegenerateLattice,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("unknown lattice name {0:?}")]
    UnknownLattice(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::CharacteristicTooSmall(_) => "characteristic_too_small",
            Error::PrimeTooLarge(_) => "prime_too_large",
            Error::InvalidDegree(_) => "invalid_degree",
            Error::FieldTooLarge { .. } => "field_too_large",
            Error::ContextMismatch => "context_mismatch",
            Error::DivisionByZero => "division_by_zero",
            Error::NotDividing { .. } => "not_dividing",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::InvalidSigma(_) => "invalid_sigma",
            Error::WorkingDegree { .. } => "working_degree",
            Error::DiscriminantCheck(_) => "discriminant_check",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::RankDeficient { .. } => "rank_deficient",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotCharacteristic(_) => "not_characteristic",
            Error::NotNormalizable => "not_normalizable",
            Error::ShapeViolation(_) => "shape_violation",
            Error::InadmissibleM { .. } => "inadmissible_m",
            Error::EigenvalueOutOfRange { .. } => "eigenvalue_out_of_range",
            Error::InvariantViolation(_) => "invariant_violation",
            Error::NotCoprime { .. } => "not_coprime",
            Error::NormMismatch { .. } => "norm_mismatch",
            Error::DegenerateLattice => "degenerate_lattice",
            Error::NotSymmetric => "not_symmetric",
            Error::UnknownLattice(_) => "unknown_lattice",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
