use thiserror::Error;

/// Errors raised by ring arithmetic, lattice routines and code construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not divisible by {1}")]
    NotDivisible(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd of two zero elements is undefined")]
    BothZero,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("dimension {0} exceeds the enumeration bound of 8")]
    DimensionTooLarge(usize),
    #[error("unsupported lattice: {0}")]
    UnsupportedLattice(String),
    #[error("coarse lattice is not a sublattice of the fine lattice")]
    NotNested,
    #[error("quotient of size {size} exceeds the enumeration cap {cap}")]
    IndexTooLarge { size: u128, cap: u128 },
    #[error("incompatible dimensions: {0}")]
    IncompatibleDimensions(String),
    #[error("lattices live in different coordinate frames")]
    IrrationalBasisMismatch,
    #[error("generator matrix is rank deficient")]
    RankDeficient,

    #[error("{0} is not prime in its ring")]
    NotPrime(String),
    #[error("{0} and {1} are associates")]
    AssociatePrimes(String, String),
    #[error("{0} is not odd")]
    NotOdd(i64),
    #[error("prime {0} appears more than once")]
    DuplicatePrime(i64),
    #[error("base lattice is not closed under right multiplication: {0}")]
    NotTwoSidedModule(String),
    #[error("encoder is not injective: alphabet product {product} != codebook size {codebook}")]
    NotInjective { product: u128, codebook: u128 },
    #[error("ring-level and geometric minimum distances disagree: {0}")]
    MismatchedOracles(String),
    #[error("subcode has fewer than two points")]
    DegenerateSubcode,
    #[error("codebook of size {size} exceeds the cap {cap}")]
    CodebookTooLarge { size: u128, cap: u128 },
    #[error("target error rate {0:e} is not bracketed by the curve")]
    TargetNotBracketed(f64),
    #[error("design margin d_min - 2 r_cov = {0} is not positive")]
    NegativeMargin(f64),
    #[error("enumeration of {size} items exceeds the cap {cap}")]
    TooLarge { size: u128, cap: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
