use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("order {order} is not a power of {p}")]
    NotPrimePower { order: usize, p: u64 },
    #[error("group order {order} exceeds the configured cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
    #[error("element set is not a subgroup")]
    NotSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u32),
    #[error("value is not p-integral for p = {0}")]
    NotIntegral(u64),
    #[error("conductor {n} is not a power of {p}")]
    BadConductor { n: u32, p: u64 },
    #[error("element is not a unit")]
    NotUnit,
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("input outside the convergence domain: {0}")]
    Domain(String),
    #[error("integrality certificate failed: {0}")]
    NonIntegral(String),
    #[error("character engine failure: {0}")]
    Engine(String),
    #[error("index {index} out of range (len {len})")]
    OutOfRange { index: usize, len: usize },
    #[error("pair is not below the other in the character poset")]
    NotComparable,
    #[error("tuple does not cover {0}")]
    Uncovered(String),
    #[error("decomposition does not sum to the character")]
    BadDecomposition,
    #[error("unsupported prime {0}")]
    UnsupportedPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
