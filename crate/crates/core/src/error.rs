use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: moduli must be positive")]
    InvalidModulus(i128),

    #[error("a residue system needs at least one class")]
    EmptySystem,

    #[error("weight vector has length {weights}, expected {classes}")]
    WeightLengthMismatch { classes: usize, weights: usize },

    #[error("total weight magnitude does not fit in a 64-bit integer")]
    WeightOverflow,

    #[error("period {period} exceeds the enumeration cap {cap}")]
    PeriodTooLarge { period: BigUint, cap: u64 },

    #[error("invalid cyclotomic order {0}: orders must be positive")]
    InvalidOrder(i128),

    #[error("cyclotomic order mismatch: {lhs} vs {rhs}")]
    OrderMismatch { lhs: u64, rhs: u64 },

    #[error("invalid frequency {c}/{d}: {reason}")]
    InvalidFrequency { c: i128, d: i128, reason: &'static str },

    #[error("this check needs at least two classes, got {0}")]
    TooFewClasses(usize),

    #[error("this check is defined for unit weights only")]
    NonUnitWeights,

    #[error("moduli must be pairwise distinct, {0} repeats")]
    RepeatedModulus(u64),

    #[error("residue {residue} is outside [0, {order})")]
    ResidueOutOfRange { residue: u64, order: u64 },

    #[error("invalid construction parameter: {0}")]
    InvalidConstruction(String),

    #[error("constructed system failed self-verification: {0}")]
    ConstructionCheckFailed(String),

    #[error("modulus pool too small: need {needed} distinct moduli, pool has {available}")]
    PoolTooSmall { needed: usize, available: usize },

    #[error("invalid generator parameter: {0}")]
    InvalidGenerator(String),
}
