use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("point set is not invariant under the permutation (point {point} leaves it)")]
    NotInvariant { point: usize },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("base candidates do not cover moved point {point}")]
    BaseCandidates { point: usize },

    #[error("chain was not built with an orbit-ordered base")]
    NotOrbitOrdered,

    #[error("index {index} out of range (expected {expected})")]
    IndexOutOfRange { index: usize, expected: String },

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("separability violated: {0}")]
    Separability(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("{orbits} orbits exceed the oracle cap of {cap}")]
    OrbitCap { orbits: usize, cap: usize },

    #[error("group order {order} exceeds the cap of {cap}")]
    OrderCap { order: String, cap: u64 },

    #[error("no acceptable instance after {attempts} attempts")]
    RetryBudget { attempts: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("time limit exceeded")]
    Timeout,
}
