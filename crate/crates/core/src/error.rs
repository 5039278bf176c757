use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("rank 1 has no proper subalgebra in the chain")]
    NoSubalgebra,
    #[error("root interval ({i}, {j}) is not valid at rank {rank}")]
    InvalidRoot { i: usize, j: usize, rank: usize },
    #[error("monomial index is not in the admissible cone: {0}")]
    NotInPi(String),
    #[error("entry k_{i}^{j} is not fixed yet")]
    UnsetEntry { i: usize, j: usize },
    #[error("leading element of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("{what} exceeded the cap of {cap}")]
    ResourceCap { what: &'static str, cap: usize },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("cannot parse {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
