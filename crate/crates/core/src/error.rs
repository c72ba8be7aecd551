use thiserror::Error;

/// Errors raised by the library. Structural violations carry enough context to
/// locate the offending element.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("not connected: the permutations do not act transitively on [n]")]
    NotConnected,

    #[error("not a cactus: the product has {cycles} cycles")]
    NotACactus { cycles: usize },

    #[error("structural invariant violated: {0}")]
    Structural(String),

    #[error("enumeration cap exceeded: {needed} tuples requested, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("hyperdegree < 2 for the vertex of type {ty} labelled {label}")]
    HyperdegreeTooSmall { ty: usize, label: usize },

    #[error("length profile mismatch: {0}")]
    ProfileMismatch(String),

    #[error("invalid prebidding: {0}")]
    InvalidPrebidding(String),

    #[error("invalid bidding: {0}")]
    InvalidBidding(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("probability undefined: the sample space is empty")]
    UndefinedProbability,

    #[error("acceptance rate too low: {accepted} accepted out of {attempts} attempts")]
    AcceptanceTooLow { accepted: u64, attempts: u64 },

    #[error("internal disagreement: {0}")]
    InternalDisagreement(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
