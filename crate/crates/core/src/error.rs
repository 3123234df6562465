use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("lattice map is not an involution")]
    NotInvolution,

    #[error("characters belong to different quotient groups")]
    PresentationMismatch,

    #[error("weight {0} is not dominant")]
    NotDominant(String),

    #[error("Weyl group of order {order} exceeds the enumeration cap {cap}")]
    WeylCap { order: u128, cap: u128 },

    #[error("representation of dimension {dim} exceeds the dimension cap {cap}")]
    DimensionCap { dim: u128, cap: u128 },

    #[error("exterior algebra on {size} generators exceeds the cap of {cap}")]
    WedgeCap { size: usize, cap: usize },

    #[error("symmetric algebra generators admit no separating functional")]
    NoSeparatingFunctional,

    #[error("unsupported symmetric pair `{0}`")]
    UnsupportedPair(String),

    #[error("cannot parse {what}: {input}")]
    Parse { what: &'static str, input: String },

    #[error("not a genuine character: coefficient {coeff} at weight {weight}")]
    NotACharacter { weight: String, coeff: i64 },

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}
