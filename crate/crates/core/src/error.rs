use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point set needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),

    #[error("point {0} has a non-finite coordinate")]
    NonFinite(usize),

    #[error("degree bound {0} outside the supported range")]
    BadDegreeBound(usize),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("tree spans {tree} vertices but the point set has {points}")]
    SizeMismatch { tree: usize, points: usize },

    #[error("invalid edge swap: {0}")]
    InvalidSwap(String),

    #[error("instance of size {n} exceeds the oracle cap of {cap}")]
    OracleCap { n: usize, cap: usize },

    #[error("corrupted star specification: {0}")]
    Star(String),

    #[error("could not place stars after {0} attempts")]
    Placement(usize),

    #[error("chromosome is {rows}x{cols}, expected {n}x{delta}")]
    ChromosomeShape {
        rows: usize,
        cols: usize,
        n: usize,
        delta: usize,
    },

    #[error("odd-degree vertex parity violated: {0}")]
    Parity(String),

    #[error("matching failed: {0}")]
    Matching(String),

    #[error("algorithm {algorithm} does not support degree bound {delta}")]
    Incompatible { algorithm: String, delta: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
