use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("depth {depth} exceeds the limit of {max}")]
    DepthTooLarge { depth: u32, max: u32 },

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("height 0 is a leaf and has no mover")]
    LeafHasNoMover,

    #[error("expected {expected} payoffs for depth {depth}, got {got}")]
    PayoffLength { depth: u32, expected: u64, got: u64 },

    #[error("payoff at leaf {index} is {found}, expected 0 or 1")]
    PayoffNotBit { index: usize, found: u8 },

    #[error("enumerating {subsets} flip sets exceeds the brute-force limit of {limit}")]
    EnumerationTooLarge { subsets: u128, limit: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed game file at byte {offset}: {reason}")]
    Malformed { offset: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
