use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NcpError {
    #[error("universe size {0} is outside the supported range 1..=9")]
    UnsupportedSize(usize),

    #[error("objects live over different universes (n={left} vs n={right})")]
    UniverseMismatch { left: u8, right: u8 },

    #[error("element {element} is not in 1..={n}")]
    ElementOutOfRange { element: u8, n: u8 },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("partition {0} is crossing")]
    Crossing(String),

    #[error("parts do not form a partition of 1..={n}: {reason}")]
    NotAPartition { n: u8, reason: String },

    #[error("not a chain: {0}")]
    NotAChain(String),

    #[error("{operation} needs n <= {max}, got n={n}")]
    TooLarge {
        operation: &'static str,
        n: u8,
        max: u8,
    },

    #[error("malformed pattern {0:?}")]
    BadPattern(String),

    #[error("fixture data: {0}")]
    Fixture(String),
}

pub type Result<T> = std::result::Result<T, NcpError>;
