use thiserror::Error;

/// Errors shared by the allocator, codec and file-format layers.
///
/// `KraftViolation` is the only error that can occur on well-formed input;
/// everything else is either a malformed-input report or a signal of an
/// internal accounting bug (`LedgerUnderflow`).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid bit character {0:?}; expected '0' or '1'")]
    InvalidBit(char),

    #[error("ledger underflow: cannot pay {amount} out of {balance}")]
    LedgerUnderflow { balance: String, amount: String },

    #[error("kraft violation: requested space exceeds what remains")]
    KraftViolation,

    #[error("unknown node id {0}")]
    UnknownNode(usize),

    #[error("invalid label {0}: labels must be at least 1")]
    InvalidLabel(u32),

    #[error("tree rejected the operation: a kraft violation already occurred")]
    Poisoned,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid length function: kraft sum {sum} exceeds 1")]
    InvalidLengthFunction { sum: String },

    #[error("no codeword recorded for prefix {0}")]
    EncodeFailure(String),

    #[error("instance exceeds exhaustive-search capacity: {0}")]
    Capacity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code: 0 is success, 1 a kraft violation, 2 malformed input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::KraftViolation | Error::Poisoned => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
