use thiserror::Error;

/// Errors produced by the palstruct library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid palindrome array: {0}")]
    InvalidPalArray(String),

    #[error("array is not the Manacher array of any string: {0}")]
    NotAManacherArray(String),

    #[error("malformed bit stream: {0}")]
    MalformedStream(String),

    #[error("corrupt input: {0}")]
    CorruptInput(String),

    #[error("{what} {index} out of range (limit {limit})")]
    OutOfBounds {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error(
        "density constraint violated by entries ({first_index}, {first_value}) and ({second_index}, {second_value})"
    )]
    ConstraintViolation {
        first_index: usize,
        first_value: u64,
        second_index: usize,
        second_value: u64,
    },

    #[error("value {value} does not fit in {bits} bits")]
    ValueOverflow { value: u64, bits: u32 },

    #[error("slot collision at level {level}, slot {slot} while storing index {index}")]
    SlotCollision {
        level: usize,
        slot: usize,
        index: usize,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("bad file format: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
