use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a key string was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyErrorKind {
    Empty,
    IllegalCharacter(char),
    OddLength,
    TooLong,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid key at position {position}: {kind:?}")]
    Key { kind: KeyErrorKind, position: usize },

    #[error("loop order {0} outside supported range")]
    LoopOutOfRange(usize),

    #[error("key length {key_len} does not match loop order {loop_order}")]
    KeyLength { key_len: usize, loop_order: usize },

    #[error("conflicting coefficients for key {key}: {first} vs {second}")]
    ConflictingDuplicate {
        key: String,
        first: String,
        second: String,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed token sequence: {0}")]
    Token(String),

    #[error("unknown relation {0:?}")]
    UnknownRelation(String),

    #[error("slot {slot} out of range for {relation} at loop {loop_order}")]
    SlotOutOfRange {
        relation: String,
        slot: usize,
        loop_order: usize,
    },

    #[error("context length {got} does not match expected {expected}")]
    ContextLength { expected: usize, got: usize },

    #[error("no instance of {relation} with a nonzero member exists at loop {loop_order}")]
    NoNonzeroSupport { relation: String, loop_order: usize },

    #[error("cannot draw {requested} distinct instances of {relation}; only {available} exist")]
    InsufficientInstances {
        relation: String,
        requested: usize,
        available: usize,
    },

    #[error("instance space of {size} exceeds the exhaustive limit {limit}")]
    InstanceSpaceTooLarge { size: u128, limit: u128 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("suffix class {0} cannot be reduced to a quad suffix")]
    IrreducibleSuffix(String),

    #[error("requested {requested} examples but only {available} are available")]
    InsufficientPool { requested: usize, available: usize },

    #[error("strike distance {k} out of range for loop {loop_order}")]
    StrikeDistance { k: usize, loop_order: usize },

    #[error("unknown variant {0:?}")]
    UnknownVariant(String),

    #[error("duplicate example id {0:?}")]
    DuplicateId(String),

    #[error("unknown example id {0:?}")]
    UnknownId(String),

    #[error("checksum mismatch for {path}: expected {expected}, got {actual}")]
    ChecksumMismatch {
        path: PathBuf,
        expected: String,
        actual: String,
    },

    #[error("{path}: expected {expected} nonzero elements, found {actual}")]
    CountMismatch {
        path: PathBuf,
        expected: usize,
        actual: usize,
    },

    #[error("download of {url} failed after {attempts} attempts: {message}")]
    Download {
        url: String,
        attempts: u32,
        message: String,
    },

    #[error("zero-norm vector for letter {0}")]
    ZeroNorm(char),

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable identifier used in machine-readable error output.
    pub fn class(&self) -> &'static str {
        match self {
            Error::Key { .. } => "key",
            Error::LoopOutOfRange(_) => "loop-range",
            Error::KeyLength { .. } => "key-length",
            Error::ConflictingDuplicate { .. } => "conflicting-duplicate",
            Error::Parse { .. } => "parse",
            Error::Token(_) => "token",
            Error::UnknownRelation(_) => "unknown-relation",
            Error::SlotOutOfRange { .. } => "slot-range",
            Error::ContextLength { .. } => "context-length",
            Error::NoNonzeroSupport { .. } => "no-nonzero-support",
            Error::InsufficientInstances { .. } => "insufficient-instances",
            Error::InstanceSpaceTooLarge { .. } => "instance-space",
            Error::Empty(_) => "empty",
            Error::IrreducibleSuffix(_) => "irreducible-suffix",
            Error::InsufficientPool { .. } => "insufficient-pool",
            Error::StrikeDistance { .. } => "strike-distance",
            Error::UnknownVariant(_) => "unknown-variant",
            Error::DuplicateId(_) => "duplicate-id",
            Error::UnknownId(_) => "unknown-id",
            Error::ChecksumMismatch { .. } => "checksum",
            Error::CountMismatch { .. } => "count",
            Error::Download { .. } => "download",
            Error::ZeroNorm(_) => "zero-norm",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Io(_) => "io",
        }
    }
}
