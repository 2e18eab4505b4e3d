//! Error type shared by every module of the engine.

use thiserror::Error;

/// Errors produced by the game-analysis operations.
///
/// `TieDetected` and `SingularSystem` flag violations of proven theorems
/// (best-response uniqueness, absorbing-chain solvability); encountering
/// either one means a bug, not bad user input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("illegal character {ch:?} at position {pos}: strings use only 'H' and 'T'")]
    IllegalCharacter { ch: char, pos: usize },

    #[error("bad length {len}: {reason}")]
    BadLength { len: usize, reason: &'static str },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("the game requires two distinct strings")]
    SameString,

    #[error("tie detected: {detail}")]
    TieDetected { detail: String },

    #[error("singular linear system in the absorbing-chain solver")]
    SingularSystem,
}

impl Error {
    pub(crate) fn bad_length(len: usize, reason: &'static str) -> Self {
        Error::BadLength { len, reason }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
