//! Codes for binary channels with 0-deletions, adjacent transpositions and
//! limited-magnitude blocks of 0-deletions.

pub mod bch;
pub mod block_codes;
pub mod bounds;
pub mod channel;
pub mod error;
pub mod galois;
pub mod list_codes;
pub mod oracle;
pub mod lee_codes;
pub mod seqcore;
pub mod shift_codes;
pub mod single_codes;

pub use error::{Error, Result};
