//! Thompson–Higman group and monoid elements as finite prefix-code tables,
//! translations between boolean circuits and generator words, and
//! desk-scale measurements of word length, circuit size and distortion.
//!
//! Generator words are applied left to right: the first token acts first.

pub mod circuits;
pub mod codes;
pub mod compiler;
pub mod error;
pub mod generators;
pub mod metrics;
pub mod par;
pub mod sample;
pub mod thompson;
pub mod verify;

pub use codes::{PrefixCode, Word};
pub use error::{Error, Result};
pub use generators::Gen;
pub use thompson::{Element, Table};
