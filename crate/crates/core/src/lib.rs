//! Executable quantum logic for GHZ-type arguments: the GHZ operators and
//! eigenbasis, two-valued states on context hypergraphs, and classical,
//! quantum and PR-box strategies for the family of GHZ games.

pub mod error;
pub mod games;
pub mod linalg;
pub mod logic;
pub mod quantum;

pub use error::{Error, Result};
pub use quantum::{Context, Observable, Sign};
