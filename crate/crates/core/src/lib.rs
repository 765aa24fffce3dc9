//! Construction and analysis of binary self-dual codes.
//!
//! The crate covers four-circulant constructions, self-dual neighbors,
//! coordinate subtraction, exact weight and shadow distributions,
//! extremal weight-enumerator families, and permutation equivalence.

pub mod catalog;
pub mod circulant;
pub mod codes;
pub mod enumerate;
pub mod equivalence;
pub mod error;
pub mod exec;
pub mod gf2;
pub mod neighbors;
pub mod reproduce;
pub mod wenum;

pub use codes::{LinearCode, ParityClass, ShadowParts};
pub use error::{Error, Result};
pub use exec::Execution;
pub use gf2::{BitMatrix, BitVector};
