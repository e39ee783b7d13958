//! Similarity classes of 2x2 matrices over discrete valuation rings, the
//! correspondence between matrices and ideal classes, and freeness of lattices
//! over imaginary quadratic rings.

pub mod classify;
pub mod cli;
pub mod dedekind;
pub mod hnf;
pub mod error;
pub mod linalg;
pub mod lm;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod rings;

pub use error::{Error, Result};
