//! Exact computations with hypergeometric monodromy groups: companion-matrix
//! presentations, invariant forms, root-group patterns, straight-line-program
//! certificates of arithmeticity and a bounded search for such certificates.

pub mod catalog;
pub mod cyclo;
pub mod error;
pub mod exact;
pub mod group;
pub mod slp;
pub mod search;
pub mod standard;

pub use error::{Error, Result};
