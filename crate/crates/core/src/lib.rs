//! Finite logical matrices and the Leibniz hierarchy.
//!
//! Computes Leibniz and Suszko congruences, deductive filters, products and
//! translations of finitely presented logics, and runs bounded class checks
//! whose verdicts always carry the bounds they were obtained under.

pub mod algebra;
pub mod caps;
pub mod chaining;
pub mod error;
pub mod gallery;
pub mod hierarchy;
pub mod json;
pub mod logic;
pub mod matrix;
pub mod subset;
pub mod translation;
pub mod verdict;

pub use caps::Caps;
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use subset::Subset;
pub use translation::Translation;
pub use verdict::{verdict_merge, Bounds, Status, Verdict, Witness};
