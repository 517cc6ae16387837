//! Finite process theories.
//!
//! Concrete symmetric monoidal dagger categories with discarding (matrices
//! over involutive semirings, finite relations, completely positive maps,
//! biproduct completions, the Spekkens toy model) together with sampled
//! checkers for their laws, kernel lattices, phased coproducts, operational
//! principles and totalisation.

pub mod audit;
pub mod backends;
pub mod catcore;
pub mod cpm;
pub mod kernels;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod phased;
pub mod report;
pub mod scalars;
pub mod subcausal;

pub use error::{Error, Result};
pub use matrix::Mat;
pub use report::{Failure, LawReport};
