pub mod arith;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod groups;
mod json;
pub mod lattices;
pub mod monomial;
pub mod random;
pub mod resolutions;
pub mod verdict;
pub mod zlinalg;

pub use error::{Error, Result};
