pub mod arith;
pub mod body;
pub mod bounds;
pub mod engine;
pub mod error;
pub mod harness;
pub mod json;
pub mod lattice;

pub use error::{Error, Result};
