//! Partial Euler products of Dirichlet L-functions on and right of the
//! critical line, together with their function-field counterparts.

pub mod arith;
pub mod characters;
pub mod curves;
mod error;
pub mod ffield;
pub mod grid;
pub mod lfunc;
pub mod primes;
pub mod products;
pub mod roots;
pub mod scaling;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
