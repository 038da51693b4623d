//! Arithmetic functions, ordered factorizations and Dirichlet inversion
//! computed directly from divisor sums, without Euler products.

pub mod arith;
pub mod dirichlet;
pub mod error;
pub mod factorisatio;
pub mod family;
pub mod hardy_ramanujan;
pub mod io;
pub mod series;

pub use error::{Error, Result};
