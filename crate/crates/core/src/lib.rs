//! Geometric verification engine for a five-dimensional metric ansatz with two
//! time directions, its reduction to the complex Klein–Gordon equation, and a
//! 1+1-dimensional Klein–Gordon solver in Madelung form.

pub mod ansatz;
pub mod error;
pub mod quadrature;
pub mod reduction;
pub mod solver;
pub mod tensor;

pub use error::{Error, Result};
