//! Formal solutions, gauge reduction, Borel–Laplace summation and Stokes
//! phenomena for planar irregular singular systems
//! `x^{q+1} y' = A(x) y + x^{q+1} g(x, y) + c(x)`.

pub mod cli;
pub mod error;
pub mod gauge;
pub mod matrix;
pub mod odeforms;
pub mod satcheck;
pub mod series;
pub mod summation;

pub use error::{Error, Result};
