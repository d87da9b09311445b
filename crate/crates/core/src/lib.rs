//! Exact arithmetic for consistent pairs of linear differential and
//! difference systems over rational functions.

pub mod builder;
pub mod error;
pub mod poly;
pub mod ratfunc;
pub mod matrix;
pub mod operators;
pub mod scalar;
pub mod series;
pub mod solver;
pub mod systems;

pub use error::{CoreError, Result};
