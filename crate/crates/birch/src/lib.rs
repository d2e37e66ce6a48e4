//! Rational points on systems of odd-degree forms.

pub mod cli;
pub mod error;
pub mod fields;
pub mod linalg;
pub mod pipeline;
pub mod poly;
pub mod scalar;
pub mod strength;

pub use error::{Error, Result};
