pub mod analytic;
pub mod construction;
pub mod error;
mod floats;
pub mod geometry;
pub mod pipeline;
pub mod polynomials;
pub mod varieties;
pub mod verify;

pub use error::{Error, Result};
