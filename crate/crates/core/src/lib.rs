//! Exact enumeration of irreducible meandric systems via non-crossing
//! partitions, and the generating-function pipeline built on top of it.

pub mod error;
pub mod golden;
pub mod json;
pub mod meander;
pub mod nclat;
pub mod pipeline;
pub mod render;
pub mod series;

pub use error::{Error, Result};
