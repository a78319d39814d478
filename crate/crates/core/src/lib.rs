//! Discrete homotopy theory of graphs made executable.

pub mod covering;
pub mod error;
pub mod fpgroup;
pub mod fundamental;
pub mod graph;
pub mod homcx;
pub mod homotopy;
pub mod ncomplex;
pub mod obstruct;
pub mod suite;

pub use error::{Error, Result};
