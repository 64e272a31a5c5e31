//! Triangle-free subsets of the `r`-distance graph on the `n`-dimensional
//! hypercube, where two vertices are adjacent when their Hamming distance is
//! exactly `r`.
//!
//! The crate builds explicit triangle-free sets, evaluates closed-form lower
//! and upper bounds on the largest such set exactly, checks sets by brute
//! force, and finds true optima of tiny instances by branch and bound.

pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod cube;
pub mod error;
pub mod oracle;
pub mod textfmt;
pub mod verify;

pub use cube::{Mode, Params, Vertex, VertexSet};
pub use error::{Error, Result};
