//! Exact computations in the q-shuffle algebra on two letters and the basic
//! module of the quantum affine algebra of `sl2` it carries.
//!
//! Scalars live in `Q(q)` with `q` a formal indeterminate; nothing is ever
//! evaluated numerically.

pub mod qfield;
pub mod freeword;
pub mod qshuffle;
pub mod report;
pub mod operators;
pub mod linalg;
pub mod subalgebra;
pub mod repmodule;
pub mod series;
