//! Curtain models, Busemann cocycles and limit laws for random walks on
//! concrete CAT(0) model spaces.

// `!(x > 0.0)` is used on purpose to reject NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod curtains;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod limitlaws;
pub mod rng;
pub mod stats;
pub mod walker;

pub use error::{Error, Result};
