//! Numerical Möbius geometry of surfaces in the light-cone model.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::type_complexity)]

pub mod charts;
pub mod classify;
pub mod cli;
pub mod contact;
pub mod error;
pub mod frame;
pub mod catalog;
pub mod minkowski;
pub mod pair;
pub mod transforms;

pub use error::{Error, Result};
