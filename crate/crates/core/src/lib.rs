//! Toolkit for the supercritical deformed Hermitian-Yang-Mills equation:
//! pointwise angle algebra, class-level invariants, numerical positivity
//! tests and a spectral solver on flat tori.

// `!(x > 0.0)` is used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod cohomology;
pub mod error;
pub mod hermitian;
pub mod poly;
pub mod positivity;
pub mod torus;

pub use error::{Error, Result};
