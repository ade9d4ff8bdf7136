//! Quantitative analysis of alphabets and their grapheme-phoneme
//! correspondences: letter complexity, discrete distribution fitting,
//! orthographic uncertainty and letter distinctivity.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assignment;
pub mod bundle;
pub mod complexity;
pub mod distinctivity;
pub mod distributions;
pub mod error;
pub mod io;
pub mod model;
pub mod report;
pub mod uncertainty;

pub use error::{Error, Result};
