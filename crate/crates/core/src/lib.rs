//! Exact symbolic computation with graded Lie algebras, derived brackets
//! and their Maurer-Cartan theory.

pub mod error;
pub mod gla;
pub mod graded;
pub mod json;
pub mod linalg;
pub mod linfty;
pub mod poly;
pub mod polygeo;
pub mod qgeom;
pub mod sample;
pub mod suites;
pub mod tpois;
pub mod vdata;

pub use error::{Error, Result};
pub use graded::{Elem, Scalar};
