//! Dirac operators on Liouville surfaces: jet arithmetic, the Clifford
//! algebra C(2), geometric data, second-order symmetry operators and
//! separation of variables.

#![allow(clippy::needless_range_loop)]

pub mod clifford;
pub mod ellipsoid;
pub mod error;
pub mod expr;
pub mod fields;
pub mod geometry;
pub mod jets;
pub mod killing;
pub mod numerics;
pub mod presets;
pub mod sample;
pub mod separation;
pub mod spinor_ops;

pub use error::{Error, Result};
