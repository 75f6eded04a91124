//! Dynamical invariants of surface-group actions on the circle: rotation and translation
//! numbers with certificates, Euler numbers, fixed-point order laws and bending deformations.

pub mod deform;
pub mod error;
pub mod homeo;
pub mod numeric;
pub mod representation;
pub mod rotnum;
pub mod suite;
pub mod surface;

pub use error::{Error, Result};
