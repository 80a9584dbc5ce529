//! Numerical laboratory for the vanishing-viscosity limit of the isentropic
//! compressible Navier-Stokes equations in a flat periodic channel with
//! Navier-slip walls.

pub mod boundary;
pub mod conorms;
pub mod diagnostics;
pub mod error;
pub mod fit;
pub mod geometry;
pub mod harness;
pub mod initial;
pub mod oracle;
pub mod solver;
pub mod state;

pub use error::{Error, Result};
