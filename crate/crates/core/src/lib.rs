//! Fractional Gray-Scott reaction-diffusion toolkit.
//!
//! The crate is organised around the pieces of the numerical pipeline:
//!
//! - [`fracops`]: weighted shifted Grünwald weights and the Toeplitz operators
//!   realising the discrete Riesz derivative along one axis.
//! - [`solver`]: the Crank-Nicolson ADI time stepper for the fractional
//!   Gray-Scott system, with IMEX extrapolation of the nonlinearity and
//!   runtime checks of the energy bounds.
//! - [`stability`]: homogeneous steady states, the dispersion relation and the
//!   saddle-node / Hopf phase diagram.
//! - [`verifier`]: manufactured-solution and self-convergence studies, plus an
//!   independent fractional centered-difference discretization used as a
//!   cross-check.
//! - [`patterns`]: spot detection, radial distribution functions and the
//!   exponential scaling-law fit.
//! - [`io`]: configuration files, the `FGS1` snapshot format and CSV output.

pub mod error;
pub mod fracops;
pub mod io;
pub mod linalg;
pub mod patterns;
pub mod solver;
pub mod stability;
pub mod verifier;

pub use error::{Error, Result};
pub use fracops::FractionalOrder;
pub use solver::{Domain2D, FieldPair, ModelParams, TimeGrid};
