//! Numerical checks for a trial state of the dilute Bose gas: scattering
//! solution, Bogoliubov and cubic kernels, lattice sums, position-space
//! decay, energy asymptotics and a truncated Fock-space oracle.

// `!(x > 0.0)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod coefficients;
pub mod config;
pub mod error;
pub mod fit;
pub mod fock_oracle;
pub mod lattice;
pub mod position_space;
pub mod quad;
pub mod scattering;

pub use error::{Error, Result};
