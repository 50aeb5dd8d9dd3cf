//! Radiative interactions between uniformly accelerated atoms.
//!
//! All computations use natural units `ħ = c = 1`; [`units`] converts at the
//! boundary. Polarizabilities are volumes and `μ²` is energy times volume.

pub mod boundary;
pub mod cli;
pub mod dispersion;
pub mod error;
pub mod extrapolation;
pub mod fit;
pub mod kinematics;
pub mod polarizability;
pub mod quadrature;
pub mod resonance;
pub mod units;

pub use error::{Error, Result};
