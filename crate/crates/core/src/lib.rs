//! Numerics for the free energy of dilute Bose gases: scattering lengths,
//! regularized potentials, Bogoliubov spectra on Neumann boxes, thermal
//! lattice sums and the checks that tie them together.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod free_energy;
pub mod neumann;
pub mod numerics;
pub mod potentials;
pub mod regimes;
pub mod regularize;
pub mod scattering;
pub mod spectral;
pub mod verdict;
pub mod verify;

pub use error::{Error, Result};
