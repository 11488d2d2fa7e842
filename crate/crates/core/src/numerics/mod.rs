//! Numerical building blocks shared by the physics modules.

pub mod quad;
pub mod sum;

pub use quad::{gauss_legendre, integrate, integrate_to_infinity, QuadResult, Tolerance};
pub use sum::{compensated_sum, CompensatedSum};
