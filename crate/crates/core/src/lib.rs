//! Stationary quantum Hamilton-Jacobi toolkit.
//!
//! Builds the complex momentum functions `p = -(1/R) u'/u` of the separated
//! three-dimensional harmonic oscillator and hydrogen atom, checks them
//! against their Riccati equations, and evaluates quantum action variables
//! `J = (1/2π) ∮ p dq` by contour quadrature. The action integrals count the
//! wave-function nodes, which appear as simple poles of `p`.

pub mod cli;
pub mod contour;
pub mod error;
pub mod orthopoly;
pub mod riccati;
pub mod systems;
pub mod verify;

pub use error::{QhjError, Result};
