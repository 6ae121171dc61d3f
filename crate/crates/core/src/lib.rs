//! Log-gas electrostatics, orthogonal-polynomial zeros, and the quantum
//! Hamilton–Jacobi picture of Gaussian random-matrix ensembles.
//!
//! Units: `ħ = 1`, `2m = 1`. A catalog potential is factorized as
//! `V = W² − W′ + E₀`; its superpotential `W` is also the force field of the
//! log-gas (`U′ = W`), which is why equilibrium charges sit at the zeros of
//! the ground-state polynomial family.
//!
//! `no_std` with `alloc`; IO and the command line live in the `loggas` crate.

#![no_std]
extern crate alloc;

pub mod dyson;
pub mod electrostatics;
pub mod ensembles;
pub mod error;
pub mod orthopoly;
pub mod poly;
pub mod potentials;
pub mod qhj;
pub mod scalar;
pub mod stats;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
