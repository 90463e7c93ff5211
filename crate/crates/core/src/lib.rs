//! Training-free approximation of Fisher-KPP solutions by explicit networks.
//!
//! The crate solves the steady reaction-diffusion problem on a uniform grid,
//! builds threshold and ReLU-selector networks directly from the solution,
//! and checks the Lipschitz constants, neuron counts and error bounds that
//! make those constructions work.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod config;
pub mod error;
pub mod grid;
pub mod io;
pub mod lipschitz;
pub mod net;
pub mod pde;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{ScalarField, UniformGrid};
