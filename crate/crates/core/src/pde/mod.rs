//! Finite-difference reference solver for the Fisher-KPP equation
//! `u_t = div(D grad u) + r u (1 - u)` on the unit square or interval.
//! The equation is treated as parabolic and stepped with explicit Euler.

mod model;
mod solver;
mod stencil;

pub use model::{
    stability_limit, AssembledBoundary, BoundaryCondition, BoundarySpec, BoundaryValue, DiffusionModel, Face,
    SolveConfig,
};
pub use solver::{snapshot_series, solve_steady, step_explicit, SteadyState, Stepper};
pub(crate) use stencil::NodeWalk;
pub use stencil::{heterogeneous_divergence, laplacian};
