//! Pass/fail certificates that compare measured quantities on solved fields
//! and constructed nets against the analytic bounds.

mod lemmas;
mod order;
mod probes;
mod problem;
mod report;
mod theorems;

pub use lemmas::{tile_boxes, verify_lemma1, verify_lemma2_lemma3};
pub use order::{
    convergence_order, fitted_order, manufactured_residual, residual_check, residual_with_source,
    sine_truncation_bound, stencil_error, verify_order, Manufactured, Order, EXACT_THRESHOLD, NOMINAL_ORDER, ORDER_TOL,
};
pub use probes::{
    breakpoint_probes, mean_error, node_probes, sup_error, uniform_probes, ProbeOptions, BREAKPOINT_OFFSET,
    DEFAULT_PROBES, DEFAULT_SEED,
};
pub use problem::Problem;
pub use report::{Check, EstimateRecord, ReportInputs, Status, VerificationReport, ROUNDING_TOL};
pub use theorems::{
    delta_for_epsilon, five_point_sup, grid_modulus, theorem1_constants, theorem1_probes, threshold_net_for_field,
    verify_theorem1, verify_theorem2, Theorem1Constants,
};
