//! Forward-Euler time stepping for `u_t = div(D grad u) + r u (1 - u)`.

use crate::error::{Error, Result};
use crate::grid::ScalarField;
use crate::pde::model::{stability_limit, AssembledBoundary, BoundarySpec, DiffusionModel, SolveConfig};
use crate::pde::stencil::diffusion_term;

/// Allowed relative overshoot of `dt` past the stability limit, so that a
/// `dt` computed as exactly the limit is not rejected by rounding.
const STABILITY_SLACK: f64 = 1e-12;

/// Steady iterate plus the bookkeeping of how it was reached.
#[derive(Debug, Clone)]
pub struct SteadyState {
    pub field: ScalarField,
    pub iterations: u64,
    /// `‖u_{k+1} − u_k‖_∞` of the final step.
    pub final_increment: f64,
}

/// Reusable stepping state for one (grid, diffusion, boundary, config) tuple.
pub struct Stepper<'a> {
    diffusion: &'a DiffusionModel,
    boundary: AssembledBoundary,
    cfg: &'a SolveConfig,
    scratch: Vec<f64>,
}

impl<'a> Stepper<'a> {
    pub fn new(
        grid: &crate::grid::UniformGrid,
        diffusion: &'a DiffusionModel,
        bc: &BoundarySpec,
        cfg: &'a SolveConfig,
    ) -> Result<Self> {
        cfg.validate()?;
        diffusion.check_grid(grid)?;
        let limit = stability_limit(grid, diffusion);
        if cfg.dt > limit * (1.0 + STABILITY_SLACK) {
            return Err(Error::Stability { dt: cfg.dt, limit });
        }
        let boundary = bc.assemble(grid)?;
        Ok(Self {
            diffusion,
            boundary,
            cfg,
            scratch: vec![0.0; grid.len()],
        })
    }

    /// Advances `u` in place by one step and returns the sup-norm increment.
    pub fn advance(&mut self, field: &mut ScalarField) -> Result<f64> {
        let grid = *field.grid();
        diffusion_term(&grid, field.values(), self.diffusion, &self.boundary, &mut self.scratch);
        let r = self.cfg.r;
        let dt = self.cfg.dt;
        let mut values = std::mem::take(&mut self.scratch);
        let mut increment: f64 = 0.0;
        for (p, (next, &u)) in values.iter_mut().zip(field.values()).enumerate() {
            let new = match self.boundary.dirichlet[p] {
                Some(g) => g,
                None => u + dt * (*next + r * u * (1.0 - u)),
            };
            if !new.is_finite() {
                return Err(Error::Divergence {
                    node: p,
                    point: grid.point(p)[..grid.dim()].to_vec(),
                    value: new,
                });
            }
            increment = increment.max((new - u).abs());
            *next = new;
        }
        let old = std::mem::replace(field, ScalarField::from_parts_unchecked(grid, values));
        self.scratch = old.into_values();
        Ok(increment)
    }
}

/// One explicit Euler step. Dirichlet nodes are reset to their data.
pub fn step_explicit(
    u: &ScalarField,
    diffusion: &DiffusionModel,
    bc: &BoundarySpec,
    cfg: &SolveConfig,
) -> Result<ScalarField> {
    let mut stepper = Stepper::new(u.grid(), diffusion, bc, cfg)?;
    let mut next = u.clone();
    stepper.advance(&mut next)?;
    Ok(next)
}

/// Iterates until two successive iterates differ by at most `steady_tol`
/// in the sup norm and returns the later one.
pub fn solve_steady(
    init: &ScalarField,
    diffusion: &DiffusionModel,
    bc: &BoundarySpec,
    cfg: &SolveConfig,
) -> Result<SteadyState> {
    let mut stepper = Stepper::new(init.grid(), diffusion, bc, cfg)?;
    let mut field = init.clone();
    let mut last = f64::INFINITY;
    for k in 1..=cfg.max_steps {
        last = stepper.advance(&mut field)?;
        if last <= cfg.steady_tol {
            return Ok(SteadyState {
                field,
                iterations: k,
                final_increment: last,
            });
        }
    }
    Err(Error::NonConvergence {
        steps: cfg.max_steps,
        last_increment: last,
    })
}

/// Converts requested snapshot times into step counts on the `dt` lattice.
fn snapshot_steps(times: &[f64], dt: f64) -> Result<Vec<u64>> {
    let mut prev = f64::NEG_INFINITY;
    times
        .iter()
        .map(|&t| {
            if !t.is_finite() || t < 0.0 {
                return Err(Error::config(format!("snapshot time {t} must be finite and >= 0")));
            }
            if t < prev {
                return Err(Error::config("snapshot_times must be sorted ascending"));
            }
            prev = t;
            let k = (t / dt).round();
            if (t - k * dt).abs() > 1e-9 {
                return Err(Error::config(format!(
                    "snapshot time {t} is not a multiple of dt = {dt}"
                )));
            }
            Ok(k as u64)
        })
        .collect()
}

/// Fields at each of `cfg.snapshot_times`, in order. No interpolation in
/// time is performed; every requested time must sit on the `dt` lattice.
pub fn snapshot_series(
    init: &ScalarField,
    diffusion: &DiffusionModel,
    bc: &BoundarySpec,
    cfg: &SolveConfig,
) -> Result<Vec<(f64, ScalarField)>> {
    let times = cfg
        .snapshot_times
        .as_deref()
        .ok_or_else(|| Error::config("snapshot_series needs snapshot_times"))?;
    let steps = snapshot_steps(times, cfg.dt)?;
    let mut stepper = Stepper::new(init.grid(), diffusion, bc, cfg)?;
    let mut field = init.clone();
    let mut done = 0u64;
    let mut out = Vec::with_capacity(times.len());
    for (&t, &k) in times.iter().zip(&steps) {
        while done < k {
            stepper.advance(&mut field)?;
            done += 1;
        }
        out.push((t, field.clone()));
    }
    Ok(out)
}
