use std::f64::consts::PI;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ScalarField, UniformGrid};
use crate::pde::{heterogeneous_divergence, DiffusionModel};
use crate::verify::report::{Check, ReportInputs, VerificationReport};

/// Errors below this are treated as exact, so no order is fitted.
pub const EXACT_THRESHOLD: f64 = 1e-10;

/// `sup |div(D grad u) + r u (1 - u)|` over interior nodes.
pub fn residual_check(field: &ScalarField, diffusion: &DiffusionModel, r: f64) -> Result<f64> {
    residual_with_source(field, diffusion, r, |_| 0.0)
}

/// As [`residual_check`] with an extra source, `sup |div(D grad u) + r u (1 - u) + s(x)|`.
pub fn residual_with_source(
    field: &ScalarField,
    diffusion: &DiffusionModel,
    r: f64,
    source: impl Fn(&[f64]) -> f64,
) -> Result<f64> {
    let grid = field.grid();
    let div = heterogeneous_divergence(field, diffusion)?;
    let u = field.values();
    let mut sup: f64 = 0.0;
    for p in grid.interior() {
        let x = grid.point(p);
        let res = div.values()[p] + r * u[p] * (1.0 - u[p]) + source(&x[..grid.dim()]);
        sup = sup.max(res.abs());
    }
    Ok(sup)
}

/// Analytic test functions for the stencil order check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Manufactured {
    /// `prod_k sin(pi x_k)`, with Laplacian `-dim pi^2 u`.
    Sine,
    /// `sum_k x_k`, with Laplacian 0.
    Linear,
}

impl Manufactured {
    pub fn value(self, x: &[f64]) -> f64 {
        match self {
            Manufactured::Sine => x.iter().map(|c| (PI * c).sin()).product(),
            Manufactured::Linear => x.iter().sum(),
        }
    }

    pub fn laplacian(self, x: &[f64]) -> f64 {
        match self {
            Manufactured::Sine => -(x.len() as f64) * PI * PI * self.value(x),
            Manufactured::Linear => 0.0,
        }
    }
}

/// Sup-norm stencil error of the discrete Laplacian against the exact one on
/// interior nodes.
pub fn stencil_error(func: Manufactured, dim: usize, n: usize) -> Result<f64> {
    let grid = UniformGrid::new(dim, n)?;
    let field = ScalarField::from_fn(grid, |x| func.value(x))?;
    let one = DiffusionModel::constant(1.0)?;
    residual_with_source(&field, &one, 0.0, |x| -func.laplacian(x))
}

/// Truncation bound of the central Laplacian on the sine field,
/// `D dim pi^4 h^2 / 12`.
pub fn sine_truncation_bound(d: f64, dim: usize, h: f64) -> f64 {
    d * dim as f64 * PI.powi(4) * h * h / 12.0
}

/// Residual of the steady operator on `sin(pi x)`-type fields with the source
/// that makes them exact solutions, so only the discretisation error remains.
pub fn manufactured_residual(dim: usize, n: usize, r: f64) -> Result<f64> {
    let grid = UniformGrid::new(dim, n)?;
    let func = Manufactured::Sine;
    let field = ScalarField::from_fn(grid, |x| func.value(x))?;
    let one = DiffusionModel::constant(1.0)?;
    residual_with_source(&field, &one, r, |x| {
        let u = func.value(x);
        -(func.laplacian(x) + r * u * (1.0 - u))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    /// Every error is below [`EXACT_THRESHOLD`].
    Exact,
    Estimated(f64),
}

/// Least-squares slope of `log(error)` against `log(h)`.
pub fn fitted_order(hs: &[f64], errors: &[f64]) -> Order {
    if errors.iter().all(|&e| e < EXACT_THRESHOLD) {
        return Order::Exact;
    }
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Order::Estimated(sxy / sxx)
}

/// Observed order of the Laplacian stencil over grid sizes that double in
/// interval count (`n - 1`).
pub fn convergence_order(func: Manufactured, dim: usize, sizes: &[usize]) -> Result<(Order, Vec<f64>)> {
    if sizes.len() < 3 {
        return Err(Error::invalid(format!(
            "convergence order needs >= 3 grid sizes, got {}",
            sizes.len()
        )));
    }
    for w in sizes.windows(2) {
        if w[0] < 3 || w[1] - 1 != 2 * (w[0] - 1) {
            return Err(Error::invalid(format!(
                "grid sizes must double in intervals, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    let errors = sizes
        .iter()
        .map(|&n| stencil_error(func, dim, n))
        .collect::<Result<Vec<_>>>()?;
    let hs: Vec<f64> = sizes.iter().map(|&n| 1.0 / (n - 1) as f64).collect();
    Ok((fitted_order(&hs, &errors), errors))
}

/// Nominal order and the allowed deviation from it.
pub const NOMINAL_ORDER: f64 = 2.0;
pub const ORDER_TOL: f64 = 0.1;

/// Stencil order report for the sine field in 1D and 2D. Each check compares
/// `|order - 2|` with `0.1`.
pub fn verify_order(sizes: &[usize]) -> Result<VerificationReport> {
    let started = Instant::now();
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for dim in [1, 2] {
        for func in [Manufactured::Sine, Manufactured::Linear] {
            let (order, errors) = convergence_order(func, dim, sizes)?;
            let name = format!("{}_{}d", serde_json::to_value(func)?.as_str().unwrap_or("f"), dim);
            match order {
                Order::Estimated(p) => {
                    notes.push(format!("{name}: order {p}, errors {errors:?}"));
                    checks.push(Check::new(
                        format!("order_{name}"),
                        0.0,
                        (p - NOMINAL_ORDER).abs(),
                        ORDER_TOL,
                    ));
                }
                Order::Exact => {
                    notes.push(format!("{name}: exact, errors {errors:?}"));
                    let worst = errors.iter().cloned().fold(0.0, f64::max);
                    checks.push(Check::new(format!("exact_{name}"), EXACT_THRESHOLD, worst, 0.0));
                }
            }
        }
    }
    let inputs = ReportInputs {
        dim: 2,
        n: *sizes.last().unwrap_or(&0),
        h: sizes.last().map_or(0.0, |&n| 1.0 / (n - 1) as f64),
        sizes: Some(sizes.to_vec()),
        ..Default::default()
    };
    Ok(VerificationReport::assemble(
        "order",
        inputs,
        checks,
        Vec::new(),
        0,
        notes,
        started,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_profile_has_zero_residual() {
        let g = UniformGrid::new(1, 33).unwrap();
        let f = ScalarField::from_fn(g, |x| x[0]).unwrap();
        assert!(residual_check(&f, &DiffusionModel::constant(1.0).unwrap(), 0.0).unwrap() <= 1e-10);
    }

    #[test]
    fn sine_order_is_two() {
        for dim in [1, 2] {
            let (order, _) = convergence_order(Manufactured::Sine, dim, &[33, 65, 129]).unwrap();
            let Order::Estimated(p) = order else {
                panic!("not estimated")
            };
            assert!((p - 2.0).abs() < 0.1, "dim {dim}: {p}");
        }
    }

    #[test]
    fn linear_is_exact() {
        let (order, _) = convergence_order(Manufactured::Linear, 2, &[9, 17, 33]).unwrap();
        assert_eq!(order, Order::Exact);
    }

    #[test]
    fn size_preconditions() {
        assert!(convergence_order(Manufactured::Sine, 1, &[33, 65]).is_err());
        assert!(convergence_order(Manufactured::Sine, 1, &[33, 64, 129]).is_err());
    }

    #[test]
    fn manufactured_residual_within_truncation_bound() {
        for n in [17, 33, 65] {
            let h = 1.0 / (n - 1) as f64;
            let res = manufactured_residual(1, n, 1.0).unwrap();
            assert!(res <= sine_truncation_bound(1.0, 1, h), "n {n}: {res}");
        }
    }
}
