use std::time::Instant;

use crate::error::{Error, Result};
use crate::grid::ScalarField;
use crate::lipschitz::{
    derivative_bound, empirical_derivative_sup, solution_lipschitz, ConstantKind, LipschitzEstimate,
};
use crate::net::{build_selector_net, neuron_count, ThresholdNet};
use crate::verify::probes::{breakpoint_probes, mean_error, node_probes, sup_error, uniform_probes, ProbeOptions};
use crate::verify::problem::Problem;
use crate::verify::report::{Check, EstimateRecord, ReportInputs, VerificationReport, ROUNDING_TOL};

/// Constants of the one-dimensional threshold-net pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Constants {
    pub rho: f64,
    pub c: f64,
    pub rho_prime: f64,
    pub m: usize,
}

/// `rho`, `C`, `rho'` and `m = ceil(rho' / epsilon)` for a problem on a grid
/// with spacing `h`.
pub fn theorem1_constants(
    problem: &Problem,
    h: f64,
    epsilon: f64,
    boundary_deriv_sup: f64,
) -> Result<(Theorem1Constants, Vec<String>)> {
    let (rho, notes) = problem.derivative_lipschitz()?;
    let c = derivative_bound(boundary_deriv_sup, 1.0, rho.rho)?;
    let rho_prime = solution_lipschitz(c, rho.rho, h)?;
    let m = neuron_count(rho_prime, epsilon)?.m;
    Ok((
        Theorem1Constants {
            rho: rho.rho,
            c,
            rho_prime,
            m,
        },
        notes,
    ))
}

/// Threshold net over the linear interpolant of a 1D field with `m` intervals.
pub fn threshold_net_for_field(field: &ScalarField, m: usize) -> Result<ThresholdNet> {
    ThresholdNet::build(|x| field.interpolate(&[x]), m)
}

/// Probe set for a threshold net: random points, grid nodes, and both sides
/// of every breakpoint, all inside `[0, 1)`.
pub fn theorem1_probes(field: &ScalarField, net: &ThresholdNet, opts: &ProbeOptions) -> Vec<Vec<f64>> {
    let mut probes = uniform_probes(1, opts.count, opts.seed);
    probes.extend(node_probes(field.grid()).into_iter().filter(|x| x[0] < 1.0));
    probes.extend(breakpoint_probes(net.breakpoints()));
    probes
}

/// Builds the threshold net from the analytic constants and measures its sup
/// error against the interpolated field.
///
/// Passes when the error is at most `epsilon + 2 h rho'`; the slack covers
/// the gap between the grid field and its continuous counterpart.
pub fn verify_theorem1(
    problem: &Problem,
    field: &ScalarField,
    epsilon: f64,
    boundary_deriv_sup: f64,
    opts: &ProbeOptions,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let grid = field.grid();
    if grid.dim() != 1 {
        return Err(Error::invalid("threshold-net verification needs a 1D field"));
    }
    problem.check_steady(field)?;
    let h = grid.spacing();
    let (k, mut notes) = theorem1_constants(problem, h, epsilon, boundary_deriv_sup)?;
    notes.push(
        "solution Lipschitz constant computed as C + rho + h*rho; the closed form C*(c0 + 2*delta + h) is not evaluated because c0 has no definition"
            .to_string(),
    );
    let net = threshold_net_for_field(field, k.m)?;
    let probes = theorem1_probes(field, &net, opts);
    let measured = sup_error(|x| net.eval(x[0]), |x| field.interpolate(x), &probes)?;
    let slack = 2.0 * h * k.rho_prime;

    let r = Some(problem.r());
    let d_min = Some(problem.diffusion.d_min());
    let estimates = vec![
        EstimateRecord::new(
            "rho",
            &LipschitzEstimate::analytic(k.rho, ConstantKind::DerivativeLipschitz),
            r,
            d_min,
            h,
        ),
        EstimateRecord::new(
            "C",
            &LipschitzEstimate::analytic(k.c, ConstantKind::DerivativeBound),
            r,
            d_min,
            h,
        ),
        EstimateRecord::new(
            "rho_prime",
            &LipschitzEstimate::analytic(k.rho_prime, ConstantKind::SolutionLipschitz),
            r,
            d_min,
            h,
        ),
    ];
    let checks = vec![
        Check::new("sup_error", epsilon, measured, slack),
        Check::new("neuron_count", (2 * k.m) as f64, net.neuron_count() as f64, 0.0),
    ];
    let inputs = ReportInputs {
        dim: 1,
        n: grid.n(),
        h,
        r,
        diffusion: Some(problem.describe_diffusion()),
        epsilon: Some(epsilon),
        m: Some(k.m),
        layer_sizes: Some(net.layer_sizes()),
        seed: Some(opts.seed),
        ..Default::default()
    };
    Ok(VerificationReport::assemble(
        "theorem1",
        inputs,
        checks,
        estimates,
        probes.len(),
        notes,
        started,
    ))
}

/// Partition side that makes the selector-net bound `2 delta c` equal
/// `epsilon`, capped at 1.
pub fn delta_for_epsilon(epsilon: f64, c_delta: f64) -> Result<f64> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(c_delta.is_finite() && c_delta >= 0.0) {
        return Err(Error::invalid(format!(
            "derivative bound must be finite and >= 0, got {c_delta}"
        )));
    }
    if c_delta == 0.0 {
        return Ok(1.0);
    }
    Ok((epsilon / (2.0 * c_delta)).min(1.0))
}

/// Largest `|g(p) - g(q)|` over node pairs whose index offsets are at most
/// `k` on every axis.
pub fn grid_modulus(field: &ScalarField, k: usize) -> f64 {
    let grid = field.grid();
    let n = grid.n() as isize;
    let u = field.values();
    let k = k as isize;
    let mut best: f64 = 0.0;
    match grid.dim() {
        1 => {
            for i in 0..n {
                for j in (i + 1)..(i + k + 1).min(n) {
                    best = best.max((u[j as usize] - u[i as usize]).abs());
                }
            }
        }
        _ => {
            for i in 0..n {
                for j in 0..n {
                    let a = u[(i * n + j) as usize];
                    // Half of the offset window; the other half is covered
                    // by symmetry.
                    for di in 0..=k {
                        let lo = if di == 0 { 1 } else { -k };
                        for dj in lo..=k {
                            let (p, q) = (i + di, j + dj);
                            if p < n && (0..n).contains(&q) {
                                best = best.max((u[(p * n + q) as usize] - a).abs());
                            }
                        }
                    }
                }
            }
        }
    }
    best
}

/// `max |u(i+1,j) + u(i-1,j) + u(i,j+1) + u(i,j-1) - 4 u(i,j)|` over interior
/// nodes of a 2D field.
pub fn five_point_sup(field: &ScalarField) -> f64 {
    let grid = field.grid();
    let u = field.values();
    let n = grid.n();
    let mut best: f64 = 0.0;
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let p = i * n + j;
            let s = u[p - n] + u[p + n] + u[p - 1] + u[p + 1] - 4.0 * u[p];
            best = best.max(s.abs());
        }
    }
    best
}

/// Checks the two-dimensional selector-net pipeline on a steady field.
///
/// With `c` the empirical derivative sup and `s = delta / 2` the half
/// separation, the target modulus is `epsilon = 4 s c`; the two-sided form
/// bounds `2 |g(x2) - g(x1)|` by `8 s c` and is reported alongside.
pub fn verify_theorem2(
    problem: &Problem,
    field: &ScalarField,
    delta: f64,
    gamma: f64,
    opts: &ProbeOptions,
) -> Result<VerificationReport> {
    let started = Instant::now();
    let grid = field.grid();
    if grid.dim() != 2 {
        return Err(Error::invalid("selector-net verification needs a 2D field"));
    }
    let target = |x: &[f64]| field.interpolate(x);
    let net = build_selector_net(target, delta, gamma, 2)?;
    problem.check_steady(field)?;

    let h_grid = grid.spacing();
    let c_est = empirical_derivative_sup(field);
    let c = c_est.rho;
    let half = 0.5 * delta;
    let epsilon = 4.0 * half * c;

    // (a) modulus over node pairs at infinity-separation <= delta / 2.
    let k = ((half / h_grid) * (1.0 + 1e-12)).floor() as usize;
    let modulus = grid_modulus(field, k);
    let modulus_at_delta = grid_modulus(field, ((delta / h_grid) * (1.0 + 1e-12)).floor() as usize);

    // (b) pointwise on probes away from the ramps. The mean uses the random
    // probes only, since grid nodes sit on the cut planes by construction;
    // probes inside a ramp strip can err by up to 4 max|alpha| + max|g|.
    let random = uniform_probes(2, opts.count, opts.seed);
    let mut all = random.clone();
    all.extend(node_probes(grid));
    let partition = net.partition();
    let near_cut = |x: &Vec<f64>| partition.distance_to_cuts(x) <= gamma;
    let clear: Vec<Vec<f64>> = all.iter().filter(|x| !near_cut(x)).cloned().collect();
    let sup = sup_error(|x| net.eval(x), target, &clear)?;
    let mean = mean_error(|x| net.eval(x), target, &random)?;
    let strip_fraction = random.iter().filter(|x| near_cut(x)).count() as f64 / random.len() as f64;
    let alpha_max = net.alphas().iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let field_max = field.max().abs().max(field.min().abs());
    let strip_slack = strip_fraction * (4.0 * alpha_max + field_max);

    // (c) five-point sum against 4 h c.
    let five = five_point_sup(field);

    let checks = vec![
        Check::new("selector_sup_error", 2.0 * epsilon, sup, ROUNDING_TOL),
        Check::new("modulus", epsilon, modulus, ROUNDING_TOL),
        Check::new("modulus_two_sided", 8.0 * half * c, 2.0 * modulus, ROUNDING_TOL),
        Check::new("five_point_stencil", 4.0 * h_grid * c, five, ROUNDING_TOL),
        Check::new("selector_mean_error", 2.0 * epsilon, mean, ROUNDING_TOL + strip_slack),
        Check::new("modulus_monotone_in_delta", modulus_at_delta, modulus, 0.0),
    ];
    let notes = vec![
        format!(
            "selector sup error measured on {} of {} probes farther than gamma from every interior cut; mean error uses the random probes, with slack for the {:.4} fraction inside ramp strips",
            clear.len(),
            all.len(),
            strip_fraction
        ),
        "smoothness of the steady Fisher-KPP solution is assumed in place of the Poisson smoothness argument".to_string(),
    ];
    let estimates = vec![EstimateRecord::new(
        "c_delta",
        &c_est,
        Some(problem.r()),
        Some(problem.diffusion.d_min()),
        h_grid,
    )];
    let inputs = ReportInputs {
        dim: 2,
        n: grid.n(),
        h: h_grid,
        r: Some(problem.r()),
        diffusion: Some(problem.describe_diffusion()),
        epsilon: Some(epsilon),
        delta: Some(delta),
        gamma: Some(gamma),
        layer_sizes: Some(net.layer_sizes()),
        seed: Some(opts.seed),
        ..Default::default()
    };
    Ok(VerificationReport::assemble(
        "theorem2",
        inputs,
        checks,
        estimates,
        all.len(),
        notes,
        started,
    ))
}
