use proptest::prelude::*;

use rdnet::pde::{
    heterogeneous_divergence, solve_steady, stability_limit, step_explicit, BoundaryCondition, BoundarySpec,
    DiffusionModel, Face, SolveConfig,
};
use rdnet::verify::{manufactured_residual, residual_check};
use rdnet::{ScalarField, UniformGrid};

fn grid1(n: usize) -> UniformGrid {
    UniformGrid::new(1, n).unwrap()
}

fn config(grid: &UniformGrid, d: &DiffusionModel, r: f64) -> SolveConfig {
    SolveConfig::new(r, 0.9 * stability_limit(grid, d), 50_000_000, 1e-13).unwrap()
}

/// `(D u')'` at `x` from nested central differences of the continuous
/// functions with step `eta`.
fn flux_fd(d: impl Fn(f64) -> f64, u: impl Fn(f64) -> f64, x: f64, eta: f64) -> f64 {
    let flux = |y: f64| d(y) * (u(y + 0.5 * eta) - u(y - 0.5 * eta)) / eta;
    (flux(x + 0.5 * eta) - flux(x - 0.5 * eta)) / eta
}

#[test]
fn heterogeneous_divergence_matches_dense_flux_difference() {
    let d = |x: f64| 1.0 + 0.5 * (2.0 * x).sin();
    let u = |x: f64| (3.0 * x).cos() + x * x;
    let mut errors = Vec::new();
    for n in [33, 65, 129] {
        let g = grid1(n);
        let field = ScalarField::from_fn(g, |x| u(x[0])).unwrap();
        let dm = DiffusionModel::heterogeneous(ScalarField::from_fn(g, |x| d(x[0])).unwrap()).unwrap();
        let div = heterogeneous_divergence(&field, &dm).unwrap();
        let err = g
            .interior()
            .map(|p| (div.values()[p] - flux_fd(d, u, g.coord(p), 1e-4)).abs())
            .fold(0.0, f64::max);
        errors.push(err);
    }
    assert!(errors[2] < 2e-3, "{errors:?}");
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.0..5.0).contains(&ratio), "{errors:?}");
    }
}

#[test]
fn two_dimensional_divergence_matches_flux_difference() {
    let g = UniformGrid::new(2, 65).unwrap();
    let d = |x: f64, y: f64| 1.0 + x * y;
    let u = |x: f64, y: f64| (x + 2.0 * y).sin();
    let field = ScalarField::from_fn(g, |p| u(p[0], p[1])).unwrap();
    let dm = DiffusionModel::heterogeneous(ScalarField::from_fn(g, |p| d(p[0], p[1])).unwrap()).unwrap();
    let div = heterogeneous_divergence(&field, &dm).unwrap();
    let eta = 1e-4;
    for p in g.interior() {
        let x = g.point(p);
        let fx = flux_fd(|s| d(s, x[1]), |s| u(s, x[1]), x[0], eta);
        let fy = flux_fd(|s| d(x[0], s), |s| u(x[0], s), x[1], eta);
        assert!((div.values()[p] - (fx + fy)).abs() < 5e-3, "at {x:?}");
    }
}

#[test]
fn pure_diffusion_steady_state_is_linear() {
    let g = grid1(17);
    let d = DiffusionModel::constant(1.0).unwrap();
    let init = ScalarField::constant(g, 0.3).unwrap();
    let s = solve_steady(&init, &d, &BoundarySpec::dirichlet_1d(0.0, 1.0), &config(&g, &d, 0.0)).unwrap();
    for (p, v) in s.field.values().iter().enumerate() {
        assert!((v - g.coord(p)).abs() < 1e-9);
    }
    assert!(residual_check(&s.field, &d, 0.0).unwrap() < 1e-6);
}

#[test]
fn affine_diffusion_steady_state_is_logarithmic() {
    // (1 + x) u' is constant, so u = ln(1 + x) / ln 2.
    let mut prev = f64::INFINITY;
    for n in [17, 33, 65] {
        let g = grid1(n);
        let d = DiffusionModel::heterogeneous(ScalarField::from_fn(g, |x| 1.0 + x[0]).unwrap()).unwrap();
        let init = ScalarField::from_fn(g, |x| x[0]).unwrap();
        let s = solve_steady(&init, &d, &BoundarySpec::dirichlet_1d(0.0, 1.0), &config(&g, &d, 0.0)).unwrap();
        let err = s
            .field
            .values()
            .iter()
            .enumerate()
            .map(|(p, v)| (v - (1.0 + g.coord(p)).ln() / 2f64.ln()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-4, "n {n}: {err}");
        assert!(err < prev / 3.0, "n {n}: {err} vs {prev}");
        prev = err;
    }
}

#[test]
fn zero_flux_box_follows_the_logistic_ode() {
    let g = UniformGrid::new(2, 9).unwrap();
    let d = DiffusionModel::constant(1.0).unwrap();
    let bc = BoundarySpec::uniform(2, BoundaryCondition::neumann(0.0));
    let cfg = config(&g, &d, 2.0);
    let mut u = ScalarField::constant(g, 0.1).unwrap();
    let mut v = 0.1;
    for _ in 0..50 {
        u = step_explicit(&u, &d, &bc, &cfg).unwrap();
        v += cfg.dt * 2.0 * v * (1.0 - v);
    }
    for x in u.values() {
        assert!((x - v).abs() < 1e-14);
    }
}

#[test]
fn symmetric_data_gives_symmetric_solutions() {
    let g = UniformGrid::new(2, 17).unwrap();
    let d = DiffusionModel::constant(1.0).unwrap();
    let bc = BoundarySpec::uniform(2, BoundaryCondition::dirichlet(0.0))
        .with(Face::BOTTOM, BoundaryCondition::dirichlet(1.0))
        .with(Face::LEFT, BoundaryCondition::dirichlet(1.0));
    let init = ScalarField::from_fn(g, |x| x[0] * x[1]).unwrap();
    let s = solve_steady(&init, &d, &bc, &config(&g, &d, 1.0)).unwrap();
    let n = g.n();
    // Corners take the value of the lower-numbered face, which breaks the
    // symmetry there; the five-point stencil never reads them.
    let corner = |i: usize, j: usize| (i == 0 || i == n - 1) && (j == 0 || j == n - 1);
    for i in 0..n {
        for j in (0..n).filter(|&j| !corner(i, j)) {
            let a = s.field.get(&[i, j]);
            let b = s.field.get(&[j, i]);
            assert!((a - b).abs() < 1e-12, "({i},{j})");
        }
    }
}

#[test]
fn manufactured_residual_is_second_order() {
    for dim in [1, 2] {
        let r: Vec<f64> = [17, 33, 65]
            .iter()
            .map(|&n| manufactured_residual(dim, n, 1.0).unwrap())
            .collect();
        for w in r.windows(2) {
            let q = w[0] / w[1];
            assert!((3.8..4.2).contains(&q), "dim {dim}: {r:?}");
        }
    }
}

fn field_strategy(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..=1.0f64, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn explicit_step_preserves_order(a in field_strategy(12), b in field_strategy(12), r in 0.0..4.0f64) {
        let g = grid1(12);
        let lo: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.min(*y)).collect();
        let hi: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect();
        let d = DiffusionModel::constant(1.0).unwrap();
        let bc = BoundarySpec::dirichlet_1d(0.0, 1.0).with(Face::RIGHT, BoundaryCondition::neumann(0.0));
        let cfg = config(&g, &d, r);
        let mut u = ScalarField::new(g, lo).unwrap();
        let mut v = ScalarField::new(g, hi).unwrap();
        for _ in 0..20 {
            u = step_explicit(&u, &d, &bc, &cfg).unwrap();
            v = step_explicit(&v, &d, &bc, &cfg).unwrap();
            for (x, y) in u.values().iter().zip(v.values()) {
                prop_assert!(x <= y);
            }
        }
    }

    #[test]
    fn unit_interval_is_invariant(a in field_strategy(10), left in 0.0..=1.0f64, right in 0.0..=1.0f64, r in 0.0..4.0f64) {
        let g = grid1(10);
        let d = DiffusionModel::constant(0.7).unwrap();
        let bc = BoundarySpec::dirichlet_1d(left, right);
        let cfg = config(&g, &d, r);
        let mut u = ScalarField::new(g, a).unwrap();
        for _ in 0..30 {
            u = step_explicit(&u, &d, &bc, &cfg).unwrap();
            prop_assert!(u.min() >= 0.0 && u.max() <= 1.0);
        }
    }

    #[test]
    fn steady_state_is_a_fixed_point(left in 0.0..=1.0f64, right in 0.0..=1.0f64, r in 0.0..3.0f64) {
        let g = grid1(9);
        let d = DiffusionModel::constant(1.0).unwrap();
        let bc = BoundarySpec::dirichlet_1d(left, right);
        let cfg = config(&g, &d, r);
        let s = solve_steady(&ScalarField::constant(g, 0.5).unwrap(), &d, &bc, &cfg).unwrap();
        let next = step_explicit(&s.field, &d, &bc, &cfg).unwrap();
        prop_assert!(next.sup_distance(&s.field).unwrap() <= cfg.steady_tol);
        prop_assert!(residual_check(&s.field, &d, r).unwrap() <= (1.0 + 1e-9) * cfg.steady_tol / cfg.dt);
    }
}
