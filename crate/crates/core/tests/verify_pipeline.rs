use rdnet::lipschitz::boundary_derivative_anchor;
use rdnet::net::RectPartition;
use rdnet::pde::{solve_steady, stability_limit, BoundaryCondition, BoundarySpec, DiffusionModel, Face, SolveConfig};
use rdnet::verify::{
    grid_modulus, residual_check, sup_error, theorem1_probes, threshold_net_for_field, verify_lemma1,
    verify_lemma2_lemma3, verify_theorem1, verify_theorem2, ProbeOptions, Problem, Status,
};
use rdnet::{Error, ScalarField, UniformGrid};

fn problem(grid: &UniformGrid, r: f64, diffusion: DiffusionModel, boundary: BoundarySpec) -> Problem {
    let dt = 0.9 * stability_limit(grid, &diffusion);
    Problem {
        config: SolveConfig::new(r, dt, 50_000_000, 1e-12).unwrap(),
        diffusion,
        boundary,
    }
}

fn steady(problem: &Problem, grid: UniformGrid) -> ScalarField {
    let init = ScalarField::from_fn(grid, |x| x[0]).unwrap();
    solve_steady(&init, &problem.diffusion, &problem.boundary, &problem.config)
        .unwrap()
        .field
}

fn fisher_1d(n: usize, r: f64) -> (Problem, ScalarField) {
    let g = UniformGrid::new(1, n).unwrap();
    let p = problem(
        &g,
        r,
        DiffusionModel::constant(1.0).unwrap(),
        BoundarySpec::dirichlet_1d(0.0, 1.0),
    );
    let f = steady(&p, g);
    (p, f)
}

fn opts() -> ProbeOptions {
    ProbeOptions { count: 2_000, seed: 42 }
}

#[test]
fn theorem1_passes_and_records_the_pipeline() {
    let (p, f) = fisher_1d(129, 1.0);
    let anchor = boundary_derivative_anchor(&p.boundary, f.grid()).unwrap();
    let rep = verify_theorem1(&p, &f, 0.05, anchor, &opts()).unwrap();
    assert_eq!(rep.status, Status::Pass);
    let rho_prime = rep.estimates.iter().find(|e| e.name == "rho_prime").unwrap().value;
    let h = 1.0 / 128.0;
    assert_eq!(rho_prime, 1.25 + 0.25 + h * 0.25);
    assert_eq!(rep.inputs.m, Some((rho_prime / 0.05f64).ceil() as usize));
    assert_eq!(rep.tolerance, 2.0 * h * rho_prime);
    assert!(rep.notes.iter().any(|n| n.contains("c0")));
    assert!(!rep.notes.iter().any(|n| n.contains("r/4")));
}

#[test]
fn constant_field_is_reproduced_exactly() {
    let g = UniformGrid::new(1, 33).unwrap();
    let p = problem(
        &g,
        1.0,
        DiffusionModel::constant(1.0).unwrap(),
        BoundarySpec::dirichlet_1d(1.0, 1.0),
    );
    let f = ScalarField::constant(g, 1.0).unwrap();
    for eps in [0.3, 0.01] {
        let rep = verify_theorem1(&p, &f, eps, 0.0, &opts()).unwrap();
        assert_eq!(rep.measured, 0.0);
        assert_eq!(rep.status, Status::Pass);
    }

    let g2 = UniformGrid::new(2, 17).unwrap();
    let p2 = problem(
        &g2,
        1.0,
        DiffusionModel::constant(1.0).unwrap(),
        BoundarySpec::uniform(2, BoundaryCondition::dirichlet(1.0)),
    );
    let f2 = ScalarField::constant(g2, 1.0).unwrap();
    let rep = verify_theorem2(&p2, &f2, 0.25, 1e-3, &opts()).unwrap();
    assert_eq!(rep.inputs.epsilon, Some(0.0));
    // Summing the 2D selector outputs can round by an ulp.
    assert!(rep.measured <= 1e-15, "{}", rep.measured);
    assert_eq!(rep.status, Status::Pass, "{:#?}", rep.checks);
}

#[test]
fn error_does_not_grow_with_m() {
    let (_, f) = fisher_1d(129, 1.0);
    let mut last = f64::INFINITY;
    for m in [10, 20, 40, 80] {
        let net = threshold_net_for_field(&f, m).unwrap();
        let probes = theorem1_probes(&f, &net, &opts());
        let e = sup_error(|x| net.eval(x[0]), |x| f.interpolate(x), &probes).unwrap();
        assert!(e <= last, "m {m}: {e} > {last}");
        last = e;
    }
}

#[test]
fn halving_epsilon_roughly_doubles_m() {
    let (p, f) = fisher_1d(129, 1.0);
    let anchor = boundary_derivative_anchor(&p.boundary, f.grid()).unwrap();
    let m: Vec<usize> = [0.1, 0.05, 0.025]
        .iter()
        .map(|&e| verify_theorem1(&p, &f, e, anchor, &opts()).unwrap().inputs.m.unwrap())
        .collect();
    for w in m.windows(2) {
        assert!(w[1] + 1 >= 2 * w[0], "{m:?}");
    }
}

#[test]
fn non_steady_fields_are_rejected() {
    let (p, _) = fisher_1d(33, 1.0);
    let g = UniformGrid::new(1, 33).unwrap();
    let ramp = ScalarField::from_fn(g, |x| x[0] * x[0]).unwrap();
    assert!(matches!(
        verify_theorem1(&p, &ramp, 0.1, 1.0, &opts()),
        Err(Error::InvalidInput(_))
    ));
    assert!(verify_lemma2_lemma3(&p, &ramp).is_err());
}

#[test]
fn prediction_does_not_depend_on_the_field() {
    let (p, f) = fisher_1d(65, 1.0);
    let (_, f2) = fisher_1d(65, 1.0);
    let a = verify_theorem1(&p, &f, 0.05, 1.0, &opts()).unwrap();
    let b = verify_theorem1(&p, &f2, 0.05, 1.0, &ProbeOptions { count: 500, seed: 7 }).unwrap();
    assert_eq!(a.predicted, b.predicted);
    assert_eq!(a.tolerance, b.tolerance);
}

#[test]
fn theorem2_on_mixed_boundaries() {
    let g = UniformGrid::new(2, 33).unwrap();
    let bc = BoundarySpec::uniform(2, BoundaryCondition::neumann(0.0))
        .with(Face::LEFT, BoundaryCondition::dirichlet(0.0))
        .with(Face::RIGHT, BoundaryCondition::dirichlet(1.0));
    let p = problem(&g, 1.0, DiffusionModel::constant(1.0).unwrap(), bc);
    let f = steady(&p, g);
    let rep = verify_theorem2(&p, &f, 0.25, 1e-4, &opts()).unwrap();
    assert_eq!(rep.status, Status::Pass, "{:#?}", rep.checks);
    assert_eq!(rep.inputs.layer_sizes, Some(vec![128, 16, 1]));
    // Modulus at half the separation never exceeds the modulus at the full one.
    assert!(grid_modulus(&f, 4) <= grid_modulus(&f, 8));
    assert!(matches!(verify_theorem2(&p, &f, 0.25, 0.2, &opts()), Err(Error::InvalidInput(m)) if m.contains("margin")));
}

#[test]
fn lemma1_cases() {
    let (_, f) = fisher_1d(65, 1.0);
    for cells in [1, 2, 4, 8] {
        let rep = verify_lemma1(&f, &RectPartition::uniform(vec![cells]).unwrap()).unwrap();
        assert_eq!(rep.status, Status::Pass);
        assert_eq!(rep.check("stitched_equals_whole").unwrap().measured, 0.0);
    }
    assert!(verify_lemma1(&f, &RectPartition::uniform(vec![3]).unwrap()).is_err());
}

#[test]
fn lemma2_with_pure_diffusion_is_flat() {
    let g = UniformGrid::new(1, 33).unwrap();
    let p = problem(
        &g,
        0.0,
        DiffusionModel::constant(1.0).unwrap(),
        BoundarySpec::dirichlet_1d(0.0, 1.0),
    );
    let f = steady(&p, g);
    let rep = verify_lemma2_lemma3(&p, &f).unwrap();
    assert_eq!(rep.status, Status::Pass);
    assert!(rep.check("derivative_lipschitz").unwrap().measured < 1e-6);
    assert!(rep.notes.iter().any(|n| n.contains("r = 0")));
    assert!(residual_check(&f, &p.diffusion, 0.0).unwrap() < 1e-8);
}

#[test]
fn residual_of_steady_field_is_bounded_by_the_stopping_rule() {
    let (p, f) = fisher_1d(65, 2.0);
    let res = residual_check(&f, &p.diffusion, 2.0).unwrap();
    assert!(res <= p.config.steady_tol / p.config.dt * (1.0 + 1e-9), "{res}");
}

#[test]
fn reports_are_reproducible() {
    let (p, f) = fisher_1d(65, 1.0);
    let mut a = verify_theorem1(&p, &f, 0.05, 1.0, &opts()).unwrap();
    let mut b = verify_theorem1(&p, &f, 0.05, 1.0, &opts()).unwrap();
    a.runtime_ms = 0;
    b.runtime_ms = 0;
    assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
}
