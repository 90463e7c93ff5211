//! Analytic Lipschitz and derivative bounds for steady Fisher-KPP solutions,
//! and brute-force empirical counterparts measured on grid fields.
//!
//! Analytic side:
//!
//! * the reaction term `r u (1 - u)` lies in `[0, r/4]` for `u` in `[0, 1]`;
//! * `u'` is Lipschitz with constant `r/4` (homogeneous) or `r / (4 D_min)`
//!   (heterogeneous);
//! * `|u'| <= C = anchor + rho * diameter`, where `anchor` bounds `|u'|` at
//!   some point of the domain;
//! * `u` itself is Lipschitz with `rho' = C + rho + h * rho`.
//!
//! Empirical side: maxima of difference quotients over adjacent grid nodes.
//! Only centred derivatives are used, so nodes on the boundary never
//! contribute a one-sided derivative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{NodeIndex, ScalarField, UniformGrid, MAX_DIM};
use crate::pde::{BoundaryCondition, BoundarySpec, Face, NodeWalk};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    WholeDomain,
    Subdomain(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantKind {
    SolutionLipschitz,
    DerivativeLipschitz,
    DerivativeBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzEstimate {
    pub rho: f64,
    pub method: Method,
    pub scope: Scope,
    pub kind: ConstantKind,
}

impl LipschitzEstimate {
    pub fn analytic(rho: f64, kind: ConstantKind) -> Self {
        Self {
            rho,
            method: Method::Analytic,
            scope: Scope::WholeDomain,
            kind,
        }
    }

    fn empirical(rho: f64, kind: ConstantKind, scope: Scope) -> Self {
        Self {
            rho,
            method: Method::Empirical,
            scope,
            kind,
        }
    }
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive, got {v}")))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be finite and >= 0, got {v}")))
    }
}

/// Range of the logistic reaction term over `u` in `[0, 1]`.
pub fn reaction_bounds(r: f64) -> Result<Interval> {
    positive("r", r)?;
    Ok(Interval { lo: 0.0, hi: r / 4.0 })
}

/// Lipschitz constant of `u'` for constant diffusion: `r/4`.
///
/// The diffusion coefficient does not enter; `r / (4 D)` would be the
/// dimensionally consistent value and coincides with this one at `D = 1`.
pub fn derivative_lipschitz_homogeneous(r: f64) -> Result<f64> {
    Ok(reaction_bounds(r)?.hi)
}

/// Lipschitz constant of `u'` for spatially varying diffusion: `r / (4 D_min)`.
pub fn derivative_lipschitz_heterogeneous(r: f64, d_min: f64) -> Result<f64> {
    positive("d_min", d_min)?;
    Ok(reaction_bounds(r)?.hi / d_min)
}

/// Bound on `|u'|` over a domain of the given diameter, from a derivative
/// bound at one anchor point and the Lipschitz constant of `u'`.
pub fn derivative_bound(anchor_derivative: f64, domain_diameter: f64, derivative_lipschitz: f64) -> Result<f64> {
    non_negative("anchor derivative", anchor_derivative)?;
    non_negative("domain diameter", domain_diameter)?;
    non_negative("derivative Lipschitz constant", derivative_lipschitz)?;
    Ok(anchor_derivative + derivative_lipschitz * domain_diameter)
}

/// Lipschitz constant of the solution itself, `rho' = C + rho + h rho`.
pub fn solution_lipschitz(c: f64, rho: f64, h: f64) -> Result<f64> {
    non_negative("C", c)?;
    non_negative("rho", rho)?;
    non_negative("h", h)?;
    Ok(c + rho + h * rho)
}

/// Closed box of grid nodes, `lo[k] <= idx[k] <= hi[k]` on every axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeBox {
    pub lo: NodeIndex,
    pub hi: NodeIndex,
}

impl NodeBox {
    pub fn whole(grid: &UniformGrid) -> Self {
        let mut hi = [0; MAX_DIM];
        for h in hi.iter_mut().take(grid.dim()) {
            *h = grid.n() - 1;
        }
        Self { lo: [0; MAX_DIM], hi }
    }

    fn contains(&self, dim: usize, idx: &NodeIndex) -> bool {
        (0..dim).all(|k| self.lo[k] <= idx[k] && idx[k] <= self.hi[k])
    }
}

fn max_adjacent_slope(field: &ScalarField, within: &NodeBox) -> f64 {
    let grid = field.grid();
    let u = field.values();
    let inv_h = (grid.n() - 1) as f64;
    let mut best: f64 = 0.0;
    for (p, idx) in NodeWalk::new(grid) {
        if !within.contains(grid.dim(), &idx) {
            continue;
        }
        for axis in 0..grid.dim() {
            if idx[axis] < within.hi[axis] {
                let q = p + grid.stride(axis);
                best = best.max((u[q] - u[p]).abs() * inv_h);
            }
        }
    }
    best
}

/// Largest `|u(q) - u(p)| / |q - p|` over axis-adjacent node pairs.
pub fn empirical_lipschitz(field: &ScalarField) -> LipschitzEstimate {
    let rho = max_adjacent_slope(field, &NodeBox::whole(field.grid()));
    LipschitzEstimate::empirical(rho, ConstantKind::SolutionLipschitz, Scope::WholeDomain)
}

/// As [`empirical_lipschitz`], restricted to pairs inside a closed node box.
pub fn empirical_lipschitz_in(field: &ScalarField, within: &NodeBox, subdomain: usize) -> LipschitzEstimate {
    let rho = max_adjacent_slope(field, within);
    LipschitzEstimate::empirical(rho, ConstantKind::SolutionLipschitz, Scope::Subdomain(subdomain))
}

/// Centred gradient at every node that is interior along all axes.
fn centred_gradients(field: &ScalarField) -> Vec<Option<[f64; MAX_DIM]>> {
    let grid = field.grid();
    let u = field.values();
    let inv_2h = 0.5 * (grid.n() - 1) as f64;
    NodeWalk::new(grid)
        .map(|(p, idx)| {
            if idx[..grid.dim()].iter().any(|&i| i == 0 || i == grid.n() - 1) {
                return None;
            }
            let mut g = [0.0; MAX_DIM];
            for (axis, gk) in g.iter_mut().enumerate().take(grid.dim()) {
                let s = grid.stride(axis);
                *gk = (u[p + s] - u[p - s]) * inv_2h;
            }
            Some(g)
        })
        .collect()
}

/// Largest `|u'(q) - u'(p)| / |q - p|` over adjacent interior nodes, with
/// `u'` the centred difference. In 2D the gradient difference is measured
/// in the Euclidean norm.
pub fn empirical_derivative_lipschitz(field: &ScalarField) -> Result<LipschitzEstimate> {
    let grid = field.grid();
    if grid.n() < 4 {
        return Err(Error::invalid(
            "derivative Lipschitz estimate needs at least 4 nodes per axis",
        ));
    }
    let grads = centred_gradients(field);
    let inv_h = (grid.n() - 1) as f64;
    let mut best: f64 = 0.0;
    for (p, idx) in NodeWalk::new(grid) {
        let Some(gp) = grads[p] else { continue };
        for axis in 0..grid.dim() {
            if idx[axis] + 1 >= grid.n() {
                continue;
            }
            if let Some(gq) = grads[p + grid.stride(axis)] {
                let diff = (0..grid.dim()).map(|k| (gq[k] - gp[k]).powi(2)).sum::<f64>().sqrt();
                best = best.max(diff * inv_h);
            }
        }
    }
    Ok(LipschitzEstimate::empirical(
        best,
        ConstantKind::DerivativeLipschitz,
        Scope::WholeDomain,
    ))
}

/// Largest centred-difference partial derivative `|du/dx_k|` over every node
/// where the centred difference along `k` exists.
pub fn empirical_derivative_sup(field: &ScalarField) -> LipschitzEstimate {
    let grid = field.grid();
    let u = field.values();
    let inv_2h = 0.5 * (grid.n() - 1) as f64;
    let mut best: f64 = 0.0;
    for (p, idx) in NodeWalk::new(grid) {
        for axis in 0..grid.dim() {
            if idx[axis] == 0 || idx[axis] == grid.n() - 1 {
                continue;
            }
            let s = grid.stride(axis);
            best = best.max((u[p + s] - u[p - s]).abs() * inv_2h);
        }
    }
    LipschitzEstimate::empirical(best, ConstantKind::DerivativeBound, Scope::WholeDomain)
}

/// Combines per-subdomain constants into one for their union: the maximum.
pub fn stitch_lipschitz(estimates: &[LipschitzEstimate]) -> Result<LipschitzEstimate> {
    let first = estimates
        .first()
        .ok_or_else(|| Error::invalid("cannot stitch an empty list of estimates"))?;
    if estimates.iter().any(|e| e.kind != first.kind) {
        return Err(Error::invalid("cannot stitch estimates of different kinds"));
    }
    if let Some(bad) = estimates.iter().find(|e| !e.rho.is_finite() || e.rho < 0.0) {
        return Err(Error::invalid(format!("invalid constant {}", bad.rho)));
    }
    let method = if estimates.iter().all(|e| e.method == first.method) {
        first.method
    } else {
        Method::Empirical
    };
    Ok(LipschitzEstimate {
        rho: estimates.iter().map(|e| e.rho).fold(0.0, f64::max),
        method,
        scope: Scope::WholeDomain,
        kind: first.kind,
    })
}

/// Bound on `|du/dx_k|` at some point of the domain, read off the boundary
/// data alone.
///
/// A Neumann face prescribes the derivative directly. When both faces of an
/// axis are Dirichlet, the mean value theorem puts a point on every
/// axis-parallel line where the derivative equals the secant
/// `g(upper) - g(lower)` (the domain has unit width).
pub fn boundary_derivative_anchor(bc: &BoundarySpec, grid: &UniformGrid) -> Result<f64> {
    bc.assemble(grid)?;
    let n = grid.n();
    let mut sup: f64 = 0.0;
    for axis in 0..grid.dim() {
        let lower = bc.face(Face { axis, upper: false });
        let upper = bc.face(Face { axis, upper: true });
        let span = (n - 1) * grid.stride(axis);
        for (p, idx) in NodeWalk::new(grid) {
            if idx[axis] != 0 {
                continue;
            }
            let x_lo = grid.point(p);
            let x_hi = grid.point(p + span);
            let (x_lo, x_hi) = (&x_lo[..grid.dim()], &x_hi[..grid.dim()]);
            let v = match (lower, upper) {
                (BoundaryCondition::Dirichlet(a), BoundaryCondition::Dirichlet(b)) => {
                    (b.eval(x_hi) - a.eval(x_lo)).abs()
                }
                (BoundaryCondition::Neumann(a), BoundaryCondition::Neumann(b)) => {
                    a.eval(x_lo).abs().max(b.eval(x_hi).abs())
                }
                (BoundaryCondition::Neumann(a), _) => a.eval(x_lo).abs(),
                (_, BoundaryCondition::Neumann(b)) => b.eval(x_hi).abs(),
            };
            sup = sup.max(v);
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field1(n: usize, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField::from_fn(UniformGrid::new(1, n).unwrap(), |x| f(x[0])).unwrap()
    }

    #[test]
    fn reaction_bounds_scale_with_r() {
        assert_eq!(reaction_bounds(1.0).unwrap(), Interval { lo: 0.0, hi: 0.25 });
        assert_eq!(reaction_bounds(4.0).unwrap(), Interval { lo: 0.0, hi: 1.0 });
        assert_eq!(reaction_bounds(0.5).unwrap(), Interval { lo: 0.0, hi: 0.125 });
        assert!(reaction_bounds(0.0).is_err());
        assert!(reaction_bounds(-1.0).is_err());
    }

    #[test]
    fn analytic_constants() {
        assert_eq!(derivative_lipschitz_homogeneous(1.0).unwrap(), 0.25);
        assert_eq!(derivative_lipschitz_homogeneous(2.0).unwrap(), 0.5);
        assert_eq!(derivative_lipschitz_heterogeneous(1.0, 1.0).unwrap(), 0.25);
        assert_eq!(derivative_lipschitz_heterogeneous(1.0, 0.25).unwrap(), 1.0);
        assert_eq!(derivative_lipschitz_heterogeneous(2.0, 0.5).unwrap(), 1.0);
        assert!(derivative_lipschitz_heterogeneous(1.0, 0.0).is_err());
        assert!(derivative_lipschitz_heterogeneous(0.0, 1.0).is_err());
    }

    #[test]
    fn derivative_and_solution_bounds() {
        assert_eq!(derivative_bound(0.0, 1.0, 0.25).unwrap(), 0.25);
        assert_eq!(derivative_bound(1.0, 1.0, 0.25).unwrap(), 1.25);
        assert_eq!(derivative_bound(0.5, 0.0, 7.0).unwrap(), 0.5);
        assert!(derivative_bound(-0.1, 1.0, 1.0).is_err());

        assert!((solution_lipschitz(1.0, 0.25, 0.1).unwrap() - 1.275).abs() < 1e-15);
        assert_eq!(solution_lipschitz(0.0, 0.0, 3.0).unwrap(), 0.0);
        assert_eq!(solution_lipschitz(2.0, 1.0, 0.0).unwrap(), 3.0);
        assert!(solution_lipschitz(1.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn empirical_lipschitz_of_simple_functions() {
        for n in [3, 5, 17] {
            assert!((empirical_lipschitz(&field1(n, |x| 3.0 * x)).rho - 3.0).abs() < 1e-12);
        }
        assert_eq!(empirical_lipschitz(&field1(9, |_| 0.4)).rho, 0.0);
        // Adjacent secants of x^2 at h = 1/4: 0.25, 0.75, 1.25, 1.75.
        let secants: Vec<f64> = (0..4)
            .map(|i| ((i + 1) as f64 / 4.0).powi(2) - (i as f64 / 4.0).powi(2))
            .map(|d| d * 4.0)
            .collect();
        let oracle = secants.iter().copied().fold(0.0, f64::max);
        assert!((oracle - 1.75).abs() < 1e-15);
        assert!((empirical_lipschitz(&field1(5, |x| x * x)).rho - oracle).abs() < 1e-12);
    }

    #[test]
    fn empirical_derivative_lipschitz_cases() {
        assert!(
            empirical_derivative_lipschitz(&field1(17, |x| 2.0 * x + 1.0))
                .unwrap()
                .rho
                < 1e-9
        );
        let est = empirical_derivative_lipschitz(&field1(33, |x| 0.5 * x * x)).unwrap();
        assert!((est.rho - 1.0).abs() < 1e-10);
        assert_eq!(est.kind, ConstantKind::DerivativeLipschitz);
        assert!(empirical_derivative_lipschitz(&field1(3, |x| x)).is_err());
    }

    #[test]
    fn derivative_sup_ignores_boundary_nodes() {
        // Steep only between the first two nodes; centred differences never see it alone.
        let g = UniformGrid::new(1, 5).unwrap();
        let f = ScalarField::new(g, vec![0.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!((empirical_derivative_sup(&f).rho - 2.0).abs() < 1e-12);
    }

    #[test]
    fn stitching_takes_the_max() {
        let e = |rho| LipschitzEstimate::empirical(rho, ConstantKind::SolutionLipschitz, Scope::Subdomain(0));
        let s = stitch_lipschitz(&[e(0.1), e(0.7), e(0.3)]).unwrap();
        assert_eq!(s.rho, 0.7);
        assert_eq!(s.scope, Scope::WholeDomain);
        assert_eq!(stitch_lipschitz(&[e(0.4)]).unwrap().rho, 0.4);
        assert!(stitch_lipschitz(&[]).is_err());
        let mixed = [e(0.1), LipschitzEstimate::analytic(0.2, ConstantKind::DerivativeBound)];
        assert!(stitch_lipschitz(&mixed).is_err());
    }

    #[test]
    fn anchor_from_boundary_data() {
        let g = UniformGrid::new(1, 9).unwrap();
        assert_eq!(
            boundary_derivative_anchor(&BoundarySpec::dirichlet_1d(0.0, 1.0), &g).unwrap(),
            1.0
        );
        assert_eq!(
            boundary_derivative_anchor(&BoundarySpec::dirichlet_1d(0.3, 0.3), &g).unwrap(),
            0.0
        );
        let mixed = BoundarySpec::dirichlet_1d(0.0, 1.0).with(Face::RIGHT, BoundaryCondition::neumann(-0.5));
        assert_eq!(boundary_derivative_anchor(&mixed, &g).unwrap(), 0.5);

        let g2 = UniformGrid::new(2, 5).unwrap();
        let bc = BoundarySpec::uniform(2, BoundaryCondition::neumann(0.0))
            .with(Face::LEFT, BoundaryCondition::dirichlet(0.0))
            .with(Face::RIGHT, BoundaryCondition::dirichlet(1.0));
        assert_eq!(boundary_derivative_anchor(&bc, &g2).unwrap(), 1.0);
    }
}
