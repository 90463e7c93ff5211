//! Central-difference diffusion operators.

use crate::error::Result;
use crate::grid::{NodeIndex, ScalarField, UniformGrid, MAX_DIM};
use crate::pde::model::{AssembledBoundary, DiffusionModel, Face};

/// Walks flat indices together with their multi-index without div/mod.
pub(crate) struct NodeWalk {
    dim: usize,
    n: usize,
    idx: NodeIndex,
    flat: usize,
    len: usize,
}

impl NodeWalk {
    pub(crate) fn new(grid: &UniformGrid) -> Self {
        Self {
            dim: grid.dim(),
            n: grid.n(),
            idx: [0; MAX_DIM],
            flat: 0,
            len: grid.len(),
        }
    }
}

impl Iterator for NodeWalk {
    type Item = (usize, NodeIndex);

    fn next(&mut self) -> Option<Self::Item> {
        if self.flat == self.len {
            return None;
        }
        let item = (self.flat, self.idx);
        self.flat += 1;
        for axis in (0..self.dim).rev() {
            self.idx[axis] += 1;
            if self.idx[axis] < self.n {
                break;
            }
            self.idx[axis] = 0;
        }
        Some(item)
    }
}

/// Diffusion contribution along one axis given the two neighbour values
/// (possibly ghosts) and their coefficients.
#[inline]
#[allow(clippy::too_many_arguments)]
fn axis_term(diffusion: &DiffusionModel, u: f64, lo: f64, hi: f64, d: f64, d_lo: f64, d_hi: f64, inv_h2: f64) -> f64 {
    match diffusion {
        DiffusionModel::Constant(c) => c * (lo - 2.0 * u + hi) * inv_h2,
        DiffusionModel::Heterogeneous(_) => {
            let face_hi = 0.5 * (d + d_hi);
            let face_lo = 0.5 * (d + d_lo);
            (face_hi * (hi - u) - face_lo * (u - lo)) * inv_h2
        }
    }
}

fn interior_operator(field: &ScalarField, diffusion: &DiffusionModel) -> ScalarField {
    let grid = *field.grid();
    let u = field.values();
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let mut out = vec![0.0; grid.len()];
    for (p, idx) in NodeWalk::new(&grid) {
        if idx[..grid.dim()].iter().any(|&i| i == 0 || i == grid.n() - 1) {
            continue;
        }
        let mut acc = 0.0;
        for axis in 0..grid.dim() {
            let s = grid.stride(axis);
            acc += axis_term(
                diffusion,
                u[p],
                u[p - s],
                u[p + s],
                diffusion.at(p),
                diffusion.at(p - s),
                diffusion.at(p + s),
                inv_h2,
            );
        }
        out[p] = acc;
    }
    ScalarField::from_parts_unchecked(grid, out)
}

/// Central-difference Laplacian on interior nodes; boundary nodes hold 0.
pub fn laplacian(field: &ScalarField) -> Result<ScalarField> {
    Ok(interior_operator(field, &DiffusionModel::Constant(1.0)))
}

/// Flux-form `div(D grad u)` on interior nodes with arithmetic-mean face
/// coefficients; boundary nodes hold 0. A constant `D` reduces to
/// `D * laplacian(field)`.
pub fn heterogeneous_divergence(field: &ScalarField, diffusion: &DiffusionModel) -> Result<ScalarField> {
    diffusion.check_grid(field.grid())?;
    Ok(interior_operator(field, diffusion))
}

/// Diffusion term at every non-Dirichlet node, using mirrored ghost nodes on
/// Neumann faces. Dirichlet entries of `out` are left at 0.
pub(crate) fn diffusion_term(
    grid: &UniformGrid,
    u: &[f64],
    diffusion: &DiffusionModel,
    boundary: &AssembledBoundary,
    out: &mut [f64],
) {
    let h = grid.spacing();
    let inv_h2 = 1.0 / (h * h);
    let last = grid.n() - 1;
    for (p, idx) in NodeWalk::new(grid) {
        if boundary.is_dirichlet(p) {
            out[p] = 0.0;
            continue;
        }
        let mut acc = 0.0;
        for axis in 0..grid.dim() {
            let s = grid.stride(axis);
            let i = idx[axis];
            let (lo, d_lo) = if i == 0 {
                let q = boundary.flux_at(Face { axis, upper: false }, p);
                (u[p + s] - 2.0 * h * q, diffusion.at(p + s))
            } else {
                (u[p - s], diffusion.at(p - s))
            };
            let (hi, d_hi) = if i == last {
                let q = boundary.flux_at(Face { axis, upper: true }, p);
                (u[p - s] + 2.0 * h * q, diffusion.at(p - s))
            } else {
                (u[p + s], diffusion.at(p + s))
            };
            acc += axis_term(diffusion, u[p], lo, hi, diffusion.at(p), d_lo, d_hi, inv_h2);
        }
        out[p] = acc;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn grid(dim: usize, n: usize) -> UniformGrid {
        UniformGrid::new(dim, n).unwrap()
    }

    #[test]
    fn node_walk_matches_unravel() {
        let g = grid(2, 5);
        for (p, idx) in NodeWalk::new(&g) {
            assert_eq!(g.unravel(p), idx);
        }
        assert_eq!(NodeWalk::new(&g).count(), 25);
    }

    #[test]
    fn laplacian_of_linear_is_zero() {
        for n in [3, 9, 33] {
            let u = ScalarField::from_fn(grid(1, n), |x| x[0]).unwrap();
            let l = laplacian(&u).unwrap();
            assert!(l.values().iter().all(|v| v.abs() < 1e-9), "{:?}", l.values());
        }
    }

    #[test]
    fn laplacian_exact_on_quadratics() {
        let u = ScalarField::from_fn(grid(1, 5), |x| x[0] * x[0]).unwrap();
        let l = laplacian(&u).unwrap();
        assert_eq!(l.values()[0], 0.0);
        assert_eq!(l.values()[4], 0.0);
        for v in &l.values()[1..4] {
            assert!((v - 2.0).abs() < 1e-12);
        }

        let g = grid(2, 5);
        let u = ScalarField::from_fn(g, |x| x[0] * x[0] + x[1] * x[1]).unwrap();
        let l = laplacian(&u).unwrap();
        for p in g.interior() {
            assert!((l.values()[p] - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_coefficient_divergence_matches_scaled_laplacian() {
        let g = grid(2, 9);
        let u = ScalarField::from_fn(g, |x| (3.0 * x[0]).sin() * x[1].exp()).unwrap();
        let div = heterogeneous_divergence(&u, &DiffusionModel::Constant(0.7)).unwrap();
        let lap = laplacian(&u).unwrap();
        for (a, b) in div.values().iter().zip(lap.values()) {
            assert!((a - 0.7 * b).abs() <= 1e-12);
        }
    }

    #[test]
    fn divergence_of_constant_field_vanishes() {
        let g = grid(1, 11);
        let d = DiffusionModel::heterogeneous(ScalarField::from_fn(g, |x| 1.0 + 5.0 * x[0] * x[0]).unwrap()).unwrap();
        let u = ScalarField::constant(g, 0.5).unwrap();
        let div = heterogeneous_divergence(&u, &d).unwrap();
        assert!(div.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn divergence_rejects_grid_mismatch() {
        let d = DiffusionModel::heterogeneous(ScalarField::constant(grid(1, 5), 1.0).unwrap()).unwrap();
        let u = ScalarField::constant(grid(1, 7), 0.0).unwrap();
        assert!(matches!(heterogeneous_divergence(&u, &d), Err(Error::GridMismatch(_))));
    }
}
