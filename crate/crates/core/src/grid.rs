//! Uniform node grids on the unit hyper-rectangle and scalar fields sampled on them.
//!
//! Nodes are stored row-major with axis 0 (x) as the outermost index, so in 2D
//! the flat index of node `(i, j)` is `i * n + j`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dimension the solver and grid helpers support.
pub const MAX_DIM: usize = 2;

/// Multi-index of a grid node; entries past `dim` are zero.
pub type NodeIndex = [usize; MAX_DIM];

/// Point in the unit hyper-rectangle; entries past `dim` are zero.
pub type Point = [f64; MAX_DIM];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformGrid {
    dim: usize,
    n: usize,
}

impl UniformGrid {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(Error::invalid(format!("grid dimension must be 1 or 2, got {dim}")));
        }
        if n < 3 {
            return Err(Error::invalid(format!("need at least 3 points per axis, got {n}")));
        }
        Ok(Self { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid spacing `1 / (n - 1)`.
    pub fn spacing(&self) -> f64 {
        1.0 / (self.n - 1) as f64
    }

    /// Total number of nodes, `n^dim`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat-index distance between neighbours along `axis`.
    pub fn stride(&self, axis: usize) -> usize {
        self.n.pow((self.dim - 1 - axis) as u32)
    }

    /// Coordinate of the `i`-th node along any axis. Exact at both ends.
    pub fn coord(&self, i: usize) -> f64 {
        if i == self.n - 1 {
            1.0
        } else {
            i as f64 / (self.n - 1) as f64
        }
    }

    pub fn unravel(&self, flat: usize) -> NodeIndex {
        let mut idx = [0; MAX_DIM];
        let mut rest = flat;
        for axis in (0..self.dim).rev() {
            idx[axis] = rest % self.n;
            rest /= self.n;
        }
        idx
    }

    pub fn ravel(&self, idx: &NodeIndex) -> usize {
        (0..self.dim).fold(0, |acc, axis| acc * self.n + idx[axis])
    }

    pub fn point(&self, flat: usize) -> Point {
        let idx = self.unravel(flat);
        let mut p = [0.0; MAX_DIM];
        for axis in 0..self.dim {
            p[axis] = self.coord(idx[axis]);
        }
        p
    }

    pub fn is_boundary(&self, flat: usize) -> bool {
        let idx = self.unravel(flat);
        idx[..self.dim].iter().any(|&i| i == 0 || i == self.n - 1)
    }

    /// Iterator over flat indices of nodes that are interior along every axis.
    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&p| !self.is_boundary(p))
    }
}

/// Values on every node of a [`UniformGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: UniformGrid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite value {} at node {i}", values[i])));
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: UniformGrid, value: f64) -> Result<Self> {
        Self::new(grid, vec![value; grid.len()])
    }

    /// Samples `f` at every node. `f` receives the first `dim` coordinates.
    pub fn from_fn(grid: UniformGrid, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let values = (0..grid.len()).map(|p| f(&grid.point(p)[..grid.dim()])).collect();
        Self::new(grid, values)
    }

    /// Constructor for internal callers that already guarantee the invariants.
    pub(crate) fn from_parts_unchecked(grid: UniformGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, idx: &NodeIndex) -> f64 {
        self.values[self.grid.ravel(idx)]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sup-norm distance to another field on the same grid.
    pub fn sup_distance(&self, other: &ScalarField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("fields live on different grids".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Piecewise (multi)linear interpolant of the nodal values.
    ///
    /// `x` must have `dim` coordinates in `[0, 1]`.
    pub fn interpolate(&self, x: &[f64]) -> Result<f64> {
        let dim = self.grid.dim();
        if x.len() != dim {
            return Err(Error::invalid(format!(
                "point has {} coordinates, field is {dim}-dimensional",
                x.len()
            )));
        }
        if let Some(c) = x.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(Error::invalid(format!("coordinate {c} outside [0, 1]")));
        }
        let cells = (self.grid.n() - 1) as f64;
        let mut base = [0usize; MAX_DIM];
        let mut frac = [0.0; MAX_DIM];
        for axis in 0..dim {
            let s = x[axis] * cells;
            let k = (s.floor() as usize).min(self.grid.n() - 2);
            base[axis] = k;
            frac[axis] = s - k as f64;
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << dim) {
            let mut idx = base;
            let mut weight = 1.0;
            for axis in 0..dim {
                if corner >> axis & 1 == 1 {
                    idx[axis] += 1;
                    weight *= frac[axis];
                } else {
                    weight *= 1.0 - frac[axis];
                }
            }
            if weight != 0.0 {
                acc += weight * self.get(&idx);
            }
        }
        Ok(acc)
    }
}
