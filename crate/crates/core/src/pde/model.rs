use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{ScalarField, UniformGrid};

/// Diffusion coefficient: a constant `D` or nodal samples of `D(x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum DiffusionModel {
    Constant(f64),
    Heterogeneous(ScalarField),
}

impl DiffusionModel {
    /// Constant coefficient. `D = 0` is accepted so the pure-reaction
    /// dynamics can be exercised; the Lipschitz constants require `D > 0`.
    pub fn constant(d: f64) -> Result<Self> {
        if !d.is_finite() || d < 0.0 {
            return Err(Error::invalid(format!(
                "diffusion coefficient must be finite and >= 0, got {d}"
            )));
        }
        Ok(DiffusionModel::Constant(d))
    }

    /// Spatially varying coefficient; every sample must be strictly positive.
    pub fn heterogeneous(samples: ScalarField) -> Result<Self> {
        let min = samples.min();
        if min <= 0.0 {
            return Err(Error::invalid(format!(
                "heterogeneous diffusion needs positive samples, minimum is {min}"
            )));
        }
        Ok(DiffusionModel::Heterogeneous(samples))
    }

    pub fn d_min(&self) -> f64 {
        match self {
            DiffusionModel::Constant(d) => *d,
            DiffusionModel::Heterogeneous(s) => s.min(),
        }
    }

    pub fn d_max(&self) -> f64 {
        match self {
            DiffusionModel::Constant(d) => *d,
            DiffusionModel::Heterogeneous(s) => s.max(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        matches!(self, DiffusionModel::Constant(_))
    }

    /// Checks that heterogeneous samples live on `grid`.
    pub fn check_grid(&self, grid: &UniformGrid) -> Result<()> {
        match self {
            DiffusionModel::Heterogeneous(s) if s.grid() != grid => Err(Error::GridMismatch(format!(
                "diffusion sampled on {:?}, field on {:?}",
                s.grid(),
                grid
            ))),
            _ => Ok(()),
        }
    }

    #[inline]
    pub(crate) fn at(&self, flat: usize) -> f64 {
        match self {
            DiffusionModel::Constant(d) => *d,
            DiffusionModel::Heterogeneous(s) => s.values()[flat],
        }
    }
}

/// One face of the unit hyper-rectangle: `axis` and whether it is the
/// upper (`coordinate = 1`) or lower (`coordinate = 0`) side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face {
    pub axis: usize,
    pub upper: bool,
}

impl Face {
    pub const LEFT: Face = Face { axis: 0, upper: false };
    pub const RIGHT: Face = Face { axis: 0, upper: true };
    pub const BOTTOM: Face = Face { axis: 1, upper: false };
    pub const TOP: Face = Face { axis: 1, upper: true };

    /// Faces of the unit domain in slot order.
    pub fn all(dim: usize) -> impl Iterator<Item = Face> {
        (0..2 * dim).map(Face::from_slot)
    }

    pub fn slot(&self) -> usize {
        2 * self.axis + usize::from(self.upper)
    }

    pub fn from_slot(slot: usize) -> Face {
        Face {
            axis: slot / 2,
            upper: slot % 2 == 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match (self.axis, self.upper) {
            (0, false) => "left",
            (0, true) => "right",
            (1, false) => "bottom",
            (1, true) => "top",
            _ => "unknown",
        }
    }

    pub fn from_name(name: &str) -> Option<Face> {
        match name {
            "left" => Some(Face::LEFT),
            "right" => Some(Face::RIGHT),
            "bottom" => Some(Face::BOTTOM),
            "top" => Some(Face::TOP),
            _ => None,
        }
    }
}

type BoundaryFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Boundary data `g(x)` or `h(x)`.
#[derive(Clone)]
pub enum BoundaryValue {
    Constant(f64),
    Function(BoundaryFn),
}

impl BoundaryValue {
    pub fn function(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        BoundaryValue::Function(Arc::new(f))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            BoundaryValue::Constant(v) => *v,
            BoundaryValue::Function(f) => f(x),
        }
    }
}

impl fmt::Debug for BoundaryValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryValue::Constant(v) => write!(f, "Constant({v})"),
            BoundaryValue::Function(_) => f.write_str("Function(..)"),
        }
    }
}

/// Condition on one face.
///
/// Neumann data is the derivative along the face's axis, `du/dx_axis`, so
/// the lower-face ghost node is `u[-1] = u[1] - 2 h q` and the upper-face
/// ghost is `u[n] = u[n-2] + 2 h q`.
#[derive(Debug, Clone)]
pub enum BoundaryCondition {
    Dirichlet(BoundaryValue),
    Neumann(BoundaryValue),
}

impl BoundaryCondition {
    pub fn dirichlet(v: f64) -> Self {
        BoundaryCondition::Dirichlet(BoundaryValue::Constant(v))
    }

    pub fn neumann(q: f64) -> Self {
        BoundaryCondition::Neumann(BoundaryValue::Constant(q))
    }

    pub fn is_dirichlet(&self) -> bool {
        matches!(self, BoundaryCondition::Dirichlet(_))
    }

    pub fn value(&self) -> &BoundaryValue {
        match self {
            BoundaryCondition::Dirichlet(v) | BoundaryCondition::Neumann(v) => v,
        }
    }
}

/// Exactly one condition per face of the unit domain.
#[derive(Debug, Clone)]
pub struct BoundarySpec {
    faces: Vec<BoundaryCondition>,
}

impl BoundarySpec {
    /// `faces` in slot order: left, right[, bottom, top].
    pub fn new(dim: usize, faces: Vec<BoundaryCondition>) -> Result<Self> {
        if faces.len() != 2 * dim {
            return Err(Error::invalid(format!(
                "{dim}-dimensional domain has {} faces, got {} conditions",
                2 * dim,
                faces.len()
            )));
        }
        Ok(Self { faces })
    }

    pub fn uniform(dim: usize, cond: BoundaryCondition) -> Self {
        Self {
            faces: vec![cond; 2 * dim],
        }
    }

    pub fn dirichlet_1d(left: f64, right: f64) -> Self {
        Self {
            faces: vec![BoundaryCondition::dirichlet(left), BoundaryCondition::dirichlet(right)],
        }
    }

    pub fn dim(&self) -> usize {
        self.faces.len() / 2
    }

    pub fn face(&self, face: Face) -> &BoundaryCondition {
        &self.faces[face.slot()]
    }

    pub fn faces(&self) -> impl Iterator<Item = (Face, &BoundaryCondition)> {
        self.faces.iter().enumerate().map(|(i, c)| (Face::from_slot(i), c))
    }

    pub fn with(mut self, face: Face, cond: BoundaryCondition) -> Self {
        self.faces[face.slot()] = cond;
        self
    }

    /// Resolves the conditions onto grid nodes.
    ///
    /// A node touching a Dirichlet face is a Dirichlet node; when several
    /// Dirichlet faces meet at a corner the one with the lowest slot wins.
    pub fn assemble(&self, grid: &UniformGrid) -> Result<AssembledBoundary> {
        if self.dim() != grid.dim() {
            return Err(Error::GridMismatch(format!(
                "boundary spec is {}-dimensional, grid is {}-dimensional",
                self.dim(),
                grid.dim()
            )));
        }
        let n = grid.n();
        let mut dirichlet = vec![None; grid.len()];
        let mut flux: Vec<Option<Vec<f64>>> = vec![None; self.faces.len()];
        for (face, cond) in self.faces() {
            let on_face = |idx: &[usize]| idx[face.axis] == if face.upper { n - 1 } else { 0 };
            if let BoundaryCondition::Neumann(_) = cond {
                flux[face.slot()] = Some(vec![0.0; grid.len()]);
            }
            for p in 0..grid.len() {
                let idx = grid.unravel(p);
                if !on_face(&idx) {
                    continue;
                }
                let x = grid.point(p);
                let v = cond.value().eval(&x[..grid.dim()]);
                if !v.is_finite() {
                    return Err(Error::invalid(format!(
                        "{} boundary data is not finite at {:?}",
                        face.name(),
                        &x[..grid.dim()]
                    )));
                }
                match cond {
                    BoundaryCondition::Dirichlet(_) => {
                        if dirichlet[p].is_none() {
                            dirichlet[p] = Some(v);
                        }
                    }
                    BoundaryCondition::Neumann(_) => {
                        if let Some(f) = flux[face.slot()].as_mut() {
                            f[p] = v;
                        }
                    }
                }
            }
        }
        Ok(AssembledBoundary { dirichlet, flux })
    }
}

/// Boundary conditions resolved onto the nodes of one grid.
#[derive(Debug, Clone)]
pub struct AssembledBoundary {
    /// Prescribed value for Dirichlet nodes.
    pub dirichlet: Vec<Option<f64>>,
    /// Per face slot: nodal Neumann data (meaningful on that face only).
    pub flux: Vec<Option<Vec<f64>>>,
}

impl AssembledBoundary {
    pub fn is_dirichlet(&self, flat: usize) -> bool {
        self.dirichlet[flat].is_some()
    }

    pub(crate) fn flux_at(&self, face: Face, flat: usize) -> f64 {
        self.flux[face.slot()].as_ref().map_or(0.0, |f| f[flat])
    }

    /// Sup of |g| and |h| over boundary nodes.
    pub fn data_sup(&self) -> f64 {
        let d = self.dirichlet.iter().flatten().map(|v| v.abs());
        let q = self.flux.iter().flatten().flat_map(|f| f.iter().map(|v| v.abs()));
        d.chain(q).fold(0.0, f64::max)
    }
}

/// Time stepping parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    /// Growth rate `r`.
    pub r: f64,
    pub dt: f64,
    pub max_steps: u64,
    /// Sup-norm increment below which an iterate counts as steady.
    pub steady_tol: f64,
    pub snapshot_times: Option<Vec<f64>>,
}

impl SolveConfig {
    pub fn new(r: f64, dt: f64, max_steps: u64, steady_tol: f64) -> Result<Self> {
        let cfg = Self {
            r,
            dt,
            max_steps,
            steady_tol,
            snapshot_times: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_snapshots(mut self, times: Vec<f64>) -> Self {
        self.snapshot_times = Some(times);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.r.is_finite() || self.r < 0.0 {
            return Err(Error::config(format!(
                "growth rate r must be finite and >= 0, got {}",
                self.r
            )));
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::config(format!("dt must be positive, got {}", self.dt)));
        }
        if !self.steady_tol.is_finite() || self.steady_tol <= 0.0 {
            return Err(Error::config(format!(
                "steady_tol must be positive, got {}",
                self.steady_tol
            )));
        }
        Ok(())
    }
}

/// Explicit-Euler limit `h^2 / (2 dim D_max)`; infinite when `D_max = 0`.
pub fn stability_limit(grid: &UniformGrid, diffusion: &DiffusionModel) -> f64 {
    let h = grid.spacing();
    let d_max = diffusion.d_max();
    if d_max == 0.0 {
        f64::INFINITY
    } else {
        h * h / (2.0 * grid.dim() as f64 * d_max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_slots_round_trip() {
        for (slot, face) in Face::all(2).enumerate() {
            assert_eq!(face.slot(), slot);
            assert_eq!(Face::from_name(face.name()), Some(face));
        }
        assert_eq!(Face::from_name("front"), None);
    }

    #[test]
    fn diffusion_invariants() {
        assert!(DiffusionModel::constant(-1.0).is_err());
        assert!(DiffusionModel::constant(f64::NAN).is_err());
        let g = UniformGrid::new(1, 5).unwrap();
        let zero_somewhere = ScalarField::from_fn(g, |x| x[0]).unwrap();
        assert!(DiffusionModel::heterogeneous(zero_somewhere).is_err());
        let d = DiffusionModel::heterogeneous(ScalarField::from_fn(g, |x| 1.0 + x[0]).unwrap()).unwrap();
        assert_eq!(d.d_min(), 1.0);
        assert_eq!(d.d_max(), 2.0);
        let other = UniformGrid::new(1, 7).unwrap();
        assert!(d.check_grid(&other).is_err());
    }

    #[test]
    fn dirichlet_takes_corners() {
        let g = UniformGrid::new(2, 4).unwrap();
        let bc = BoundarySpec::new(
            2,
            vec![
                BoundaryCondition::dirichlet(0.0),
                BoundaryCondition::dirichlet(1.0),
                BoundaryCondition::neumann(0.0),
                BoundaryCondition::neumann(0.5),
            ],
        )
        .unwrap();
        let a = bc.assemble(&g).unwrap();
        assert_eq!(a.dirichlet[g.ravel(&[0, 0])], Some(0.0));
        assert_eq!(a.dirichlet[g.ravel(&[3, 3])], Some(1.0));
        assert_eq!(a.dirichlet[g.ravel(&[1, 3])], None);
        assert_eq!(a.flux_at(Face::TOP, g.ravel(&[1, 3])), 0.5);
        assert_eq!(a.data_sup(), 1.0);
    }

    #[test]
    fn rejects_non_finite_boundary_data() {
        let g = UniformGrid::new(1, 4).unwrap();
        let bc = BoundarySpec::dirichlet_1d(0.0, f64::INFINITY);
        assert!(bc.assemble(&g).is_err());
        assert!(BoundarySpec::new(1, vec![BoundaryCondition::dirichlet(0.0)]).is_err());
    }

    #[test]
    fn solve_config_validation() {
        assert!(SolveConfig::new(1.0, 0.0, 10, 1e-9).is_err());
        assert!(SolveConfig::new(1.0, 1e-3, 10, 0.0).is_err());
        assert!(SolveConfig::new(-1.0, 1e-3, 10, 1e-9).is_err());
        assert!(SolveConfig::new(0.0, 1e-3, 10, 1e-9).is_ok());
    }
}
