//! TOML run configuration.
//!
//! ```toml
//! dim = 1
//! n = 257
//! r = 1.0
//! steady_tol = 1e-12        # optional
//! # dt = 1e-5               # optional, defaults to 0.9 of the stability limit
//! # max_steps = 50000000
//! # snapshot_times = [0.1]
//!
//! [init]
//! kind = "linear"            # linear (u = x) | constant
//! # value = 0.5
//!
//! [diffusion]
//! kind = "constant"          # constant | affine | heterogeneous
//! value = 1.0                # affine: D = value + slope * x
//! # slope = 1.0
//! # field_csv = "d.csv"      # heterogeneous, relative to this file
//!
//! [bc.left]
//! kind = "dirichlet"
//! value = 0.0
//!
//! [bc.right]
//! kind = "dirichlet"
//! value = 1.0
//!
//! [synth]
//! kind = "threshold"         # threshold | selector
//! epsilon = 0.05
//!
//! [verify]
//! epsilon = 0.05
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::{ScalarField, UniformGrid};
use crate::io::read_field;
use crate::pde::{stability_limit, BoundaryCondition, BoundarySpec, DiffusionModel, Face, SolveConfig};
use crate::verify::Problem;

pub const DEFAULT_STEADY_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_STEPS: u64 = 50_000_000;
/// Default `dt` as a fraction of the explicit stability limit.
pub const DEFAULT_DT_FRACTION: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    #[default]
    Linear,
    Constant,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitSection {
    #[serde(default)]
    pub kind: InitKind,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffusionKind {
    Constant,
    Affine,
    Heterogeneous,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiffusionSection {
    pub kind: DiffusionKind,
    pub value: Option<f64>,
    pub slope: Option<f64>,
    pub field_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcKind {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcSection {
    pub kind: BcKind,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetKind {
    Threshold,
    Selector,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSection {
    pub kind: Option<NetKind>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub gamma: Option<f64>,
    pub tiling: Option<Vec<usize>>,
    pub sizes: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub dim: usize,
    pub n: usize,
    pub r: f64,
    pub dt: Option<f64>,
    pub max_steps: Option<u64>,
    pub steady_tol: Option<f64>,
    pub snapshot_times: Option<Vec<f64>>,
    pub probes: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub init: InitSection,
    pub diffusion: DiffusionSection,
    #[serde(default)]
    pub bc: BTreeMap<String, BcSection>,
    #[serde(default)]
    pub synth: SynthSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub sweep: SweepSection,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// Hex SHA-256 of a byte string.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.grid()?;
        Ok(cfg)
    }

    /// Loads a config file and returns it with the digest of its bytes.
    pub fn load(path: &Path) -> Result<(Self, String)> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let text =
            std::str::from_utf8(&bytes).map_err(|_| Error::config(format!("{} is not UTF-8", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        let cfg = Self::parse(text, &base).map_err(|e| match e {
            Error::Config(msg) => Error::config(format!("{}: {msg}", path.display())),
            other => other,
        })?;
        Ok((cfg, sha256_hex(&bytes)))
    }

    pub fn grid(&self) -> Result<UniformGrid> {
        UniformGrid::new(self.dim, self.n).map_err(|e| Error::config(e.to_string()))
    }

    pub fn diffusion_model(&self) -> Result<DiffusionModel> {
        let grid = self.grid()?;
        let d = &self.diffusion;
        let need_value = || d.value.ok_or_else(|| Error::config("diffusion.value is required"));
        match d.kind {
            DiffusionKind::Constant => DiffusionModel::constant(need_value()?),
            DiffusionKind::Affine => {
                let (v, s) = (need_value()?, d.slope.unwrap_or(0.0));
                DiffusionModel::heterogeneous(ScalarField::from_fn(grid, |x| v + s * x[0])?)
            }
            DiffusionKind::Heterogeneous => {
                let rel = d
                    .field_csv
                    .as_ref()
                    .ok_or_else(|| Error::config("diffusion.field_csv is required for heterogeneous diffusion"))?;
                let samples = read_field(&self.base_dir.join(rel))?;
                if *samples.grid() != grid {
                    return Err(Error::config(format!(
                        "diffusion field is {}D with n = {}, config grid is {}D with n = {}",
                        samples.grid().dim(),
                        samples.grid().n(),
                        grid.dim(),
                        grid.n()
                    )));
                }
                DiffusionModel::heterogeneous(samples)
            }
        }
    }

    /// Boundary conditions; faces not listed default to zero-flux Neumann.
    pub fn boundary(&self) -> Result<BoundarySpec> {
        let mut spec = BoundarySpec::uniform(self.dim, BoundaryCondition::neumann(0.0));
        for (name, sec) in &self.bc {
            let face = Face::from_name(name)
                .filter(|f| f.axis < self.dim)
                .ok_or_else(|| Error::config(format!("unknown face bc.{name} for a {}D grid", self.dim)))?;
            let cond = match sec.kind {
                BcKind::Dirichlet => BoundaryCondition::dirichlet(sec.value),
                BcKind::Neumann => BoundaryCondition::neumann(sec.value),
            };
            spec = spec.with(face, cond);
        }
        Ok(spec)
    }

    pub fn solve_config(&self, diffusion: &DiffusionModel) -> Result<SolveConfig> {
        let grid = self.grid()?;
        let dt = match self.dt {
            Some(dt) => dt,
            None => {
                let limit = stability_limit(&grid, diffusion);
                if !limit.is_finite() {
                    return Err(Error::config("dt is required when the diffusion coefficient is zero"));
                }
                DEFAULT_DT_FRACTION * limit
            }
        };
        let mut cfg = SolveConfig::new(
            self.r,
            dt,
            self.max_steps.unwrap_or(DEFAULT_MAX_STEPS),
            self.steady_tol.unwrap_or(DEFAULT_STEADY_TOL),
        )?;
        cfg.snapshot_times = self.snapshot_times.clone();
        Ok(cfg)
    }

    pub fn problem(&self) -> Result<Problem> {
        let diffusion = self.diffusion_model()?;
        let config = self.solve_config(&diffusion)?;
        Ok(Problem {
            boundary: self.boundary()?,
            diffusion,
            config,
        })
    }

    pub fn initial_field(&self) -> Result<ScalarField> {
        let grid = self.grid()?;
        match self.init.kind {
            InitKind::Linear => ScalarField::from_fn(grid, |x| x[0]),
            InitKind::Constant => {
                let v = self
                    .init
                    .value
                    .ok_or_else(|| Error::config("init.value is required for constant init"))?;
                ScalarField::constant(grid, v)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"
dim = 1
n = 33
r = 1.0

[diffusion]
kind = "affine"
value = 1.0
slope = 1.0

[bc.left]
kind = "dirichlet"
value = 0.0

[bc.right]
kind = "neumann"
value = 0.5
"#;

    #[test]
    fn parses_and_builds() {
        let cfg = RunConfig::parse(BASIC, Path::new(".")).unwrap();
        let p = cfg.problem().unwrap();
        assert_eq!(p.diffusion.d_min(), 1.0);
        assert_eq!(p.diffusion.d_max(), 2.0);
        assert!(p.boundary.face(Face::LEFT).is_dirichlet());
        assert!(!p.boundary.face(Face::RIGHT).is_dirichlet());
        let limit = stability_limit(&cfg.grid().unwrap(), &p.diffusion);
        assert!((p.config.dt - 0.9 * limit).abs() < 1e-18);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(RunConfig::parse("dim = 1\nn = 33\nr = 1.0\n", Path::new(".")).is_err());
        let bad_key = format!("{BASIC}\nbogus = 1\n");
        assert!(RunConfig::parse(&bad_key, Path::new(".")).is_err());
        let bad_face = BASIC.replace("bc.right", "bc.top");
        assert!(RunConfig::parse(&bad_face, Path::new(".")).unwrap().boundary().is_err());
        let zero_d = BASIC.replace(
            "kind = \"affine\"\nvalue = 1.0\nslope = 1.0",
            "kind = \"constant\"\nvalue = 0.0",
        );
        let cfg = RunConfig::parse(&zero_d, Path::new(".")).unwrap();
        assert!(matches!(cfg.problem(), Err(Error::Config(_))));
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
