use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::UniformGrid;

/// Default number of random probes per verification.
pub const DEFAULT_PROBES: usize = 10_000;
/// Default seed for every pseudo-random probe set.
pub const DEFAULT_SEED: u64 = 42;

/// Offset of the points placed on either side of a breakpoint.
pub const BREAKPOINT_OFFSET: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeOptions {
    pub count: usize,
    pub seed: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        Self {
            count: DEFAULT_PROBES,
            seed: DEFAULT_SEED,
        }
    }
}

/// `count` points drawn uniformly from `[0, 1)^dim`.
pub fn uniform_probes(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect())
        .collect()
}

/// Every node of the grid.
pub fn node_probes(grid: &UniformGrid) -> Vec<Vec<f64>> {
    (0..grid.len()).map(|p| grid.point(p)[..grid.dim()].to_vec()).collect()
}

/// Points `b - offset`, `b`, `b + offset` for each breakpoint, kept inside
/// `[0, 1)`.
pub fn breakpoint_probes(breakpoints: &[f64]) -> Vec<Vec<f64>> {
    breakpoints
        .iter()
        .flat_map(|&b| [b - BREAKPOINT_OFFSET, b, b + BREAKPOINT_OFFSET])
        .filter(|x| (0.0..1.0).contains(x))
        .map(|x| vec![x])
        .collect()
}

/// `max |net(x) - reference(x)|` over the probes.
pub fn sup_error(
    net: impl Fn(&[f64]) -> Result<f64>,
    reference: impl Fn(&[f64]) -> Result<f64>,
    probes: &[Vec<f64>],
) -> Result<f64> {
    if probes.is_empty() {
        return Err(Error::invalid("sup_error needs at least one probe"));
    }
    let mut sup: f64 = 0.0;
    for x in probes {
        sup = sup.max(abs_error(&net, &reference, x)?);
    }
    Ok(sup)
}

/// Mean of `|net(x) - reference(x)|` over the probes.
pub fn mean_error(
    net: impl Fn(&[f64]) -> Result<f64>,
    reference: impl Fn(&[f64]) -> Result<f64>,
    probes: &[Vec<f64>],
) -> Result<f64> {
    if probes.is_empty() {
        return Err(Error::invalid("mean_error needs at least one probe"));
    }
    let mut total = 0.0;
    for x in probes {
        total += abs_error(&net, &reference, x)?;
    }
    Ok(total / probes.len() as f64)
}

pub(crate) fn abs_error(
    net: impl Fn(&[f64]) -> Result<f64>,
    reference: impl Fn(&[f64]) -> Result<f64>,
    x: &[f64],
) -> Result<f64> {
    let wrap = |e: Error| Error::Evaluation {
        probe: x.to_vec(),
        reason: e.to_string(),
    };
    let a = net(x).map_err(wrap)?;
    let b = reference(x).map_err(wrap)?;
    let err = (a - b).abs();
    if err.is_nan() {
        return Err(Error::Evaluation {
            probe: x.to_vec(),
            reason: "NaN".into(),
        });
    }
    Ok(err)
}
