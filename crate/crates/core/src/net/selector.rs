//! Three-layer ReLU selector network over a rectangle partition.
//!
//! Layer 1 holds four ReLU neurons per (rectangle, coordinate) and forms the
//! trapezoid indicator of `[a, b]` with ramps of width `gamma` outside the
//! interval:
//!
//! ```text
//! f(x) = [relu(x - (a - g)) - relu(x - a)] / g - [relu(x - b) - relu(x - (b + g))] / g
//! ```
//!
//! Each pair of layer-1 neurons shares the weight `1/g`, and their biases
//! differ by exactly 1, so the pair is evaluated as `relu(z) - relu(z - 1)`
//! with `z = (x - c) / g`. For `z >= 1` the difference is exactly 1 in floating
//! point, which keeps plateaus at 1 and the region past the far ramp at 0
//! without rounding residue.
//!
//! Layer 2 holds one neuron per rectangle, `relu(sum_j f_j(x_j) - (d - 1))`,
//! which is 1 on the rectangle, 0 outside the box inflated by `gamma`, and in
//! `[0, 1)` in between. Layer 3 is the weighted sum `sum_i alpha_i s_i(x)`.
//!
//! Written as a printed case table, the zero region is sometimes stated as the
//! complement of `x [a - gamma, b - gamma]`; the upper bound there must be
//! `b + gamma` for the table to agree with the trapezoid, and that is what is
//! implemented.

use crate::error::{Error, Result};
use crate::net::partition::{build_partition, RectPartition};

#[inline]
pub fn relu(z: f64) -> f64 {
    z.max(0.0)
}

/// `relu(z) - relu(z - 1)`: 0 below 0, `z` on `[0, 1]`, exactly 1 above.
#[inline]
fn unit_ramp(z: f64) -> f64 {
    relu(z) - relu(z - 1.0)
}

/// Single ramp rising from 0 at `c1` to 1 at `c2`, built from two ReLUs.
pub fn ramp(z: f64, c1: f64, c2: f64) -> f64 {
    unit_ramp((z - c1) / (c2 - c1))
}

/// Four-ReLU trapezoid approximating the indicator of `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatorUnit {
    a: f64,
    b: f64,
    gamma: f64,
}

impl IndicatorUnit {
    pub fn new(a: f64, b: f64, gamma: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!("indicator needs a < b, got [{a}, {b}]")));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::invalid(format!("gamma must be positive, got {gamma}")));
        }
        Ok(Self { a, b, gamma })
    }

    /// Kinks of the four layer-1 neurons, in increasing order.
    pub fn offsets(&self) -> [f64; 4] {
        [self.a - self.gamma, self.a, self.b, self.b + self.gamma]
    }

    pub fn eval(&self, x: f64) -> f64 {
        let [c0, _, c2, _] = self.offsets();
        unit_ramp((x - c0) / self.gamma) - unit_ramp((x - c2) / self.gamma)
    }
}

/// Trapezoid indicator of `[a, b]` with margin `gamma`.
pub fn build_indicator(a: f64, b: f64, gamma: f64) -> Result<IndicatorUnit> {
    IndicatorUnit::new(a, b, gamma)
}

/// The layer-1 and layer-2 neurons for every rectangle of a partition.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectorBank {
    partition: RectPartition,
    gamma: f64,
    /// `indicators[i * dim + j]` selects coordinate `j` of rectangle `i`.
    indicators: Vec<IndicatorUnit>,
}

impl SelectorBank {
    pub fn partition(&self) -> &RectPartition {
        &self.partition
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Selector of rectangle `i` at `x`.
    pub fn select(&self, i: usize, x: &[f64]) -> f64 {
        let d = self.partition.dim();
        let sum: f64 = self.indicators[i * d..(i + 1) * d]
            .iter()
            .zip(x)
            .map(|(unit, &xj)| unit.eval(xj))
            .sum();
        relu(sum - (d as f64 - 1.0))
    }

    /// All selector values at `x`, in rectangle order.
    pub fn select_all(&self, x: &[f64]) -> Vec<f64> {
        (0..self.partition.len()).map(|i| self.select(i, x)).collect()
    }
}

/// Margin check: ramps of neighbouring rectangles must not reach each
/// other's plateau, so `gamma` must stay below half the smallest side.
fn check_margin(partition: &RectPartition, gamma: f64) -> Result<()> {
    let half = 0.5 * partition.side_length_min();
    if !(gamma.is_finite() && gamma > 0.0 && gamma < half) {
        return Err(Error::invalid(format!(
            "gamma = {gamma} violates the margin invariant 0 < gamma < {half} (half the smallest side)"
        )));
    }
    Ok(())
}

pub fn build_selector(partition: &RectPartition, gamma: f64) -> Result<SelectorBank> {
    check_margin(partition, gamma)?;
    let d = partition.dim();
    let mut indicators = Vec::with_capacity(partition.len() * d);
    for rect in partition.rects() {
        for j in 0..d {
            indicators.push(IndicatorUnit::new(rect.lo[j], rect.hi[j], gamma)?);
        }
    }
    Ok(SelectorBank {
        partition: partition.clone(),
        gamma,
        indicators,
    })
}

/// Default margin: `1e-3` of the smallest rectangle side.
pub fn default_gamma(partition: &RectPartition) -> f64 {
    1e-3 * partition.side_length_min()
}

/// Piecewise-constant scaffold: `alpha_i = target(lower corner of R_i)`.
pub fn build_piecewise_constant(target: impl Fn(&[f64]) -> Result<f64>, partition: &RectPartition) -> Result<Vec<f64>> {
    let d = partition.dim();
    partition.rects().map(|r| target(&r.lo[..d])).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectorNet {
    bank: SelectorBank,
    alphas: Vec<f64>,
}

impl SelectorNet {
    pub fn new(partition: &RectPartition, alphas: Vec<f64>, gamma: f64) -> Result<Self> {
        if alphas.len() != partition.len() {
            return Err(Error::invalid(format!(
                "{} coefficients for {} rectangles",
                alphas.len(),
                partition.len()
            )));
        }
        if let Some(a) = alphas.iter().find(|a| !a.is_finite()) {
            return Err(Error::invalid(format!("non-finite coefficient {a}")));
        }
        Ok(Self {
            bank: build_selector(partition, gamma)?,
            alphas,
        })
    }

    pub fn partition(&self) -> &RectPartition {
        self.bank.partition()
    }

    pub fn bank(&self) -> &SelectorBank {
        &self.bank
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn gamma(&self) -> f64 {
        self.bank.gamma()
    }

    pub fn dim(&self) -> usize {
        self.partition().dim()
    }

    /// `[4 d N, N, 1]`.
    pub fn layer_sizes(&self) -> Vec<usize> {
        let n = self.partition().len();
        vec![4 * self.dim() * n, n, 1]
    }

    pub fn neuron_count(&self) -> usize {
        self.layer_sizes().iter().sum()
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::invalid(format!(
                "expected {} coordinates, got {}",
                self.dim(),
                x.len()
            )));
        }
        if let Some(c) = x.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(Error::invalid(format!("coordinate {c} outside [0, 1]")));
        }
        Ok(self
            .alphas
            .iter()
            .enumerate()
            .map(|(i, alpha)| alpha * self.bank.select(i, x))
            .sum())
    }
}

/// Partition with side `delta`, lower-corner coefficients from `target`,
/// and selectors with margin `gamma`.
pub fn build_selector_net(
    target: impl Fn(&[f64]) -> Result<f64>,
    delta: f64,
    gamma: f64,
    dim: usize,
) -> Result<SelectorNet> {
    let partition = build_partition(dim, delta)?;
    check_margin(&partition, gamma)?;
    let alphas = build_piecewise_constant(target, &partition)?;
    SelectorNet::new(&partition, alphas, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indicator_shape() {
        let f = build_indicator(0.25, 0.5, 0.01).unwrap();
        assert!((f.eval(0.375) - 1.0).abs() < 1e-12);
        assert!((f.eval(0.25 - 0.005) - 0.5).abs() < 1e-9);
        assert!((f.eval(0.5 + 0.005) - 0.5).abs() < 1e-9);
        assert_eq!(f.eval(0.5 + 0.02), 0.0);
        assert_eq!(f.eval(0.2), 0.0);
        assert!(build_indicator(0.5, 0.5, 0.1).is_err());
        assert!(build_indicator(0.0, 0.5, 0.0).is_err());
    }

    #[test]
    fn single_ramp() {
        assert_eq!(ramp(-1.0, 0.0, 2.0), 0.0);
        assert_eq!(ramp(1.0, 0.0, 2.0), 0.5);
        assert_eq!(ramp(3.0, 0.0, 2.0), 1.0);
    }

    #[test]
    fn selector_cases() {
        let p = build_partition(2, 0.5).unwrap();
        let gamma = 0.01;
        let bank = build_selector(&p, gamma).unwrap();
        // Rectangle 0 is [0, .5) x [0, .5).
        assert!((bank.select(0, &[0.25, 0.25]) - 1.0).abs() < 1e-12);
        assert_eq!(bank.select(0, &[0.5 + 2.0 * gamma, 0.25]), 0.0);
        let half = bank.select(0, &[0.5 + 0.5 * gamma, 0.25]);
        assert!((half - 0.5).abs() < 1e-9);
    }

    #[test]
    fn margin_invariant_is_enforced() {
        let p = build_partition(2, 0.25).unwrap();
        assert!(build_selector(&p, 0.125).is_err());
        assert!(build_selector(&p, 0.1249).is_ok());
        assert!(build_selector(&p, 0.0).is_err());
    }

    #[test]
    fn lower_corner_coefficients() {
        let p = build_partition(2, 0.5).unwrap();
        let alphas = build_piecewise_constant(|x| Ok(x[0] + x[1]), &p).unwrap();
        assert_eq!(alphas, vec![0.0, 0.5, 0.5, 1.0]);
    }

    #[test]
    fn layer_sizes_by_construction() {
        let net = build_selector_net(|_| Ok(1.0), 0.25, 1e-3, 1).unwrap();
        assert_eq!(net.layer_sizes(), vec![16, 4, 1]);
        let net = build_selector_net(|_| Ok(1.0), 0.25, 1e-4, 2).unwrap();
        assert_eq!(net.layer_sizes(), vec![4 * 2 * 16, 16, 1]);
    }

    #[test]
    fn constant_target_on_cores() {
        let net = build_selector_net(|_| Ok(-0.7), 0.25, 1e-3, 2).unwrap();
        for &x in &[[0.1, 0.1], [0.6, 0.9], [0.99, 0.3], [1.0, 1.0]] {
            assert_eq!(net.eval(&x).unwrap(), -0.7);
        }
        assert!(net.eval(&[0.5]).is_err());
        assert!(net.eval(&[0.5, 1.5]).is_err());
    }
}
