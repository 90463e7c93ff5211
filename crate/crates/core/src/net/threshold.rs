//! Two-layer threshold network realising a left-endpoint step interpolant.
//!
//! With breakpoints `b_j = (j - 1) / m`, the pair of step neurons
//! `step(x - b_j) - step(x - b_{j+1})` is exactly the indicator of
//! `[b_j, b_{j+1})`, so `h(x) = sum_j g(b_j) [step(x - b_j) - step(x - b_{j+1})]`
//! uses `2m` neurons and is within `rho / m` of any `rho`-Lipschitz `g`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Heaviside step with `step(0) = 1`.
#[inline]
pub fn step(z: f64) -> f64 {
    if z >= 0.0 {
        1.0
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeuronCount {
    /// Number of intervals.
    pub m: usize,
    /// Step neurons in the hidden layer, `2m`.
    pub total: usize,
}

/// `m = max(1, ceil(rho / epsilon))` intervals and `2m` neurons.
pub fn neuron_count(rho: f64, epsilon: f64) -> Result<NeuronCount> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(rho.is_finite() && rho >= 0.0) {
        return Err(Error::invalid(format!("rho must be finite and >= 0, got {rho}")));
    }
    let m = ((rho / epsilon).ceil() as usize).max(1);
    Ok(NeuronCount { m, total: 2 * m })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdNet {
    breakpoints: Vec<f64>,
    coefficients: Vec<f64>,
}

impl ThresholdNet {
    /// Samples `target` at the left endpoint of each of `m` equal intervals.
    pub fn build(target: impl Fn(f64) -> Result<f64>, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("threshold net needs m >= 1"));
        }
        let breakpoints = uniform_breakpoints(m);
        let coefficients = breakpoints[..m]
            .iter()
            .map(|&b| target(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            breakpoints,
            coefficients,
        })
    }

    /// Rebuilds a net from stored coefficients on uniform breakpoints.
    pub fn from_coefficients(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::invalid("threshold net needs at least one coefficient"));
        }
        if let Some(c) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::invalid(format!("non-finite coefficient {c}")));
        }
        Ok(Self {
            breakpoints: uniform_breakpoints(coefficients.len()),
            coefficients,
        })
    }

    pub fn m(&self) -> usize {
        self.coefficients.len()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn neuron_count(&self) -> usize {
        2 * self.m()
    }

    /// `[hidden step neurons, output]`.
    pub fn layer_sizes(&self) -> Vec<usize> {
        vec![self.neuron_count(), 1]
    }

    /// Evaluates the network arithmetic neuron by neuron. `x` must lie in `[0, 1)`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::invalid(format!("threshold net is defined on [0, 1), got {x}")));
        }
        Ok(self
            .coefficients
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(alpha, b)| alpha * (step(x - b[0]) - step(x - b[1])))
            .sum())
    }
}

fn uniform_breakpoints(m: usize) -> Vec<f64> {
    (0..=m)
        .map(|j| if j == m { 1.0 } else { j as f64 / m as f64 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neuron_counts() {
        assert_eq!(neuron_count(2.0, 0.5).unwrap(), NeuronCount { m: 4, total: 8 });
        assert_eq!(neuron_count(0.0, 0.1).unwrap(), NeuronCount { m: 1, total: 2 });
        assert_eq!(neuron_count(1.0, 0.3).unwrap(), NeuronCount { m: 4, total: 8 });
        assert!(neuron_count(1.0, 0.0).is_err());
        assert!(neuron_count(1.0, -0.1).is_err());
    }

    #[test]
    fn breakpoints_are_uniform_and_closed() {
        let net = ThresholdNet::build(Ok, 7).unwrap();
        let b = net.breakpoints();
        assert_eq!(b.len(), 8);
        assert_eq!(b[0], 0.0);
        assert_eq!(b[7], 1.0);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(net.neuron_count(), 14);
        assert_eq!(net.layer_sizes(), vec![14, 1]);
    }

    #[test]
    fn constant_target_is_reproduced() {
        let net = ThresholdNet::build(|_| Ok(0.37), 5).unwrap();
        for i in 0..1000 {
            assert_eq!(net.eval(i as f64 / 1000.0).unwrap(), 0.37);
        }
    }

    #[test]
    fn left_endpoint_and_half_open_semantics() {
        let net = ThresholdNet::build(Ok, 4).unwrap();
        assert_eq!(net.eval(0.6).unwrap(), 0.5);
        for (j, &b) in net.breakpoints()[..4].iter().enumerate() {
            assert_eq!(net.eval(b).unwrap(), net.coefficients()[j]);
            let next = net.breakpoints()[j + 1];
            if next < 1.0 {
                assert_eq!(net.eval(next - 1e-12).unwrap(), net.coefficients()[j]);
            }
        }
        assert!(net.eval(1.0).is_err());
        assert!(net.eval(-1e-15).is_err());
    }

    #[test]
    fn sampler_failure_propagates() {
        let err = ThresholdNet::build(|x| if x > 0.4 { Err(Error::invalid("boom")) } else { Ok(x) }, 4);
        assert!(err.is_err());
    }
}
