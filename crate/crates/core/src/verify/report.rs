use serde::{Deserialize, Serialize};

use crate::lipschitz::{ConstantKind, LipschitzEstimate, Method, Scope};

/// Slack allowed for floating rounding on comparisons that are exact in
/// real arithmetic.
pub const ROUNDING_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

/// One `measured <= predicted + tolerance` comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub predicted: f64,
    pub measured: f64,
    pub tolerance: f64,
    pub margin: f64,
    pub status: Status,
}

impl Check {
    pub fn new(name: impl Into<String>, predicted: f64, measured: f64, tolerance: f64) -> Self {
        let margin = predicted + tolerance - measured;
        let status = if margin >= 0.0 { Status::Pass } else { Status::Fail };
        Self {
            name: name.into(),
            predicted,
            measured,
            tolerance,
            margin,
            status,
        }
    }
}

/// Parameters a report was computed from. Absent entries are omitted.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportInputs {
    pub dim: usize,
    pub n: usize,
    pub h: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diffusion: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub layer_sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tiling: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A constant as it appears in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub name: String,
    pub kind: ConstantKind,
    pub method: Method,
    pub scope: Scope,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_min: Option<f64>,
    pub h: f64,
}

impl EstimateRecord {
    pub fn new(name: &str, est: &LipschitzEstimate, r: Option<f64>, d_min: Option<f64>, h: f64) -> Self {
        Self {
            name: name.to_string(),
            kind: est.kind,
            method: est.method,
            scope: est.scope,
            value: est.rho,
            r,
            d_min,
            h,
        }
    }
}

/// Outcome of one verifier. The headline `predicted / measured / tolerance`
/// repeats the first check; `status` is `Pass` only when every check passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub inputs: ReportInputs,
    pub predicted: f64,
    pub measured: f64,
    pub tolerance: f64,
    pub margin: f64,
    pub status: Status,
    pub probes: usize,
    pub runtime_ms: u64,
    pub checks: Vec<Check>,
    pub estimates: Vec<EstimateRecord>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub(crate) fn assemble(
        theorem: &str,
        inputs: ReportInputs,
        checks: Vec<Check>,
        estimates: Vec<EstimateRecord>,
        probes: usize,
        notes: Vec<String>,
        started: std::time::Instant,
    ) -> Self {
        let head = checks
            .first()
            .cloned()
            .unwrap_or_else(|| Check::new("empty", 0.0, 0.0, 0.0));
        let status = if checks.iter().all(|c| c.status.is_pass()) {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            theorem: theorem.to_string(),
            inputs,
            predicted: head.predicted,
            measured: head.measured,
            tolerance: head.tolerance,
            margin: head.margin,
            status,
            probes,
            runtime_ms: started.elapsed().as_millis() as u64,
            checks,
            estimates,
            notes,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
