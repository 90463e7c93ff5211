//! JSON form of the constructed networks.
//!
//! Floats go through `serde_json`, which prints the shortest decimal that
//! parses back to the same `f64`, so a save/load cycle is value-exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::partition::RectPartition;
use crate::net::selector::SelectorNet;
use crate::net::threshold::ThresholdNet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionDoc {
    pub dim: usize,
    pub cells_per_axis: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NetDocument {
    Threshold {
        m: usize,
        coefficients: Vec<f64>,
        layer_sizes: Vec<usize>,
    },
    Selector {
        partition: PartitionDoc,
        alphas: Vec<f64>,
        gamma: f64,
        layer_sizes: Vec<usize>,
    },
}

/// Either constructed network.
#[derive(Debug, Clone, PartialEq)]
pub enum Net {
    Threshold(ThresholdNet),
    Selector(SelectorNet),
}

impl Net {
    pub fn dim(&self) -> usize {
        match self {
            Net::Threshold(_) => 1,
            Net::Selector(s) => s.dim(),
        }
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        match self {
            Net::Threshold(t) => t.layer_sizes(),
            Net::Selector(s) => s.layer_sizes(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        match self {
            Net::Threshold(t) => match x {
                [x0] => t.eval(*x0),
                _ => Err(Error::invalid("threshold net takes one coordinate")),
            },
            Net::Selector(s) => s.eval(x),
        }
    }

    pub fn to_document(&self) -> NetDocument {
        match self {
            Net::Threshold(t) => NetDocument::Threshold {
                m: t.m(),
                coefficients: t.coefficients().to_vec(),
                layer_sizes: t.layer_sizes(),
            },
            Net::Selector(s) => NetDocument::Selector {
                partition: PartitionDoc {
                    dim: s.dim(),
                    cells_per_axis: s.partition().cells_per_axis().to_vec(),
                },
                alphas: s.alphas().to_vec(),
                gamma: s.gamma(),
                layer_sizes: s.layer_sizes(),
            },
        }
    }

    pub fn from_document(doc: NetDocument) -> Result<Self> {
        let (net, declared) = match doc {
            NetDocument::Threshold {
                m,
                coefficients,
                layer_sizes,
            } => {
                if coefficients.len() != m {
                    return Err(Error::invalid(format!(
                        "m = {m} but {} coefficients",
                        coefficients.len()
                    )));
                }
                (
                    Net::Threshold(ThresholdNet::from_coefficients(coefficients)?),
                    layer_sizes,
                )
            }
            NetDocument::Selector {
                partition,
                alphas,
                gamma,
                layer_sizes,
            } => {
                if partition.cells_per_axis.len() != partition.dim {
                    return Err(Error::invalid("partition dim disagrees with cells_per_axis"));
                }
                let p = RectPartition::uniform(partition.cells_per_axis)?;
                (Net::Selector(SelectorNet::new(&p, alphas, gamma)?), layer_sizes)
            }
        };
        if net.layer_sizes() != declared {
            return Err(Error::invalid(format!(
                "declared layer sizes {declared:?} do not match construction {:?}",
                net.layer_sizes()
            )));
        }
        Ok(net)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_document(serde_json::from_str(s)?)
    }
}

impl From<ThresholdNet> for Net {
    fn from(t: ThresholdNet) -> Self {
        Net::Threshold(t)
    }
}

impl From<SelectorNet> for Net {
    fn from(s: SelectorNet) -> Self {
        Net::Selector(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::selector::build_selector_net;

    #[test]
    fn json_shape() {
        let net: Net = ThresholdNet::build(|x| Ok(x * x), 3).unwrap().into();
        let v: serde_json::Value = serde_json::from_str(&net.to_json().unwrap()).unwrap();
        assert_eq!(v["type"], "threshold");
        assert_eq!(v["m"], 3);
        assert_eq!(v["layer_sizes"], serde_json::json!([6, 1]));

        let net: Net = build_selector_net(|x| Ok(x[0]), 0.5, 1e-3, 2).unwrap().into();
        let v: serde_json::Value = serde_json::from_str(&net.to_json().unwrap()).unwrap();
        assert_eq!(v["type"], "selector");
        assert_eq!(v["partition"]["cells_per_axis"], serde_json::json!([2, 2]));
        assert_eq!(v["layer_sizes"], serde_json::json!([32, 4, 1]));
    }

    #[test]
    fn rejects_inconsistent_documents() {
        let bad = r#"{"type":"threshold","m":2,"coefficients":[1.0],"layer_sizes":[4,1]}"#;
        assert!(Net::from_json(bad).is_err());
        let bad = r#"{"type":"threshold","m":1,"coefficients":[1.0],"layer_sizes":[4,1]}"#;
        assert!(Net::from_json(bad).is_err());
        let bad = r#"{"type":"selector","partition":{"dim":1,"cells_per_axis":[2]},"alphas":[0,1],"gamma":0.4,"layer_sizes":[8,2,1]}"#;
        assert!(Net::from_json(bad).is_err());
    }
}
