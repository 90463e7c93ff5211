//! Explicit approximating networks, built without training.

mod partition;
mod selector;
mod serial;
mod threshold;

pub use partition::{build_partition, Rect, RectPartition};
pub use selector::{
    build_indicator, build_piecewise_constant, build_selector, build_selector_net, default_gamma, ramp, relu,
    IndicatorUnit, SelectorBank, SelectorNet,
};
pub use serial::{Net, NetDocument, PartitionDoc};
pub use threshold::{neuron_count, step, NeuronCount, ThresholdNet};
