//! Controller genetics and phenotypes.

pub mod arch;
pub mod controller;
pub mod genome;
pub mod handcrafted;

pub use arch::{
    Architecture, AVOIDANCE_TOPOLOGY, GATE_THRESHOLD, LEARNING_TOPOLOGY, MONOLITHIC_TOPOLOGY,
    TAXIS_TOPOLOGY,
};
pub use controller::{
    arbitrate, plasticity_delta, ControllerState, NetworkPhenotype, LEARNING_RATES,
};
pub use genome::{
    LayerTopology, LayeredGenome, MergeConnection, NetworkGenome, NeuronRef, PlasticityRule,
    SynapseGene, SynapseKind, SynapsePolicy, ALL_RULES, RATE_LEVELS, WEIGHT_RANGE,
};
