//! Registered controller architectures and their sensor wiring.
//!
//! Input conventions (the trailing input of every layer is the constant 1):
//!
//! * monolithic, 9-6-2 hybrid:
//!   `[light0, light1, obs0, obs1, obs2, contact0, contact1, channel8, 1]`
//!   where `channel8` is the external conditional when one is supplied and
//!   the reinforcement feedback otherwise.
//! * taxis layer (stack layer 0), 4-3-2 fixed:
//!   `[light0, light1, conditional, 1]`, outputs the two wheel commands.
//! * avoidance layer (stack layer 1), 4-0-3 fixed:
//!   `[obs0, obs1, obs2, 1]`, outputs two wheel commands and a gate; a gate
//!   strictly above 0.5 claims the wheels.
//! * learning layer (stack layer 2), 4-2-1 plastic:
//!   `[feedback, contact0, contact1, 1]`, its output drives the conditional
//!   input of layer 0.
//!
//! The three obstacle channels are the rim rays at angular offsets -1, 0
//! and +1 radians from the heading, in that order.

use serde::{Deserialize, Serialize};

use super::genome::{LayerTopology, LayeredGenome, NetworkGenome, SynapsePolicy};

/// Gate threshold for the avoidance layer's third output.
pub const GATE_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Architecture {
    Monolithic,
    SubsumptionOne,
    SubsumptionTwo,
    SubsumptionThree,
}

pub const MONOLITHIC_TOPOLOGY: LayerTopology = LayerTopology::new(9, 6, 2, SynapsePolicy::Hybrid);
pub const TAXIS_TOPOLOGY: LayerTopology = LayerTopology::new(4, 3, 2, SynapsePolicy::AllFixed);
pub const AVOIDANCE_TOPOLOGY: LayerTopology = LayerTopology::new(4, 0, 3, SynapsePolicy::AllFixed);
pub const LEARNING_TOPOLOGY: LayerTopology = LayerTopology::new(4, 2, 1, SynapsePolicy::AllPlastic);

impl Architecture {
    pub fn layer_topologies(&self) -> &'static [LayerTopology] {
        match self {
            Architecture::Monolithic => &[MONOLITHIC_TOPOLOGY],
            Architecture::SubsumptionOne => &[TAXIS_TOPOLOGY],
            Architecture::SubsumptionTwo => &[TAXIS_TOPOLOGY, AVOIDANCE_TOPOLOGY],
            Architecture::SubsumptionThree => {
                &[TAXIS_TOPOLOGY, AVOIDANCE_TOPOLOGY, LEARNING_TOPOLOGY]
            }
        }
    }

    /// Recognizes the architecture a genome instantiates, if any.
    pub fn of(genome: &LayeredGenome) -> Option<Architecture> {
        let shape: Vec<LayerTopology> = genome.layers.iter().map(|l| l.topology).collect();
        [
            Architecture::Monolithic,
            Architecture::SubsumptionOne,
            Architecture::SubsumptionTwo,
            Architecture::SubsumptionThree,
        ]
        .into_iter()
        .find(|a| a.layer_topologies() == shape.as_slice())
    }

    /// Fresh random genome of this architecture, layers drawn bottom-up.
    pub fn random_genome(&self, rng: &mut impl rand::Rng) -> LayeredGenome {
        let layers = self
            .layer_topologies()
            .iter()
            .map(|&t| NetworkGenome::random(t, rng))
            .collect();
        LayeredGenome::new(layers)
    }

    /// Whether controllers of this architecture read the reinforcement
    /// channels and can run a learning task.
    pub fn reads_feedback(&self) -> bool {
        matches!(self, Architecture::Monolithic | Architecture::SubsumptionThree)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Architecture::Monolithic => "monolithic",
            Architecture::SubsumptionOne => "subsumption-1",
            Architecture::SubsumptionTwo => "subsumption-2",
            Architecture::SubsumptionThree => "subsumption-3",
        }
    }
}

impl std::fmt::Display for Architecture {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
