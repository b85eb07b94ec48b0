//! Hand-wired reference genomes.
//!
//! These are not evolved: the weights were chosen on paper. They serve as
//! behavioural oracles in tests (a known-good controller and a known-inert
//! one) and as seeds for demos that should not depend on a prior
//! evolutionary run.

use super::arch::{AVOIDANCE_TOPOLOGY, LEARNING_TOPOLOGY, TAXIS_TOPOLOGY};
use super::genome::{
    LayerTopology, LayeredGenome, NetworkGenome, PlasticityRule, SynapseGene, SynapseKind,
};

fn fixed(weight: f64) -> SynapseGene {
    SynapseGene {
        kind: SynapseKind::Fixed,
        weight,
        sign: 1,
        rule: PlasticityRule::Hebbian,
        rate_index: 0,
    }
}

fn dormant_plastic() -> SynapseGene {
    SynapseGene {
        kind: SynapseKind::Plastic,
        weight: 0.0,
        sign: 1,
        rule: PlasticityRule::Hebbian,
        rate_index: 0,
    }
}

fn fixed_net(topology: LayerTopology, weights: &[f64]) -> NetworkGenome {
    assert_eq!(weights.len(), topology.synapse_count());
    NetworkGenome { topology, genes: weights.iter().map(|&w| fixed(w)).collect() }
}

/// Taxis-layer genome implementing a scan-and-surge strategy: circle in
/// place while the designated light is out of the forward cone, surge
/// ahead as it comes into view.
///
/// Hidden unit 0 passes the light-0 reading and is muted when the
/// conditional selects light 1; unit 1 mirrors that for light 1; unit 2
/// saturates on the constant input and acts as a bias carrier. The left
/// wheel runs near full speed throughout while the right wheel follows
/// the selected reading, so a weak signal spins the robot and a strong
/// one straightens it out.
pub fn scan_and_surge() -> LayeredGenome {
    let weights = [
        2.0, 0.0, -2.0, 0.0, // hidden 0: light 0, gated off by the conditional
        0.0, 2.0, 2.0, -2.0, // hidden 1: light 1, gated on by it
        0.0, 0.0, 0.0, 2.0, // hidden 2: bias carrier, tanh(2)
        0.0, 0.0, 2.0, // left wheel: constant drive
        2.0, 2.0, 2.0, // right wheel: follows the selected light
    ];
    LayeredGenome::new(vec![fixed_net(TAXIS_TOPOLOGY, &weights)])
}

/// All-zero taxis genome: every output is tanh(0), so the robot never
/// moves. The baseline against which any seeking behaviour is measured.
pub fn stationary() -> LayeredGenome {
    let weights = vec![0.0; TAXIS_TOPOLOGY.synapse_count()];
    LayeredGenome::new(vec![fixed_net(TAXIS_TOPOLOGY, &weights)])
}

/// Wraps a bare taxis genome in inert upper layers so it fits the full
/// three-layer stack and can enter the learning tasks.
///
/// The avoidance layer is all zeros, so its gate output sits at tanh(0)
/// and never claims the wheels. The learning layer cannot be silenced
/// exactly, because plastic synapses draw a random initial magnitude
/// below 0.1 when decoded; instead every synapse uses rate index 0, a
/// learning rate of zero, so those magnitudes never move. The resulting
/// conditional output idles in a narrow band around zero and the taxis
/// layer hunts light 0 for the whole trial, no matter what feedback
/// arrives.
///
/// Panics if `taxis` is not a single taxis-shaped layer.
pub fn with_inert_upper_layers(taxis: LayeredGenome) -> LayeredGenome {
    let mut layers = taxis.layers;
    assert!(
        layers.len() == 1 && layers[0].topology == TAXIS_TOPOLOGY,
        "expected a bare taxis genome"
    );
    layers.push(fixed_net(AVOIDANCE_TOPOLOGY, &vec![0.0; AVOIDANCE_TOPOLOGY.synapse_count()]));
    layers.push(NetworkGenome {
        topology: LEARNING_TOPOLOGY,
        genes: vec![dormant_plastic(); LEARNING_TOPOLOGY.synapse_count()],
    });
    LayeredGenome::new(layers)
}
