//! Shows the four plasticity rules acting on a live synapse.
//!
//! A plastic synapse stores a magnitude m in [0, 1] and contributes an
//! effective weight of 2 * sign * m. After every activation the magnitude
//! moves by eta * delta, where delta depends on the rule and on the
//! presynaptic activity x and postsynaptic activity y.

use layered_evo::neuro::genome::{
    LayerTopology, NetworkGenome, SynapseGene, SynapseKind, SynapsePolicy,
};
use layered_evo::neuro::{plasticity_delta, NetworkPhenotype, ALL_RULES, LEARNING_RATES};
use layered_evo::rng;

fn main() -> layered_evo::Result<()> {
    println!("raw rule responses at m = 0.5:");
    println!("  rule           x=1,y=1   x=1,y=-1   x=0,y=1");
    for rule in ALL_RULES {
        println!(
            "  {:12} {:9.3} {:10.3} {:9.3}",
            format!("{rule:?}").to_lowercase(),
            plasticity_delta(rule, 0.5, 1.0, 1.0),
            plasticity_delta(rule, 0.5, 1.0, -1.0),
            plasticity_delta(rule, 0.5, 0.0, 1.0),
        );
    }

    // One synapse per rule, from the constant input straight to a single
    // output, all at eta = 0.6, so the magnitude trajectories compare
    // directly under a steady drive.
    println!("magnitude trajectories under a constant positive input:");
    let mut nets: Vec<NetworkPhenotype> = ALL_RULES
        .iter()
        .map(|&rule| {
            let gene = SynapseGene {
                kind: SynapseKind::Plastic,
                weight: 0.0,
                sign: 1,
                rule,
                rate_index: 2,
            };
            let genome = NetworkGenome {
                topology: LayerTopology::new(1, 0, 1, SynapsePolicy::AllPlastic),
                genes: vec![gene],
            };
            let mut decode_rng = rng::rng_from_seed(40);
            NetworkPhenotype::decode(&genome, &LEARNING_RATES, &mut decode_rng).unwrap()
        })
        .collect();

    println!("  step   hebbian   postsyn    presyn   covariance");
    for step in 0..=20 {
        if step % 4 == 0 {
            let ms: Vec<f64> = nets.iter().map(|n| n.magnitude(0).unwrap()).collect();
            println!("  {step:4} {:9.4} {:9.4} {:9.4} {:12.4}", ms[0], ms[1], ms[2], ms[3]);
        }
        for net in nets.iter_mut() {
            net.activate(&[1.0]);
            net.apply_plasticity();
        }
    }
    println!("(magnitudes stay clamped to [0, 1]; hebbian and postsynaptic");
    println!(" saturate, presynaptic settles where growth meets its decay");
    println!(" term, and covariance shrinks any synapse too weak for its");
    println!(" output to track the input, a death spiral for small weights)");
    Ok(())
}
