//! Neutral drift of the merge-connection count.
//!
//! Structural mutation deletes each connection with probability mu and
//! adds one with probability min(5 mu, 1) per layer and generation. With
//! selection switched off the count performs a birth-death walk whose
//! equilibrium mean is additions per deletion chance, i.e. 5 connections,
//! independent of mu.

use layered_evo::evolution::{mutate_connection_layers, EvolutionConfig};
use layered_evo::neuro::{handcrafted, Architecture, NetworkGenome};
use layered_evo::rng;

fn main() -> layered_evo::Result<()> {
    let mut rng = rng::rng_from_seed(7);
    let mut genome = handcrafted::scan_and_surge();
    for topo in &Architecture::SubsumptionThree.layer_topologies()[1..] {
        genome.layers.push(NetworkGenome::random(*topo, &mut rng));
    }
    let mut genome = genome.with_empty_connection_layers();
    genome.validate()?;

    let cfg = EvolutionConfig::default();
    let generations = 200_000u64;
    let mut total = 0u64;
    let mut peak = 0usize;
    println!("  generation   running mean   current counts");
    for gen in 1..=generations {
        mutate_connection_layers(&mut genome, &cfg, &mut rng);
        let counts: Vec<usize> =
            genome.connection_layers.as_ref().unwrap().iter().map(Vec::len).collect();
        total += counts.iter().sum::<usize>() as u64;
        peak = peak.max(*counts.iter().max().unwrap());
        if gen % 40_000 == 0 {
            let mean = total as f64 / (gen * counts.len() as u64) as f64;
            println!("  {gen:10}   {mean:12.3}   {counts:?}");
        }
    }
    let layers = genome.connection_layers.as_ref().unwrap().len() as u64;
    println!(
        "equilibrium mean {:.3} per layer over {generations} generations (peak layer size {peak})",
        total as f64 / (generations * layers) as f64
    );
    genome.validate()?;
    Ok(())
}
