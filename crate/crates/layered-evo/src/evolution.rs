//! Clone-and-mutate evolution.
//!
//! Each generation every individual is scored by the minimum of five trial
//! scores, the weaker half of the population is replaced by clones of the
//! stronger half, and everything except the five best is mutated. Layers
//! inside the frozen prefix of a genome never change. All randomness flows
//! through seeds derived per run / generation / trial, so a history is a
//! pure function of (seed, config) no matter how many threads evaluate.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neuro::{
    LayerTopology, LayeredGenome, MergeConnection, NetworkGenome, NeuronRef, SynapseKind,
    SynapsePolicy, ALL_RULES, RATE_LEVELS, WEIGHT_RANGE,
};
use crate::rng;
use crate::sim::WorldParams;
use crate::tasks::{run_trial, TaskSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvolutionConfig {
    pub generations: u32,
    pub runs: u32,
    pub population: usize,
    pub elites: usize,
    pub trials: u32,
    pub mutation_rate: f64,
    pub mutation_sigma: f64,
    /// Share the same trial seeds across the whole population within a
    /// generation instead of drawing per-individual trials.
    pub common_trials: bool,
    pub master_seed: u64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            generations: 100,
            runs: 10,
            population: 30,
            elites: 5,
            trials: 5,
            mutation_rate: 0.1,
            mutation_sigma: 0.3,
            common_trials: true,
            master_seed: 42,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 || self.population % 2 != 0 {
            return Err(Error::InvalidConfig(format!(
                "population must be even and at least 2, got {}",
                self.population
            )));
        }
        if self.elites >= self.population / 2 {
            return Err(Error::InvalidConfig(format!(
                "elites ({}) must be fewer than half the population ({})",
                self.elites, self.population
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::InvalidConfig(format!(
                "mutation rate {} outside [0, 1]",
                self.mutation_rate
            )));
        }
        if !self.mutation_sigma.is_finite() || self.mutation_sigma < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "mutation sigma {} must be finite and non-negative",
                self.mutation_sigma
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: LayeredGenome,
    pub fitness: Option<f64>,
    pub trial_scores: Vec<f64>,
}

impl Individual {
    pub fn new(genome: LayeredGenome) -> Individual {
        Individual { genome, fitness: None, trial_scores: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: u32,
    pub best_fitness: f64,
    pub mean_fitness: f64,
}

/// Best individual at the last generation of a schedule span.
#[derive(Debug, Clone)]
pub struct SpanChampion {
    pub generation: u32,
    pub genome: LayeredGenome,
    pub fitness: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub history: Vec<GenerationStats>,
    pub final_population: Vec<Individual>,
    pub span_champions: Vec<SpanChampion>,
}

pub fn random_population(
    arch: crate::neuro::Architecture,
    n: usize,
    rng: &mut impl Rng,
) -> Vec<Individual> {
    (0..n).map(|_| Individual::new(arch.random_genome(rng))).collect()
}

pub fn clone_population(genome: &LayeredGenome, n: usize) -> Vec<Individual> {
    (0..n).map(|_| Individual::new(genome.clone())).collect()
}

/// Appends a freshly randomized layer to every member and freezes all the
/// layers below it. The population must be genetically homogeneous first:
/// clone the chosen champion over the whole population before calling.
pub fn extend_and_freeze(
    population: &mut [Individual],
    topology: LayerTopology,
    rng: &mut impl Rng,
) -> Result<()> {
    let first = &population[0].genome;
    if population.iter().any(|ind| ind.genome != *first) {
        return Err(Error::InvalidConfig(
            "population must be homogeneous before a layer is added".into(),
        ));
    }
    let frozen = first.layers.len();
    for ind in population.iter_mut() {
        ind.genome.layers.push(NetworkGenome::random(topology, rng));
        if let Some(sets) = ind.genome.connection_layers.as_mut() {
            sets.push(Vec::new());
        }
        ind.genome.frozen_prefix = frozen;
        ind.genome.validate()?;
        ind.fitness = None;
        ind.trial_scores.clear();
    }
    Ok(())
}

fn resample_gene(gene: &mut crate::neuro::SynapseGene, hybrid: bool, mu: f64, sigma: f64, rng: &mut impl Rng) {
    if hybrid && rng.random_bool(mu) {
        gene.kind = if rng.random::<bool>() { SynapseKind::Plastic } else { SynapseKind::Fixed };
    }
    if rng.random_bool(mu) {
        let step: f64 = rng.sample(StandardNormal);
        gene.weight = (gene.weight + sigma * step).clamp(WEIGHT_RANGE.0, WEIGHT_RANGE.1);
    }
    if rng.random_bool(mu) {
        gene.sign = if rng.random::<bool>() { 1 } else { -1 };
    }
    if rng.random_bool(mu) {
        gene.rule = ALL_RULES[rng.random_range(0..ALL_RULES.len())];
    }
    if rng.random_bool(mu) {
        gene.rate_index = rng.random_range(0..RATE_LEVELS);
    }
}

/// Mutates every gene of every non-frozen layer independently: reals get
/// Gaussian noise and a clamp, discrete genes are resampled uniformly, each
/// with probability `mutation_rate`. Connection layers, when present, go
/// through [`mutate_connection_layers`] afterwards.
pub fn mutate(genome: &mut LayeredGenome, cfg: &EvolutionConfig, rng: &mut impl Rng) {
    let mu = cfg.mutation_rate;
    let sigma = cfg.mutation_sigma;
    for layer in genome.layers.iter_mut().skip(genome.frozen_prefix) {
        let hybrid = layer.topology.policy == SynapsePolicy::Hybrid;
        for gene in &mut layer.genes {
            resample_gene(gene, hybrid, mu, sigma, rng);
        }
    }
    if genome.connection_layers.is_some() {
        mutate_connection_layers(genome, cfg, rng);
    }
}

fn random_neuron(topology: &LayerTopology, rng: &mut impl Rng) -> NeuronRef {
    let i = rng.random_range(0..topology.n_hidden + topology.n_outputs);
    if i < topology.n_hidden {
        NeuronRef::Hidden(i)
    } else {
        NeuronRef::Output(i - topology.n_hidden)
    }
}

/// Structural mutation of the merge sets. Per set: every connection is
/// deleted with probability mu, surviving strengths are value-mutated like
/// fixed weights, and with probability `5 * mu` one new connection appears
/// between uniformly drawn endpoints with uniform strength.
pub fn mutate_connection_layers(genome: &mut LayeredGenome, cfg: &EvolutionConfig, rng: &mut impl Rng) {
    let mu = cfg.mutation_rate;
    let sigma = cfg.mutation_sigma;
    let topologies: Vec<LayerTopology> = genome.layers.iter().map(|l| l.topology).collect();
    let Some(sets) = genome.connection_layers.as_mut() else {
        return;
    };
    for (i, set) in sets.iter_mut().enumerate() {
        set.retain(|_| !rng.random_bool(mu));
        for conn in set.iter_mut() {
            if rng.random_bool(mu) {
                let step: f64 = rng.sample(StandardNormal);
                conn.strength = (conn.strength + sigma * step).clamp(WEIGHT_RANGE.0, WEIGHT_RANGE.1);
            }
        }
        if rng.random_bool((5.0 * mu).min(1.0)) {
            set.push(MergeConnection {
                source: random_neuron(&topologies[i + 1], rng),
                target: random_neuron(&topologies[i], rng),
                strength: rng.random_range(WEIGHT_RANGE.0..=WEIGHT_RANGE.1),
            });
        }
    }
}

/// Scores the whole population on `task`. The result only depends on the
/// seeds, so any thread count produces identical fitnesses.
pub fn evaluate_population(
    population: &mut [Individual],
    task: &TaskSpec,
    cfg: &EvolutionConfig,
    params: &WorldParams,
    generation_seed: u64,
    pool: &rayon::ThreadPool,
) -> Result<()> {
    let seeds: Vec<Vec<u64>> = (0..population.len())
        .map(|i| {
            let individual = if cfg.common_trials { None } else { Some(i as u64) };
            (0..u64::from(cfg.trials))
                .map(|t| rng::trial_seed(generation_seed, individual, t))
                .collect()
        })
        .collect();

    let scored: Result<Vec<Vec<f64>>> = pool.install(|| {
        population
            .par_iter()
            .zip(seeds.par_iter())
            .map(|(ind, seeds)| {
                seeds
                    .iter()
                    .map(|&s| run_trial(&ind.genome, task, params, s).map(|r| r.score))
                    .collect()
            })
            .collect()
    });
    for (ind, scores) in population.iter_mut().zip(scored?) {
        ind.fitness = Some(scores.iter().cloned().fold(f64::INFINITY, f64::min));
        ind.trial_scores = scores;
    }
    Ok(())
}

/// Sorts best-first. The sort is stable, so equal fitnesses keep their
/// prior order and selection stays deterministic.
pub fn rank_population(population: &mut [Individual]) {
    debug_assert!(population.iter().all(|i| i.fitness.is_some()));
    population.sort_by(|a, b| {
        b.fitness.unwrap_or(f64::NEG_INFINITY).total_cmp(&a.fitness.unwrap_or(f64::NEG_INFINITY))
    });
}

/// Replaces the weaker half with clones of the stronger half, in rank
/// order, then mutates everything beyond the elites and clears fitnesses.
pub fn next_generation(population: &mut [Individual], cfg: &EvolutionConfig, rng: &mut impl Rng) {
    let half = population.len() / 2;
    for i in half..population.len() {
        population[i] = Individual::new(population[i - half].genome.clone());
    }
    for ind in population.iter_mut().skip(cfg.elites) {
        mutate(&mut ind.genome, cfg, rng);
    }
    for ind in population.iter_mut() {
        ind.fitness = None;
        ind.trial_scores.clear();
    }
    debug_assert!(
        population.iter().all(|ind| {
            let k = ind.genome.frozen_prefix;
            ind.genome.layers[..k] == population[0].genome.layers[..k]
        }),
        "frozen prefixes diverged"
    );
}

fn stats_of(population: &[Individual], generation: u32) -> GenerationStats {
    let n = population.len() as f64;
    let best = population[0].fitness.unwrap();
    let mean = population.iter().map(|i| i.fitness.unwrap()).sum::<f64>() / n;
    GenerationStats { generation, best_fitness: best, mean_fitness: mean }
}

/// Runs the evolutionary loop over a task schedule. Each schedule entry is
/// (task, generation span); the population carries over at span boundaries
/// with the task swapped out underneath it. `observer` sees the ranked,
/// evaluated population once per generation, before selection.
pub fn run_evolution(
    mut population: Vec<Individual>,
    schedule: &[(TaskSpec, u32)],
    cfg: &EvolutionConfig,
    params: &WorldParams,
    run_seed: u64,
    pool: &rayon::ThreadPool,
    mut observer: impl FnMut(u32, &[Individual]),
) -> Result<RunOutcome> {
    cfg.validate()?;
    if population.len() != cfg.population {
        return Err(Error::InvalidConfig(format!(
            "initial population has {} members, config says {}",
            population.len(),
            cfg.population
        )));
    }
    let total: u32 = schedule.iter().map(|(_, span)| span).sum();
    let mut history = Vec::with_capacity(total as usize);
    let mut champions = Vec::with_capacity(schedule.len());
    let mut generation = 0u32;

    for (task, span) in schedule {
        for step in 0..*span {
            let generation_seed = rng::generation_seed(run_seed, u64::from(generation));
            evaluate_population(&mut population, task, cfg, params, generation_seed, pool)?;
            rank_population(&mut population);
            history.push(stats_of(&population, generation));
            observer(generation, &population);
            if step + 1 == *span {
                champions.push(SpanChampion {
                    generation,
                    genome: population[0].genome.clone(),
                    fitness: population[0].fitness.unwrap(),
                });
            }
            if generation + 1 < total {
                let mut mrng = rng::rng_from_seed(rng::mutation_seed(generation_seed));
                next_generation(&mut population, cfg, &mut mrng);
            }
            generation += 1;
        }
    }

    Ok(RunOutcome { history, final_population: population, span_champions: champions })
}

/// Builds the thread pool evaluation runs inside. Thread count never
/// changes results, only wall time.
pub fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))
}
