//! Genome encoding for layered controllers.
//!
//! A genome is a stack of per-layer network genomes, an optional set of
//! inter-layer merge connections, and a frozen prefix marking how many
//! lower layers are exempt from mutation.

use std::fs;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weights and merge strengths live in this closed interval.
pub const WEIGHT_RANGE: (f64, f64) = (-2.0, 2.0);

/// Number of entries in the learning-rate table a `rate_index` points into.
pub const RATE_LEVELS: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynapseKind {
    Fixed,
    Plastic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlasticityRule {
    Hebbian,
    Postsynaptic,
    Presynaptic,
    Covariance,
}

pub const ALL_RULES: [PlasticityRule; 4] = [
    PlasticityRule::Hebbian,
    PlasticityRule::Postsynaptic,
    PlasticityRule::Presynaptic,
    PlasticityRule::Covariance,
];

/// Which synapse kinds a layer may express.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynapsePolicy {
    AllFixed,
    AllPlastic,
    /// Every synapse carries an evolvable kind gene.
    Hybrid,
}

/// One synapse: a fixed weight plus the traits used when it is plastic.
/// Unexpressed fields ride along neutrally and are still inherited.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynapseGene {
    pub kind: SynapseKind,
    pub weight: f64,
    /// -1 or +1; a plastic synapse contributes `2 * sign * magnitude`.
    pub sign: i8,
    pub rule: PlasticityRule,
    /// Index into the learning-rate table.
    pub rate_index: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerTopology {
    pub n_inputs: usize,
    pub n_hidden: usize,
    pub n_outputs: usize,
    pub policy: SynapsePolicy,
}

impl LayerTopology {
    pub const fn new(n_inputs: usize, n_hidden: usize, n_outputs: usize, policy: SynapsePolicy) -> Self {
        LayerTopology { n_inputs, n_hidden, n_outputs, policy }
    }

    /// Synapse genes are laid out input-to-hidden block first (grouped by
    /// hidden neuron), then hidden-to-output (grouped by output neuron).
    /// Without hidden neurons the inputs connect straight to the outputs.
    pub fn synapse_count(&self) -> usize {
        if self.n_hidden > 0 {
            self.n_inputs * self.n_hidden + self.n_hidden * self.n_outputs
        } else {
            self.n_inputs * self.n_outputs
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkGenome {
    pub topology: LayerTopology,
    pub genes: Vec<SynapseGene>,
}

impl NetworkGenome {
    /// Fresh random genome. Per gene the draw order is: kind (hybrid policy
    /// only), weight, sign, rule, rate index.
    pub fn random(topology: LayerTopology, rng: &mut impl Rng) -> Self {
        let genes = (0..topology.synapse_count())
            .map(|_| {
                let kind = match topology.policy {
                    SynapsePolicy::AllFixed => SynapseKind::Fixed,
                    SynapsePolicy::AllPlastic => SynapseKind::Plastic,
                    SynapsePolicy::Hybrid => {
                        if rng.random::<bool>() {
                            SynapseKind::Plastic
                        } else {
                            SynapseKind::Fixed
                        }
                    }
                };
                SynapseGene {
                    kind,
                    weight: rng.random_range(WEIGHT_RANGE.0..=WEIGHT_RANGE.1),
                    sign: if rng.random::<bool>() { 1 } else { -1 },
                    rule: ALL_RULES[rng.random_range(0..ALL_RULES.len())],
                    rate_index: rng.random_range(0..RATE_LEVELS),
                }
            })
            .collect();
        NetworkGenome { topology, genes }
    }

    pub fn validate(&self) -> Result<()> {
        if self.topology.n_inputs == 0 || self.topology.n_outputs == 0 {
            return Err(Error::InvalidGenome("layer needs at least one input and output".into()));
        }
        if self.genes.len() != self.topology.synapse_count() {
            return Err(Error::InvalidGenome(format!(
                "expected {} synapse genes, found {}",
                self.topology.synapse_count(),
                self.genes.len()
            )));
        }
        for (i, g) in self.genes.iter().enumerate() {
            if !g.weight.is_finite() || g.weight < WEIGHT_RANGE.0 || g.weight > WEIGHT_RANGE.1 {
                return Err(Error::InvalidGenome(format!("gene {i}: weight {} out of range", g.weight)));
            }
            if g.sign != 1 && g.sign != -1 {
                return Err(Error::InvalidGenome(format!("gene {i}: sign must be -1 or 1")));
            }
            if g.rate_index >= RATE_LEVELS {
                return Err(Error::InvalidGenome(format!("gene {i}: rate index {} out of range", g.rate_index)));
            }
            let kind_ok = match self.topology.policy {
                SynapsePolicy::AllFixed => g.kind == SynapseKind::Fixed,
                SynapsePolicy::AllPlastic => g.kind == SynapseKind::Plastic,
                SynapsePolicy::Hybrid => true,
            };
            if !kind_ok {
                return Err(Error::InvalidGenome(format!(
                    "gene {i}: kind {:?} conflicts with policy {:?}",
                    g.kind, self.topology.policy
                )));
            }
        }
        Ok(())
    }
}

/// Addresses a non-input neuron within one layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeuronRef {
    Hidden(usize),
    Output(usize),
}

impl NeuronRef {
    fn in_range(&self, topology: &LayerTopology) -> bool {
        match *self {
            NeuronRef::Hidden(i) => i < topology.n_hidden,
            NeuronRef::Output(i) => i < topology.n_outputs,
        }
    }
}

/// Weighted link from a neuron in the upper layer of an adjacent pair into
/// a neuron of the lower layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MergeConnection {
    pub source: NeuronRef,
    pub target: NeuronRef,
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayeredGenome {
    pub layers: Vec<NetworkGenome>,
    /// One connection set per adjacent layer pair, index `i` linking layer
    /// `i + 1` (source) into layer `i` (target). `None` disables merging.
    #[serde(default)]
    pub connection_layers: Option<Vec<Vec<MergeConnection>>>,
    /// The first `frozen_prefix` layers are exempt from mutation.
    #[serde(default)]
    pub frozen_prefix: usize,
}

impl LayeredGenome {
    pub fn new(layers: Vec<NetworkGenome>) -> Self {
        LayeredGenome { layers, connection_layers: None, frozen_prefix: 0 }
    }

    /// Attaches empty connection sets between every adjacent layer pair.
    pub fn with_empty_connection_layers(mut self) -> Self {
        let pairs = self.layers.len().saturating_sub(1);
        self.connection_layers = Some(vec![Vec::new(); pairs]);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::InvalidGenome("genome has no layers".into()));
        }
        for layer in &self.layers {
            layer.validate()?;
        }
        if self.frozen_prefix > self.layers.len() {
            return Err(Error::InvalidGenome(format!(
                "frozen prefix {} exceeds {} layers",
                self.frozen_prefix,
                self.layers.len()
            )));
        }
        if let Some(sets) = &self.connection_layers {
            if sets.len() != self.layers.len() - 1 {
                return Err(Error::InvalidGenome(format!(
                    "{} connection sets for {} layers",
                    sets.len(),
                    self.layers.len()
                )));
            }
            for (i, set) in sets.iter().enumerate() {
                let lower = &self.layers[i].topology;
                let upper = &self.layers[i + 1].topology;
                for c in set {
                    if !c.source.in_range(upper) {
                        return Err(Error::InvalidGenome(format!(
                            "connection set {i}: source {:?} out of range",
                            c.source
                        )));
                    }
                    if !c.target.in_range(lower) {
                        return Err(Error::InvalidGenome(format!(
                            "connection set {i}: target {:?} out of range",
                            c.target
                        )));
                    }
                    if !c.strength.is_finite()
                        || c.strength < WEIGHT_RANGE.0
                        || c.strength > WEIGHT_RANGE.1
                    {
                        return Err(Error::InvalidGenome(format!(
                            "connection set {i}: strength {} out of range",
                            c.strength
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Keeps only the lowest `n_layers` layers; used to pit a stack against
    /// its own lower stages.
    pub fn truncated(&self, n_layers: usize) -> LayeredGenome {
        assert!(n_layers >= 1 && n_layers <= self.layers.len());
        LayeredGenome {
            layers: self.layers[..n_layers].to_vec(),
            connection_layers: self
                .connection_layers
                .as_ref()
                .map(|sets| sets[..n_layers - 1].to_vec()),
            frozen_prefix: self.frozen_prefix.min(n_layers),
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::json(format!("serializing genome for {}", path.display()), e))?;
        fs::write(path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))
    }

    pub fn load(path: &Path) -> Result<LayeredGenome> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let genome: LayeredGenome = serde_json::from_str(&text)
            .map_err(|e| Error::json(format!("parsing {}", path.display()), e))?;
        genome.validate()?;
        Ok(genome)
    }
}
