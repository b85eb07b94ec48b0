//! Phenotype side of the controller: decoding, forward passes, synaptic
//! plasticity and subsumption arbitration.

use rand::Rng;

use crate::error::{Error, Result};
use crate::sim::SensorFrame;

use super::arch::{Architecture, GATE_THRESHOLD};
use super::genome::{
    LayeredGenome, LayerTopology, MergeConnection, NetworkGenome, NeuronRef, PlasticityRule,
    SynapseKind,
};

/// Learning rates addressed by a gene's `rate_index`.
pub const LEARNING_RATES: [f64; 4] = [0.0, 0.3, 0.6, 0.9];

/// Upper bound of the initial plastic magnitude draw.
const INITIAL_MAGNITUDE_MAX: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
struct PlasticState {
    sign: f64,
    rate: f64,
    rule: PlasticityRule,
    magnitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Synapse {
    weight: f64,
    plastic: Option<PlasticState>,
}

/// One decoded network layer with its activation state.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkPhenotype {
    pub topology: LayerTopology,
    synapses: Vec<Synapse>,
    input_act: Vec<f64>,
    hidden_act: Vec<f64>,
    output_act: Vec<f64>,
}

impl NetworkPhenotype {
    /// Decodes one layer. Plastic synapses draw their initial magnitude
    /// from `U[0, 0.1)` in gene order; fixed synapses consume no
    /// randomness, so all-fixed layers decode identically under any rng.
    pub fn decode(
        genome: &NetworkGenome,
        rates: &[f64; 4],
        rng: &mut impl Rng,
    ) -> Result<NetworkPhenotype> {
        genome.validate()?;
        let synapses = genome
            .genes
            .iter()
            .map(|gene| match gene.kind {
                SynapseKind::Fixed => Synapse { weight: gene.weight, plastic: None },
                SynapseKind::Plastic => {
                    let state = PlasticState {
                        sign: f64::from(gene.sign),
                        rate: rates[gene.rate_index as usize],
                        rule: gene.rule,
                        magnitude: rng.random_range(0.0..INITIAL_MAGNITUDE_MAX),
                    };
                    Synapse { weight: 2.0 * state.sign * state.magnitude, plastic: Some(state) }
                }
            })
            .collect();
        Ok(NetworkPhenotype {
            topology: genome.topology,
            synapses,
            input_act: vec![0.0; genome.topology.n_inputs],
            hidden_act: vec![0.0; genome.topology.n_hidden],
            output_act: vec![0.0; genome.topology.n_outputs],
        })
    }

    /// Forward pass. `inputs` must fill every input channel; the last one
    /// is the bias and is forced to 1. Returns the output activations.
    pub fn activate(&mut self, inputs: &[f64]) -> &[f64] {
        self.activate_with(inputs, &[], &[])
    }

    /// Forward pass with extra charge injected into the pre-activations of
    /// hidden and output neurons. Empty slices mean no injection; otherwise
    /// the slice lengths must match the layer dimensions.
    pub fn activate_with(&mut self, inputs: &[f64], inj_hidden: &[f64], inj_output: &[f64]) -> &[f64] {
        let t = self.topology;
        assert_eq!(inputs.len(), t.n_inputs, "input width mismatch");
        assert!(inj_hidden.is_empty() || inj_hidden.len() == t.n_hidden);
        assert!(inj_output.is_empty() || inj_output.len() == t.n_outputs);

        self.input_act.copy_from_slice(inputs);
        self.input_act[t.n_inputs - 1] = 1.0;

        if t.n_hidden > 0 {
            for j in 0..t.n_hidden {
                let row = &self.synapses[j * t.n_inputs..(j + 1) * t.n_inputs];
                let mut pre = inj_hidden.get(j).copied().unwrap_or(0.0);
                for (s, x) in row.iter().zip(&self.input_act) {
                    pre += s.weight * x;
                }
                self.hidden_act[j] = pre.tanh();
            }
            let base = t.n_inputs * t.n_hidden;
            for k in 0..t.n_outputs {
                let row = &self.synapses[base + k * t.n_hidden..base + (k + 1) * t.n_hidden];
                let mut pre = inj_output.get(k).copied().unwrap_or(0.0);
                for (s, h) in row.iter().zip(&self.hidden_act) {
                    pre += s.weight * h;
                }
                self.output_act[k] = pre.tanh();
            }
        } else {
            for k in 0..t.n_outputs {
                let row = &self.synapses[k * t.n_inputs..(k + 1) * t.n_inputs];
                let mut pre = inj_output.get(k).copied().unwrap_or(0.0);
                for (s, x) in row.iter().zip(&self.input_act) {
                    pre += s.weight * x;
                }
                self.output_act[k] = pre.tanh();
            }
        }
        &self.output_act
    }

    /// One plasticity update over every plastic synapse, using the
    /// activations of the most recent forward pass. Magnitudes stay in
    /// `[0, 1]`; the expressed weight is `2 * sign * magnitude`.
    pub fn apply_plasticity(&mut self) {
        let t = self.topology;
        for (idx, syn) in self.synapses.iter_mut().enumerate() {
            let Some(p) = syn.plastic.as_mut() else { continue };
            let (x, y) = if t.n_hidden > 0 {
                let boundary = t.n_inputs * t.n_hidden;
                if idx < boundary {
                    (self.input_act[idx % t.n_inputs], self.hidden_act[idx / t.n_inputs])
                } else {
                    let rel = idx - boundary;
                    (self.hidden_act[rel % t.n_hidden], self.output_act[rel / t.n_hidden])
                }
            } else {
                (self.input_act[idx % t.n_inputs], self.output_act[idx / t.n_inputs])
            };

            let delta = plasticity_delta(p.rule, p.magnitude, x, y);
            p.magnitude = (p.magnitude + p.rate * delta).clamp(0.0, 1.0);
            syn.weight = 2.0 * p.sign * p.magnitude;
        }
    }

    pub fn outputs(&self) -> &[f64] {
        &self.output_act
    }

    pub fn hidden(&self) -> &[f64] {
        &self.hidden_act
    }

    fn read(&self, r: NeuronRef) -> f64 {
        match r {
            NeuronRef::Hidden(i) => self.hidden_act[i],
            NeuronRef::Output(i) => self.output_act[i],
        }
    }

    /// Expressed weight of synapse `idx` in gene order.
    pub fn synapse_weight(&self, idx: usize) -> f64 {
        self.synapses[idx].weight
    }

    /// Current magnitude of synapse `idx` when it is plastic.
    pub fn magnitude(&self, idx: usize) -> Option<f64> {
        self.synapses[idx].plastic.map(|p| p.magnitude)
    }
}

/// A fully decoded controller ready to run trials.
#[derive(Debug, Clone)]
pub struct ControllerState {
    architecture: Architecture,
    layers: Vec<NetworkPhenotype>,
    merges: Vec<Vec<MergeConnection>>,
    learning_layer_active: bool,
    inj_hidden: Vec<f64>,
    inj_output: Vec<f64>,
}

impl ControllerState {
    pub fn decode(genome: &LayeredGenome, rng: &mut impl Rng) -> Result<ControllerState> {
        Self::decode_with_rates(genome, &LEARNING_RATES, rng)
    }

    /// Decode with a custom learning-rate table.
    pub fn decode_with_rates(
        genome: &LayeredGenome,
        rates: &[f64; 4],
        rng: &mut impl Rng,
    ) -> Result<ControllerState> {
        genome.validate()?;
        let architecture = Architecture::of(genome).ok_or_else(|| {
            Error::InvalidGenome("genome does not match a registered architecture".into())
        })?;
        let layers = genome
            .layers
            .iter()
            .map(|l| NetworkPhenotype::decode(l, rates, rng))
            .collect::<Result<Vec<_>>>()?;
        let merges = genome.connection_layers.clone().unwrap_or_default();
        let max_h = layers.iter().map(|l| l.topology.n_hidden).max().unwrap_or(0);
        let max_o = layers.iter().map(|l| l.topology.n_outputs).max().unwrap_or(0);
        Ok(ControllerState {
            architecture,
            layers,
            merges,
            learning_layer_active: true,
            inj_hidden: vec![0.0; max_h],
            inj_output: vec![0.0; max_o],
        })
    }

    pub fn architecture(&self) -> Architecture {
        self.architecture
    }

    pub fn layer(&self, idx: usize) -> &NetworkPhenotype {
        &self.layers[idx]
    }

    pub fn layer_mut(&mut self, idx: usize) -> &mut NetworkPhenotype {
        &mut self.layers[idx]
    }

    /// Runs the controller without its learning layer: the layer neither
    /// activates nor adapts and the conditional input must come from
    /// outside. Tasks that carry no reinforcement signal use this.
    pub fn set_learning_layer_active(&mut self, active: bool) {
        self.learning_layer_active = active;
    }

    /// One control step: forward passes bottom to top of the relevant
    /// stack, subsumption arbitration, then plasticity. Returns the wheel
    /// commands in `[-1, 1]`.
    ///
    /// `external_conditional` feeds the monolithic channel-8 input (falling
    /// back to the reinforcement feedback when absent) and the taxis
    /// layer's conditional input when no active learning layer drives it.
    pub fn step(&mut self, frame: &SensorFrame, external_conditional: Option<f64>) -> (f64, f64) {
        let wheels = match self.architecture {
            Architecture::Monolithic => {
                let channel8 = external_conditional.unwrap_or(frame.feedback);
                let inputs = [
                    frame.light[0],
                    frame.light[1],
                    frame.obstacle[0],
                    frame.obstacle[1],
                    frame.obstacle[2],
                    frame.contact[0],
                    frame.contact[1],
                    channel8,
                    1.0,
                ];
                let out = self.layers[0].activate(&inputs);
                (out[0], out[1])
            }
            Architecture::SubsumptionOne
            | Architecture::SubsumptionTwo
            | Architecture::SubsumptionThree => self.step_stack(frame, external_conditional),
        };
        for (i, layer) in self.layers.iter_mut().enumerate() {
            if i == 2 && !self.learning_layer_active {
                continue;
            }
            layer.apply_plasticity();
        }
        wheels
    }

    fn step_stack(&mut self, frame: &SensorFrame, external_conditional: Option<f64>) -> (f64, f64) {
        let has_learning = self.layers.len() > 2 && self.learning_layer_active;
        let conditional = if has_learning {
            let inputs = [frame.feedback, frame.contact[0], frame.contact[1], 1.0];
            self.layers[2].activate(&inputs)[0]
        } else {
            external_conditional
                .expect("conditional input required when no learning layer is active")
        };

        if self.layers.len() > 1 {
            let inputs = [frame.obstacle[0], frame.obstacle[1], frame.obstacle[2], 1.0];
            self.activate_layer_with_merges(1, &inputs);
        }

        let inputs = [frame.light[0], frame.light[1], conditional, 1.0];
        self.activate_layer_with_merges(0, &inputs);

        if self.layers.len() > 1 {
            let upper = self.layers[1].outputs();
            if upper[2] > GATE_THRESHOLD {
                return (upper[0], upper[1]);
            }
        }
        let base = self.layers[0].outputs();
        (base[0], base[1])
    }

    /// Activates layer `idx`, injecting `strength * source activation` for
    /// each merge connection arriving from the layer above.
    fn activate_layer_with_merges(&mut self, idx: usize, inputs: &[f64]) {
        let set = self.merges.get(idx).map(Vec::as_slice).unwrap_or(&[]);
        if set.is_empty() {
            self.layers[idx].activate(inputs);
            return;
        }
        let t = self.layers[idx].topology;
        self.inj_hidden[..t.n_hidden].fill(0.0);
        self.inj_output[..t.n_outputs].fill(0.0);
        let source_layer = &self.layers[idx + 1];
        for c in set {
            let v = c.strength * source_layer.read(c.source);
            match c.target {
                NeuronRef::Hidden(j) => self.inj_hidden[j] += v,
                NeuronRef::Output(k) => self.inj_output[k] += v,
            }
        }
        let layer = &mut self.layers[idx];
        layer.activate_with(inputs, &self.inj_hidden[..t.n_hidden], &self.inj_output[..t.n_outputs]);
    }
}

/// Raw magnitude change of one plasticity rule given the synapse magnitude
/// `m`, presynaptic activity `x` and postsynaptic activity `y`.
pub fn plasticity_delta(rule: PlasticityRule, m: f64, x: f64, y: f64) -> f64 {
    match rule {
        PlasticityRule::Hebbian => (1.0 - m) * x * y,
        PlasticityRule::Postsynaptic => m * (-1.0 + x) * y + (1.0 - m) * x * y,
        PlasticityRule::Presynaptic => m * x * (-1.0 + y) + (1.0 - m) * x * y,
        PlasticityRule::Covariance => {
            let f = (4.0 * (1.0 - (x - y).abs()) - 2.0).tanh();
            if f > 0.0 {
                (1.0 - m) * f
            } else {
                m * f
            }
        }
    }
}

/// Subsumption arbitration in isolation: the upper layer claims the wheels
/// only while its gate output is strictly above the threshold.
pub fn arbitrate(lower_wheels: (f64, f64), upper: &[f64; 3]) -> (f64, f64) {
    if upper[2] > GATE_THRESHOLD {
        (upper[0], upper[1])
    } else {
        lower_wheels
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuro::genome::{SynapseGene, SynapsePolicy};
    use crate::rng::rng_from_seed;

    fn frame() -> SensorFrame {
        SensorFrame {
            light: [0.3, 0.6],
            obstacle: [0.0, 0.4, 0.9],
            contact: [0.0, 1.0],
            feedback: -1.0,
        }
    }

    /// Forward-pass oracle built straight from the gene list, sharing no
    /// code with `activate`.
    fn oracle_forward(genome: &NetworkGenome, phenotype: &NetworkPhenotype, inputs: &[f64]) -> Vec<f64> {
        let t = genome.topology;
        let mut x: Vec<f64> = inputs.to_vec();
        x[t.n_inputs - 1] = 1.0;
        let weight_of = |idx: usize| -> f64 {
            match genome.genes[idx].kind {
                SynapseKind::Fixed => genome.genes[idx].weight,
                // Trusts the stored magnitude, nothing else.
                SynapseKind::Plastic => {
                    2.0 * f64::from(genome.genes[idx].sign) * phenotype.magnitude(idx).unwrap()
                }
            }
        };
        if t.n_hidden == 0 {
            return (0..t.n_outputs)
                .map(|k| {
                    (0..t.n_inputs)
                        .map(|i| weight_of(k * t.n_inputs + i) * x[i])
                        .sum::<f64>()
                        .tanh()
                })
                .collect();
        }
        let hidden: Vec<f64> = (0..t.n_hidden)
            .map(|j| {
                (0..t.n_inputs)
                    .map(|i| weight_of(j * t.n_inputs + i) * x[i])
                    .sum::<f64>()
                    .tanh()
            })
            .collect();
        let base = t.n_inputs * t.n_hidden;
        (0..t.n_outputs)
            .map(|k| {
                (0..t.n_hidden)
                    .map(|j| weight_of(base + k * t.n_hidden + j) * hidden[j])
                    .sum::<f64>()
                    .tanh()
            })
            .collect()
    }

    #[test]
    fn activate_agrees_with_independent_oracle() {
        let mut rng = rng_from_seed(31);
        for policy in [SynapsePolicy::AllFixed, SynapsePolicy::Hybrid, SynapsePolicy::AllPlastic] {
            for (n_in, n_hid, n_out) in [(4, 3, 2), (4, 0, 3), (9, 6, 2), (4, 2, 1)] {
                let g = NetworkGenome::random(
                    LayerTopology::new(n_in, n_hid, n_out, policy),
                    &mut rng,
                );
                let mut p = NetworkPhenotype::decode(&g, &LEARNING_RATES, &mut rng).unwrap();
                for _ in 0..20 {
                    let inputs: Vec<f64> = (0..n_in).map(|_| rng.random_range(-1.0..1.0)).collect();
                    let expect = oracle_forward(&g, &p, &inputs);
                    let got = p.activate(&inputs).to_vec();
                    for (a, b) in got.iter().zip(&expect) {
                        assert!((a - b).abs() < 1e-12, "activate {a} vs oracle {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn activations_stay_strictly_inside_unit_interval() {
        let mut rng = rng_from_seed(32);
        for _ in 0..200 {
            let g = NetworkGenome::random(
                LayerTopology::new(9, 6, 2, SynapsePolicy::Hybrid),
                &mut rng,
            );
            let mut p = NetworkPhenotype::decode(&g, &LEARNING_RATES, &mut rng).unwrap();
            for _ in 0..50 {
                let inputs: Vec<f64> = (0..9).map(|_| rng.random_range(-1.0..1.0)).collect();
                p.activate(&inputs);
                p.apply_plasticity();
                for &a in p.outputs().iter().chain(p.hidden().iter()) {
                    assert!(a > -1.0 && a < 1.0, "activation {a} escaped (-1, 1)");
                }
            }
        }
    }

    #[test]
    fn zero_constant_slot_is_forced_to_one() {
        let mut rng = rng_from_seed(33);
        let g = NetworkGenome::random(LayerTopology::new(4, 0, 1, SynapsePolicy::AllFixed), &mut rng);
        let mut p = NetworkPhenotype::decode(&g, &LEARNING_RATES, &mut rng).unwrap();
        let a = p.activate(&[0.5, -0.5, 0.2, 0.0]).to_vec();
        let b = p.activate(&[0.5, -0.5, 0.2, 1.0]).to_vec();
        assert_eq!(a, b);
        // And the bias genuinely enters the sum.
        let unbiased =
            (g.genes[0].weight * 0.5 - g.genes[1].weight * 0.5 + g.genes[2].weight * 0.2).tanh();
        assert!((a[0] - unbiased).abs() > 1e-9);
    }

    #[test]
    fn decode_is_rng_independent_for_fixed_genomes() {
        let mut rng = rng_from_seed(34);
        let g = NetworkGenome::random(LayerTopology::new(4, 3, 2, SynapsePolicy::AllFixed), &mut rng);
        let a = NetworkPhenotype::decode(&g, &LEARNING_RATES, &mut rng_from_seed(1)).unwrap();
        let b = NetworkPhenotype::decode(&g, &LEARNING_RATES, &mut rng_from_seed(999)).unwrap();
        assert_eq!(a, b);
        for (i, gene) in g.genes.iter().enumerate() {
            assert_eq!(a.synapse_weight(i), gene.weight);
        }
    }

    #[test]
    fn decode_draws_magnitudes_in_gene_order() {
        let mut rng = rng_from_seed(35);
        let g = NetworkGenome::random(LayerTopology::new(4, 2, 1, SynapsePolicy::AllPlastic), &mut rng);
        let p = NetworkPhenotype::decode(&g, &LEARNING_RATES, &mut rng_from_seed(77)).unwrap();
        // Replay the documented draw sequence by hand.
        let mut replay = rng_from_seed(77);
        for (i, gene) in g.genes.iter().enumerate() {
            let m: f64 = replay.random_range(0.0..0.1);
            assert_eq!(p.magnitude(i), Some(m));
            assert_eq!(p.synapse_weight(i), 2.0 * f64::from(gene.sign) * m);
        }
    }

    #[test]
    fn plasticity_rules_match_closed_forms() {
        let mut rng = rng_from_seed(36);
        // 2-input, 1-output layer: one active synapse plus a bias synapse.
        let topo = LayerTopology::new(2, 0, 1, SynapsePolicy::AllPlastic);
        fn hebbian(m: f64, x: f64, y: f64) -> f64 {
            (1.0 - m) * x * y
        }
        fn postsynaptic(m: f64, x: f64, y: f64) -> f64 {
            m * (-1.0 + x) * y + (1.0 - m) * x * y
        }
        fn presynaptic(m: f64, x: f64, y: f64) -> f64 {
            m * x * (-1.0 + y) + (1.0 - m) * x * y
        }
        fn covariance(m: f64, x: f64, y: f64) -> f64 {
            let f = (4.0 * (1.0 - (x - y).abs()) - 2.0).tanh();
            if f > 0.0 {
                (1.0 - m) * f
            } else {
                m * f
            }
        }
        let forms: [(PlasticityRule, fn(f64, f64, f64) -> f64); 4] = [
            (PlasticityRule::Hebbian, hebbian),
            (PlasticityRule::Postsynaptic, postsynaptic),
            (PlasticityRule::Presynaptic, presynaptic),
            (PlasticityRule::Covariance, covariance),
        ];
        for (rule, expected_delta) in forms {
            let mut genome = NetworkGenome::random(topo, &mut rng);
            for gene in &mut genome.genes {
                *gene = SynapseGene { rule, rate_index: 1, ..*gene };
            }
            let mut p = NetworkPhenotype::decode(&genome, &LEARNING_RATES, &mut rng).unwrap();
            let x = 0.8;
            let y = *p.activate(&[x, 1.0]).first().unwrap();
            let m0 = p.magnitude(0).unwrap();
            p.apply_plasticity();
            let want = (m0 + 0.3 * expected_delta(m0, x, y)).clamp(0.0, 1.0);
            let got = p.magnitude(0).unwrap();
            assert!((got - want).abs() < 1e-15, "{rule:?}: {got} vs {want}");
            assert_eq!(
                p.synapse_weight(0),
                2.0 * f64::from(genome.genes[0].sign) * got
            );
        }
    }

    #[test]
    fn zero_rate_synapses_never_change() {
        let mut rng = rng_from_seed(37);
        let mut genome =
            NetworkGenome::random(LayerTopology::new(4, 2, 1, SynapsePolicy::AllPlastic), &mut rng);
        for gene in &mut genome.genes {
            gene.rate_index = 0;
        }
        let mut p = NetworkPhenotype::decode(&genome, &LEARNING_RATES, &mut rng).unwrap();
        let before: Vec<f64> = (0..genome.genes.len()).map(|i| p.synapse_weight(i)).collect();
        for _ in 0..100 {
            let inputs: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
            p.activate(&inputs);
            p.apply_plasticity();
        }
        let after: Vec<f64> = (0..genome.genes.len()).map(|i| p.synapse_weight(i)).collect();
        assert_eq!(before, after);
    }

    #[test]
    fn saturated_hebbian_magnitude_is_stable() {
        // Delta = (1 - m) x y vanishes at m = 1 and the clamp holds it there.
        let mut rng = rng_from_seed(38);
        let mut genome =
            NetworkGenome::random(LayerTopology::new(2, 0, 1, SynapsePolicy::AllPlastic), &mut rng);
        for gene in &mut genome.genes {
            gene.rule = PlasticityRule::Hebbian;
            gene.rate_index = 3;
            gene.sign = 1;
        }
        let mut p = NetworkPhenotype::decode(&genome, &LEARNING_RATES, &mut rng).unwrap();
        for _ in 0..2000 {
            p.activate(&[1.0, 1.0]);
            p.apply_plasticity();
        }
        let m = p.magnitude(0).unwrap();
        assert!(m > 0.999, "hebbian magnitude should saturate, got {m}");
        p.activate(&[1.0, 1.0]);
        p.apply_plasticity();
        assert!(p.magnitude(0).unwrap() <= 1.0);
    }

    #[test]
    fn covariance_rule_special_values() {
        // Equal activities grow the magnitude by (1 - m) * tanh(2).
        let up = 2.0f64.tanh();
        for m in [0.0, 0.25, 0.9] {
            for x in [-0.7, 0.0, 0.4] {
                let d = plasticity_delta(PlasticityRule::Covariance, m, x, x);
                assert_eq!(d, (1.0 - m) * up);
            }
        }
        // Fully anti-correlated activities shrink it by m * tanh(-2).
        let d = plasticity_delta(PlasticityRule::Covariance, 0.5, 1.0, 0.0);
        assert_eq!(d, 0.5 * (-2.0f64).tanh());
        // The crossover sits at |x - y| = 0.5.
        assert_eq!(plasticity_delta(PlasticityRule::Covariance, 0.3, 0.5, 0.0), 0.0);

        // Repeated correlated activity saturates the magnitude.
        let mut m = 0.05;
        for _ in 0..200 {
            m = (m + 0.6 * plasticity_delta(PlasticityRule::Covariance, m, 0.3, 0.3)).clamp(0.0, 1.0);
        }
        assert!(m > 0.999, "covariance should saturate, got {m}");
    }

    fn constant_genome(arch: Architecture, weight: f64) -> LayeredGenome {
        let mut rng = rng_from_seed(40);
        let mut g = arch.random_genome(&mut rng);
        for layer in &mut g.layers {
            for gene in &mut layer.genes {
                gene.weight = weight;
                gene.kind = match layer.topology.policy {
                    SynapsePolicy::AllPlastic => SynapseKind::Plastic,
                    _ => SynapseKind::Fixed,
                };
                gene.rate_index = 0;
            }
        }
        g
    }

    #[test]
    fn monolithic_channel8_prefers_external_conditional() {
        let mut rng = rng_from_seed(41);
        let g = Architecture::Monolithic.random_genome(&mut rng);
        let mut with_cond = ControllerState::decode(&g, &mut rng_from_seed(5)).unwrap();
        let mut with_feedback = ControllerState::decode(&g, &mut rng_from_seed(5)).unwrap();
        let f = frame(); // feedback is -1
        let a = with_cond.step(&f, Some(1.0));
        let b = with_feedback.step(&f, None);
        assert_ne!(a, b, "channel 8 should see 1.0 vs -1.0");

        let mut ext_matches = ControllerState::decode(&g, &mut rng_from_seed(5)).unwrap();
        let c = ext_matches.step(&f, Some(-1.0));
        assert_eq!(b, c, "explicit conditional equal to feedback is identical");
    }

    #[test]
    fn single_layer_stack_drives_wheels_directly() {
        let g = constant_genome(Architecture::SubsumptionOne, 0.5);
        let mut rng = rng_from_seed(42);
        let mut c = ControllerState::decode(&g, &mut rng).unwrap();
        let f = frame();
        let (l, r) = c.step(&f, Some(0.0));
        let out = c.layer(0).outputs();
        assert_eq!((l, r), (out[0], out[1]));
    }

    #[test]
    fn gate_above_half_hands_wheels_to_avoidance_layer() {
        let mut g = constant_genome(Architecture::SubsumptionTwo, 0.3);
        // Give the gate output a fat bias so it saturates high.
        let t = g.layers[1].topology;
        for i in 0..t.n_inputs {
            g.layers[1].genes[2 * t.n_inputs + i].weight = 2.0;
        }
        let mut c = ControllerState::decode(&g, &mut rng_from_seed(1)).unwrap();
        let f = frame();
        let wheels = c.step(&f, Some(0.0));
        let upper = c.layer(1).outputs();
        assert!(upper[2] > GATE_THRESHOLD);
        assert_eq!(wheels, (upper[0], upper[1]));

        // Kill the gate: wheels come from the taxis layer.
        let mut g2 = constant_genome(Architecture::SubsumptionTwo, 0.3);
        let t = g2.layers[1].topology;
        for i in 0..t.n_inputs {
            g2.layers[1].genes[2 * t.n_inputs + i].weight = -2.0;
        }
        let mut c2 = ControllerState::decode(&g2, &mut rng_from_seed(1)).unwrap();
        let wheels = c2.step(&f, Some(0.0));
        let lower = c2.layer(0).outputs();
        assert!(c2.layer(1).outputs()[2] <= GATE_THRESHOLD);
        assert_eq!(wheels, (lower[0], lower[1]));
    }

    #[test]
    fn suppressed_gate_matches_single_layer_controller() {
        // A two-layer stack whose gate never opens behaves bit-identically
        // to the taxis layer alone.
        let mut rng = rng_from_seed(43);
        for _ in 0..20 {
            let mut two = Architecture::SubsumptionTwo.random_genome(&mut rng);
            let t = two.layers[1].topology;
            for i in 0..t.n_inputs {
                two.layers[1].genes[2 * t.n_inputs + i].weight = -2.0;
            }
            let one = two.truncated(1);
            let mut c2 = ControllerState::decode(&two, &mut rng_from_seed(9)).unwrap();
            let mut c1 = ControllerState::decode(&one, &mut rng_from_seed(9)).unwrap();
            for _ in 0..30 {
                let f = SensorFrame {
                    light: [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)],
                    obstacle: [
                        rng.random_range(0.0..0.4),
                        rng.random_range(0.0..0.4),
                        rng.random_range(0.0..0.4),
                    ],
                    contact: [0.0, 0.0],
                    feedback: 0.0,
                };
                assert_eq!(c2.step(&f, Some(1.0)), c1.step(&f, Some(1.0)));
            }
        }
    }

    #[test]
    fn learning_layer_output_replaces_external_conditional() {
        let mut rng = rng_from_seed(44);
        let g = Architecture::SubsumptionThree.random_genome(&mut rng);
        let mut c = ControllerState::decode(&g, &mut rng_from_seed(3)).unwrap();
        let f = frame();
        c.step(&f, Some(0.75));
        let cond = c.layer(2).outputs()[0];
        assert_ne!(cond, 0.75, "conditional must come from the learning layer");

        // Disabled learning layer defers to the external value and matches
        // the two-layer truncation exactly.
        let mut disabled = ControllerState::decode(&g, &mut rng_from_seed(3)).unwrap();
        disabled.set_learning_layer_active(false);
        let mut two = ControllerState::decode(&g.truncated(2), &mut rng_from_seed(3)).unwrap();
        for _ in 0..10 {
            assert_eq!(disabled.step(&f, Some(0.75)), two.step(&f, Some(0.75)));
        }
    }

    #[test]
    fn external_conditional_pinned_to_learning_output_matches_full_stack() {
        let mut rng = rng_from_seed(45);
        let three = Architecture::SubsumptionThree.random_genome(&mut rng);
        let mut c3 = ControllerState::decode(&three, &mut rng_from_seed(6)).unwrap();
        let f = frame();
        c3.step(&f, None);
        let cond = c3.layer(2).outputs()[0];
        // Feeding the truncated stack that same conditional reproduces the
        // lower layers bit for bit.
        let mut c2 = ControllerState::decode(&three.truncated(2), &mut rng_from_seed(6)).unwrap();
        c2.step(&f, Some(cond));
        assert_eq!(c3.layer(0).outputs(), c2.layer(0).outputs());
        assert_eq!(c3.layer(1).outputs(), c2.layer(1).outputs());
    }

    #[test]
    fn merge_connections_inject_weighted_activations() {
        let mut rng = rng_from_seed(46);
        let mut g = Architecture::SubsumptionTwo.random_genome(&mut rng).with_empty_connection_layers();
        let plain = {
            let mut c = ControllerState::decode(&g, &mut rng_from_seed(8)).unwrap();
            c.step(&frame(), Some(0.0))
        };

        // Zero-strength connections change nothing, bit for bit.
        g.connection_layers.as_mut().unwrap()[0].push(MergeConnection {
            source: NeuronRef::Output(2),
            target: NeuronRef::Hidden(0),
            strength: 0.0,
        });
        let mut c = ControllerState::decode(&g, &mut rng_from_seed(8)).unwrap();
        assert_eq!(c.step(&frame(), Some(0.0)), plain);

        // A strong connection shifts the target's pre-activation by
        // strength * source activation.
        g.connection_layers.as_mut().unwrap()[0][0].strength = 1.5;
        let mut c = ControllerState::decode(&g, &mut rng_from_seed(8)).unwrap();
        c.step(&frame(), Some(0.0));
        let source_act = c.layer(1).outputs()[2];
        let got = c.layer(0).hidden()[0];

        let mut base = ControllerState::decode(&g, &mut rng_from_seed(8)).unwrap();
        base.merges[0].clear();
        base.step(&frame(), Some(0.0));
        let t = g.layers[0].topology;
        let mut pre = 1.5 * source_act;
        let inputs = [frame().light[0], frame().light[1], 0.0, 1.0];
        for i in 0..t.n_inputs {
            pre += base.layer(0).synapse_weight(i) * inputs[i];
        }
        assert!((got - pre.tanh()).abs() < 1e-12);
    }

    #[test]
    fn deleting_all_merge_connections_restores_plain_behavior() {
        let mut rng = rng_from_seed(47);
        for _ in 0..10 {
            let plain = Architecture::SubsumptionThree.random_genome(&mut rng);
            let merged = plain.clone().with_empty_connection_layers();
            let mut a = ControllerState::decode(&plain, &mut rng_from_seed(4)).unwrap();
            let mut b = ControllerState::decode(&merged, &mut rng_from_seed(4)).unwrap();
            for _ in 0..25 {
                let f = SensorFrame {
                    light: [rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)],
                    obstacle: [0.1, 0.2, 0.0],
                    contact: [1.0, 0.0],
                    feedback: 1.0,
                };
                assert_eq!(a.step(&f, None), b.step(&f, None));
            }
        }
    }

    #[test]
    fn arbitrate_threshold_is_strict() {
        assert_eq!(arbitrate((0.1, 0.2), &[0.9, -0.9, 0.6]), (0.9, -0.9));
        assert_eq!(arbitrate((0.1, 0.2), &[0.9, -0.9, 0.5]), (0.1, 0.2));
        assert_eq!(arbitrate((0.1, 0.2), &[0.9, -0.9, -0.9]), (0.1, 0.2));
    }

    #[test]
    fn decode_rejects_unregistered_architectures() {
        let mut rng = rng_from_seed(48);
        let odd = LayeredGenome::new(vec![NetworkGenome::random(
            LayerTopology::new(3, 3, 3, SynapsePolicy::AllFixed),
            &mut rng,
        )]);
        assert!(matches!(
            ControllerState::decode(&odd, &mut rng),
            Err(Error::InvalidGenome(_))
        ));
    }
}
