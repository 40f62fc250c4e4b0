//! The iterative simulation: accumulate strategy contributions, apply
//! replicator updates, track convergence, and (optionally) evolve the
//! strategy mixing weights self-consistently.
//!
//! One simulation is a sequential loop; iteration k+1 is a pure function of
//! the iteration-k snapshot, so identical inputs always produce
//! bit-identical traces.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    initial_fitness_range, kinship, organism_fitness, KinshipAxis, Population, ScaleConstants,
};
use crate::strategies::{
    gs_altruistic, gs_dominant, mix, os_balanced, os_selfish, DeltaMatrix, GeneStrategy, MixMode,
    OrganismStrategy, StrategyMix,
};

/// Lower clamp bound keeps every replicator factor strictly positive.
const CLAMP_MIN: f64 = -1.0 + 1e-6;
const CLAMP_MAX: f64 = 1.0;

/// The dynamic gene fitness vector: non-negative weights summing to 1,
/// tagged with the iteration they belong to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneFitness {
    weights: Vec<f64>,
    iteration: usize,
}

impl GeneFitness {
    pub fn new(weights: Vec<f64>, iteration: usize) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::validation("gene fitness must not be empty"));
        }
        let mut sum = 0.0;
        for &w in &weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::validation(format!(
                    "gene fitness entries must be finite and non-negative, got {w}"
                )));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::validation(format!(
                "gene fitness must sum to 1, got {sum}"
            )));
        }
        Ok(GeneFitness { weights, iteration })
    }

    /// Even weights over `genes` features.
    pub fn uniform(genes: usize) -> Result<Self> {
        if genes == 0 {
            return Err(Error::validation("gene fitness must not be empty"));
        }
        let raw = vec![1.0 / genes as f64; genes];
        Ok(GeneFitness {
            weights: normalize(&raw),
            iteration: 0,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }
}

fn normalize(raw: &[f64]) -> Vec<f64> {
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|&w| w / sum).collect()
}

/// Whether accumulated per-gene deltas are clamped into (-1, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClampPolicy {
    On,
    Off,
}

/// Scale convention for the gene-side strategy effect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneEffectScale {
    /// Plain mean of the absolute contributions.
    Mean,
    /// Mean multiplied by the gene count.
    PerEquation,
}

/// Simulation parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    /// Starting gene fitness; even weights when absent.
    pub initial_gamma: Option<Vec<f64>>,
    /// Convergence tolerance on the max-norm step.
    pub epsilon: f64,
    pub max_iterations: usize,
    pub mix: StrategyMix,
    pub clamp_policy: ClampPolicy,
    pub gene_effect_scale: GeneEffectScale,
}

impl SimConfig {
    pub fn new(mix: StrategyMix) -> Self {
        SimConfig {
            initial_gamma: None,
            epsilon: 1e-8,
            max_iterations: 500,
            mix,
            clamp_policy: ClampPolicy::On,
            gene_effect_scale: GeneEffectScale::Mean,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn with_initial_gamma(mut self, gamma: Vec<f64>) -> Self {
        self.initial_gamma = Some(gamma);
        self
    }

    /// Validate and return the starting weights, renormalized to machine
    /// precision so the per-iteration normalization invariant holds from
    /// record 0.
    fn starting_gamma(&self, genes: usize) -> Result<GeneFitness> {
        if self.epsilon <= 0.0 || !self.epsilon.is_finite() {
            return Err(Error::validation(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::validation("max_iterations must be at least 1"));
        }
        match &self.initial_gamma {
            None => GeneFitness::uniform(genes),
            Some(raw) => {
                if raw.len() != genes {
                    return Err(Error::Dimension {
                        context: "initial gene fitness",
                        expected: genes,
                        actual: raw.len(),
                    });
                }
                let checked = GeneFitness::new(raw.clone(), 0)?;
                Ok(GeneFitness {
                    weights: normalize(checked.weights()),
                    iteration: 0,
                })
            }
        }
    }
}

/// One clamped accumulated delta, kept for the trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClampEvent {
    pub gene: usize,
    pub raw: f64,
    pub clamped: f64,
}

/// Accumulated per-gene resource change plus any clamping that occurred.
#[derive(Debug, Clone, PartialEq)]
pub struct AccumulatedDelta {
    pub total: Vec<f64>,
    pub clamps: Vec<ClampEvent>,
}

/// Sum the gene-side and organism-side contributions per gene over all
/// organisms, clamping into (-1, 1] when the policy asks for it.
pub fn accumulate(
    delta_gene: &DeltaMatrix,
    delta_organism: &DeltaMatrix,
    policy: ClampPolicy,
) -> Result<AccumulatedDelta> {
    let (n, m) = (delta_gene.organism_count(), delta_gene.gene_count());
    if delta_organism.organism_count() != n || delta_organism.gene_count() != m {
        return Err(Error::Dimension {
            context: "delta accumulation",
            expected: n * m,
            actual: delta_organism.organism_count() * delta_organism.gene_count(),
        });
    }
    let mut total = vec![0.0; m];
    for i in 0..n {
        for (j, out) in total.iter_mut().enumerate() {
            *out += delta_gene.value(i, j) + delta_organism.value(i, j);
        }
    }
    let mut clamps = Vec::new();
    for (j, value) in total.iter_mut().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite(format!("accumulated delta for gene {j}")));
        }
        if policy == ClampPolicy::On && (*value < CLAMP_MIN || *value > CLAMP_MAX) {
            let clamped = value.clamp(CLAMP_MIN, CLAMP_MAX);
            clamps.push(ClampEvent {
                gene: j,
                raw: *value,
                clamped,
            });
            *value = clamped;
        }
    }
    Ok(AccumulatedDelta { total, clamps })
}

/// One replicator update: scale each weight by (1 + delta) and renormalize.
pub fn replicator_step(gamma: &GeneFitness, delta: &[f64]) -> Result<GeneFitness> {
    if delta.len() != gamma.weights().len() {
        return Err(Error::Dimension {
            context: "replicator step",
            expected: gamma.weights().len(),
            actual: delta.len(),
        });
    }
    let mut scaled = Vec::with_capacity(delta.len());
    for (&w, &d) in gamma.weights().iter().zip(delta) {
        if !d.is_finite() {
            return Err(Error::NonFinite("replicator delta".to_string()));
        }
        let next = w * (1.0 + d);
        if next < 0.0 {
            return Err(Error::validation(format!(
                "delta {d} below -1 drove a gene fitness negative"
            )));
        }
        scaled.push(next);
    }
    let sum: f64 = scaled.iter().sum();
    if sum <= 0.0 {
        return Err(Error::DegenerateUpdate);
    }
    Ok(GeneFitness {
        weights: scaled.iter().map(|&w| w / sum).collect(),
        iteration: gamma.iteration() + 1,
    })
}

/// Absolute fitness effect of one strategy on the current snapshot.
///
/// Gene-side matrices use the mean absolute contribution (optionally scaled
/// by the gene count); organism-side matrices use the mean over organisms
/// of the weight-weighted absolute row contribution.
pub fn strategy_effect(delta: &DeltaMatrix, gene_weights: &[f64], scale: GeneEffectScale) -> f64 {
    let (n, m) = (delta.organism_count(), delta.gene_count());
    match delta.strategy().axis() {
        KinshipAxis::Gene => {
            let mean = delta.values().iter().map(|v| v.abs()).sum::<f64>() / (n * m) as f64;
            match scale {
                GeneEffectScale::Mean => mean,
                GeneEffectScale::PerEquation => mean * m as f64,
            }
        }
        KinshipAxis::Organism => {
            let mut sum = 0.0;
            for i in 0..n {
                for (j, &w) in gene_weights.iter().enumerate() {
                    sum += delta.value(i, j).abs() * w;
                }
            }
            sum / n as f64
        }
    }
}

/// Per-strategy absolute effects at one snapshot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrategyEffects {
    pub dominant: f64,
    pub altruistic: f64,
    pub balanced: f64,
    pub selfish: f64,
}

impl StrategyEffects {
    pub fn gene(&self, strategy: GeneStrategy) -> f64 {
        match strategy {
            GeneStrategy::Dominant => self.dominant,
            GeneStrategy::Altruistic => self.altruistic,
        }
    }

    pub fn organism(&self, strategy: OrganismStrategy) -> f64 {
        match strategy {
            OrganismStrategy::Balanced => self.balanced,
            OrganismStrategy::Selfish => self.selfish,
        }
    }
}

/// Replicator update for mixing weights: scale by (1 + effect) and
/// renormalize within the pair. Zero weights are absorbing.
pub fn alpha_replicator_step<K: Ord + Copy>(
    weights: &BTreeMap<K, f64>,
    effects: &BTreeMap<K, f64>,
) -> BTreeMap<K, f64> {
    let scaled: BTreeMap<K, f64> = weights
        .iter()
        .map(|(&k, &w)| (k, w * (1.0 + effects.get(&k).copied().unwrap_or(0.0))))
        .collect();
    let sum: f64 = scaled.values().sum();
    scaled.into_iter().map(|(k, w)| (k, w / sum)).collect()
}

/// How a simulation ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalStatus {
    Converged,
    MaxIterations,
}

/// Everything recorded about one iteration snapshot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRecord {
    pub iteration: usize,
    pub gamma: Vec<f64>,
    pub fitness: Vec<f64>,
    pub alpha_gene: BTreeMap<GeneStrategy, f64>,
    pub alpha_organism: BTreeMap<OrganismStrategy, f64>,
    pub effects: StrategyEffects,
    /// Accumulated per-gene delta evaluated at this snapshot (post-clamp).
    pub accumulated: Vec<f64>,
    pub clamp_events: Vec<ClampEvent>,
}

/// Full iteration history of one simulation. Record 0 holds the initial
/// state; records are strictly ordered with no gaps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub records: Vec<SimRecord>,
    pub status: TerminalStatus,
}

impl Trace {
    pub fn final_record(&self) -> &SimRecord {
        self.records.last().expect("traces are never empty")
    }

    pub fn converged(&self) -> bool {
        self.status == TerminalStatus::Converged
    }

    /// Iterations actually performed (trace length minus the initial record).
    pub fn iterations(&self) -> usize {
        self.records.len() - 1
    }
}

struct SnapshotEval {
    effects: StrategyEffects,
    accumulated: AccumulatedDelta,
}

fn evaluate_snapshot(
    pop: &Population,
    gamma: &GeneFitness,
    fitness: &[f64],
    alpha_gene: &BTreeMap<GeneStrategy, f64>,
    alpha_organism: &BTreeMap<OrganismStrategy, f64>,
    statics: &Statics,
    config: &SimConfig,
) -> Result<SnapshotEval> {
    let dominant = gs_dominant(pop, gamma.weights());
    let balanced = os_balanced(pop, gamma.weights(), fitness);
    let altruistic = gs_altruistic(pop, gamma.weights(), &statics.gene_kinship);
    let selfish = os_selfish(
        pop,
        fitness,
        &statics.organism_kinship,
        &statics.scale,
        &balanced,
    );

    let effects = StrategyEffects {
        dominant: strategy_effect(&dominant, gamma.weights(), config.gene_effect_scale),
        altruistic: strategy_effect(&altruistic, gamma.weights(), config.gene_effect_scale),
        balanced: strategy_effect(&balanced, gamma.weights(), config.gene_effect_scale),
        selfish: strategy_effect(&selfish, gamma.weights(), config.gene_effect_scale),
    };

    let gene_deltas: BTreeMap<GeneStrategy, DeltaMatrix> = [
        (GeneStrategy::Dominant, dominant),
        (GeneStrategy::Altruistic, altruistic),
    ]
    .into_iter()
    .collect();
    let organism_deltas: BTreeMap<OrganismStrategy, DeltaMatrix> = [
        (OrganismStrategy::Balanced, balanced),
        (OrganismStrategy::Selfish, selfish),
    ]
    .into_iter()
    .collect();

    let mix_config = StrategyMix::new(config.mix.mode, alpha_gene.clone(), alpha_organism.clone())?;
    let (mixed_gene, mixed_organism) = mix(&gene_deltas, &organism_deltas, &mix_config)?;
    let accumulated = accumulate(&mixed_gene, &mixed_organism, config.clamp_policy)?;

    Ok(SnapshotEval {
        effects,
        accumulated,
    })
}

struct Statics {
    gene_kinship: crate::model::KinshipMatrix,
    organism_kinship: crate::model::KinshipMatrix,
    scale: ScaleConstants,
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn max_map_diff<K: Ord>(a: &BTreeMap<K, f64>, b: &BTreeMap<K, f64>) -> f64 {
    a.iter()
        .map(|(k, v)| (v - b.get(k).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// Run the evolutionary simulation described by `config` on `pop`.
///
/// Strategies are always evaluated against the iteration-k snapshot, the
/// gene fitness is advanced with the iteration-k mixing weights, and in
/// self-consistent mode the weights advance afterwards. The loop stops when
/// the max-norm step of the gene fitness (and, in self-consistent mode, of
/// the mixing weights) falls below epsilon, or at `max_iterations`.
pub fn simulate(pop: &Population, config: &SimConfig) -> Result<Trace> {
    let mut gamma = config.starting_gamma(pop.gene_count())?;
    let mut fitness = organism_fitness(pop, gamma.weights())?;
    let statics = Statics {
        gene_kinship: kinship(pop, KinshipAxis::Gene),
        organism_kinship: kinship(pop, KinshipAxis::Organism),
        scale: initial_fitness_range(&fitness),
    };
    let self_consistent = config.mix.mode == MixMode::SelfConsistent;
    let mut alpha_gene = config.mix.gene_weights().clone();
    let mut alpha_organism = config.mix.organism_weights().clone();

    let mut records = Vec::with_capacity(config.max_iterations.min(1024) + 1);
    let mut converged = false;
    let status;

    loop {
        let eval = evaluate_snapshot(
            pop,
            &gamma,
            &fitness,
            &alpha_gene,
            &alpha_organism,
            &statics,
            config,
        )?;
        records.push(SimRecord {
            iteration: gamma.iteration(),
            gamma: gamma.weights().to_vec(),
            fitness: fitness.clone(),
            alpha_gene: alpha_gene.clone(),
            alpha_organism: alpha_organism.clone(),
            effects: eval.effects,
            accumulated: eval.accumulated.total.clone(),
            clamp_events: eval.accumulated.clamps.clone(),
        });
        if converged {
            status = TerminalStatus::Converged;
            break;
        }
        if gamma.iteration() == config.max_iterations {
            status = TerminalStatus::MaxIterations;
            break;
        }

        let next_gamma = replicator_step(&gamma, &eval.accumulated.total)?;
        let (next_alpha_gene, next_alpha_organism) = if self_consistent {
            let gene_effects: BTreeMap<GeneStrategy, f64> = GeneStrategy::ALL
                .iter()
                .map(|&s| (s, eval.effects.gene(s)))
                .collect();
            let organism_effects: BTreeMap<OrganismStrategy, f64> = OrganismStrategy::ALL
                .iter()
                .map(|&s| (s, eval.effects.organism(s)))
                .collect();
            (
                alpha_replicator_step(&alpha_gene, &gene_effects),
                alpha_replicator_step(&alpha_organism, &organism_effects),
            )
        } else {
            (alpha_gene.clone(), alpha_organism.clone())
        };
        let next_fitness = organism_fitness(pop, next_gamma.weights())?;

        let gamma_step = max_abs_diff(next_gamma.weights(), gamma.weights());
        let alpha_step = max_map_diff(&next_alpha_gene, &alpha_gene)
            .max(max_map_diff(&next_alpha_organism, &alpha_organism));
        converged = gamma_step < config.epsilon && alpha_step < config.epsilon;

        gamma = next_gamma;
        fitness = next_fitness;
        alpha_gene = next_alpha_gene;
        alpha_organism = next_alpha_organism;
    }

    Ok(Trace { records, status })
}

/// `simulate` restricted to self-consistent mixing.
pub fn simulate_self_consistent(pop: &Population, config: &SimConfig) -> Result<Trace> {
    if config.mix.mode != MixMode::SelfConsistent {
        return Err(Error::validation(
            "self-consistent simulation requires mix mode self_consistent",
        ));
    }
    simulate(pop, config)
}
