//! Evolutionary strategies: per-cell resource-change kernels, their linear
//! mixtures, and the sign-scenario diagnostics.
//!
//! Each strategy acts as a test kernel probing one aspect of the data:
//!
//! * dominant rewards individually strong gene variants, so it probes the
//!   overall symmetry of variant fitness around 50% and, alone, would pile
//!   all weight onto the strongest gene;
//! * balanced counteracts it by penalizing genes that dominate a single
//!   row's fitness, which is what makes non-trivial equilibria possible;
//! * altruistic moves fitness between related genes, probing column
//!   correlations and the outliers that break them;
//! * selfish moves fitness between related organisms, probing row
//!   similarity, and acts as a tiebreaker in close games.
//!
//! All kernels are pure functions of a population snapshot (gene weights
//! plus organism fitness). They never mutate shared state, so an iteration
//! can evaluate them in any order against the same snapshot.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{KinshipAxis, KinshipMatrix, Population, ScaleConstants};

/// Gene-side strategies: how genes compete for fitness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneStrategy {
    Dominant,
    Altruistic,
}

impl GeneStrategy {
    pub const ALL: [GeneStrategy; 2] = [GeneStrategy::Dominant, GeneStrategy::Altruistic];

    pub fn name(&self) -> &'static str {
        match self {
            GeneStrategy::Dominant => "dominant",
            GeneStrategy::Altruistic => "altruistic",
        }
    }
}

/// Organism-side strategies: how organisms redistribute fitness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrganismStrategy {
    Balanced,
    Selfish,
}

impl OrganismStrategy {
    pub const ALL: [OrganismStrategy; 2] = [OrganismStrategy::Balanced, OrganismStrategy::Selfish];

    pub fn name(&self) -> &'static str {
        match self {
            OrganismStrategy::Balanced => "balanced",
            OrganismStrategy::Selfish => "selfish",
        }
    }
}

/// Identifies what a delta matrix holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyKind {
    GsDominant,
    GsAltruistic,
    OsBalanced,
    OsSelfish,
    MixedGene,
    MixedOrganism,
}

impl StrategyKind {
    /// Whether the matrix belongs to the gene side or the organism side.
    pub fn axis(&self) -> KinshipAxis {
        match self {
            StrategyKind::GsDominant | StrategyKind::GsAltruistic | StrategyKind::MixedGene => {
                KinshipAxis::Gene
            }
            StrategyKind::OsBalanced | StrategyKind::OsSelfish | StrategyKind::MixedOrganism => {
                KinshipAxis::Organism
            }
        }
    }
}

/// Per-cell resource changes produced by one strategy (or a mixture).
///
/// Entries at masked population cells are exactly 0 and all entries are
/// finite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaMatrix {
    strategy: StrategyKind,
    organisms: usize,
    genes: usize,
    values: Vec<f64>,
}

impl DeltaMatrix {
    fn new(strategy: StrategyKind, organisms: usize, genes: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), organisms * genes);
        DeltaMatrix {
            strategy,
            organisms,
            genes,
            values,
        }
    }

    pub fn strategy(&self) -> StrategyKind {
        self.strategy
    }

    pub fn organism_count(&self) -> usize {
        self.organisms
    }

    pub fn gene_count(&self) -> usize {
        self.genes
    }

    #[inline]
    pub fn value(&self, organism: usize, gene: usize) -> f64 {
        self.values[organism * self.genes + gene]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[cfg(test)]
    pub(crate) fn for_tests(
        strategy: StrategyKind,
        organisms: usize,
        genes: usize,
        values: Vec<f64>,
    ) -> Self {
        DeltaMatrix::new(strategy, organisms, genes, values)
    }

    /// Column sums: the total contribution of all organisms per gene.
    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.genes];
        for i in 0..self.organisms {
            for (j, sum) in sums.iter_mut().enumerate() {
                *sum += self.value(i, j);
            }
        }
        sums
    }
}

/// Dominant gene strategy: a variant above 50% fitness feeds its gene, one
/// below starves it, weighted by the squared gene fitness.
pub fn gs_dominant(pop: &Population, gene_weights: &[f64]) -> DeltaMatrix {
    let (n, m) = (pop.organism_count(), pop.gene_count());
    assert_eq!(gene_weights.len(), m, "gene weight length");
    let mut values = vec![0.0; n * m];
    for i in 0..n {
        for j in 0..m {
            if pop.is_present(i, j) {
                let scale = 4.0 * gene_weights[j] * gene_weights[j] / n as f64;
                values[i * m + j] = scale * (pop.value(i, j) - 0.5);
            }
        }
    }
    DeltaMatrix::new(StrategyKind::GsDominant, n, m, values)
}

/// Balanced organism strategy: an organism penalizes genes that contribute
/// more than the average share of its fitness and rewards the rest.
/// Organisms with zero fitness contribute nothing.
pub fn os_balanced(pop: &Population, gene_weights: &[f64], fitness: &[f64]) -> DeltaMatrix {
    let (n, m) = (pop.organism_count(), pop.gene_count());
    assert_eq!(gene_weights.len(), m, "gene weight length");
    assert_eq!(fitness.len(), n, "organism fitness length");
    let mut values = vec![0.0; n * m];
    let even_share = 1.0 / m as f64;
    for i in 0..n {
        if fitness[i] == 0.0 {
            continue;
        }
        let row_scale = 2.0 * fitness[i] / n as f64;
        for j in 0..m {
            if pop.is_present(i, j) {
                let contribution = gene_weights[j] * pop.value(i, j) / fitness[i];
                values[i * m + j] = -row_scale * (contribution - even_share);
            }
        }
    }
    DeltaMatrix::new(StrategyKind::OsBalanced, n, m, values)
}

/// Relative surplus a gene variant sees among its gene's relatives,
/// weighted by kinship. This is the second factor of the altruistic kernel
/// and of the gene sign scenarios.
fn altruistic_exchange(
    pop: &Population,
    gene_weights: &[f64],
    gene_kinship: &KinshipMatrix,
) -> Vec<f64> {
    let (n, m) = (pop.organism_count(), pop.gene_count());
    let mut values = vec![0.0; n * m];
    for i in 0..n {
        for j in 0..m {
            let mut sum = 0.0;
            for (l, &weight) in gene_weights.iter().enumerate() {
                if l != j {
                    sum += weight * gene_kinship.value(j, l) * (pop.value(i, l) - pop.value(i, j));
                }
            }
            values[i * m + j] = 4.0 / m as f64 * sum;
        }
    }
    values
}

/// Altruistic gene strategy: related genes exchange fitness according to
/// their kinship. The dominant factor is folded in algebraically so a gene
/// with zero fitness contributes exactly 0 instead of dividing 0 by 0.
pub fn gs_altruistic(
    pop: &Population,
    gene_weights: &[f64],
    gene_kinship: &KinshipMatrix,
) -> DeltaMatrix {
    let (n, m) = (pop.organism_count(), pop.gene_count());
    assert_eq!(gene_weights.len(), m, "gene weight length");
    assert_eq!(gene_kinship.axis(), KinshipAxis::Gene, "gene kinship axis");
    assert_eq!(gene_kinship.dim(), m, "gene kinship dimension");
    let exchange = altruistic_exchange(pop, gene_weights, gene_kinship);
    let mut values = vec![0.0; n * m];
    for i in 0..n {
        for j in 0..m {
            if pop.is_present(i, j) {
                let dominant_over_weight =
                    4.0 * gene_weights[j] / n as f64 * (pop.value(i, j) - 0.5);
                values[i * m + j] = dominant_over_weight * exchange[i * m + j];
            }
        }
    }
    DeltaMatrix::new(StrategyKind::GsAltruistic, n, m, values)
}

/// Kinship-weighted fitness advantage of each organism over the rest,
/// relative to the initial fitness spread. Row-constant second factor of
/// the selfish kernel and of the organism sign scenarios.
fn selfish_advantage(
    fitness: &[f64],
    organism_kinship: &KinshipMatrix,
    scale: &ScaleConstants,
) -> Vec<f64> {
    let n = fitness.len();
    let mut advantage = vec![0.0; n];
    for i in 0..n {
        let mut sum = 0.0;
        for t in 0..n {
            if t != i {
                sum += organism_kinship.value(i, t) * (fitness[i] - fitness[t]) / scale.rho;
            }
        }
        advantage[i] = sum / n as f64;
    }
    advantage
}

/// Selfish organism strategy: organisms shift fitness between related
/// organisms in proportion to how far ahead or behind they are, scaled by
/// how close a call the game initially was. Zero-fitness rows stay zero.
pub fn os_selfish(
    pop: &Population,
    fitness: &[f64],
    organism_kinship: &KinshipMatrix,
    scale: &ScaleConstants,
    balanced: &DeltaMatrix,
) -> DeltaMatrix {
    let (n, m) = (pop.organism_count(), pop.gene_count());
    assert_eq!(fitness.len(), n, "organism fitness length");
    assert_eq!(
        organism_kinship.axis(),
        KinshipAxis::Organism,
        "organism kinship axis"
    );
    assert_eq!(organism_kinship.dim(), n, "organism kinship dimension");
    assert_eq!(
        balanced.strategy(),
        StrategyKind::OsBalanced,
        "balanced input"
    );
    assert_eq!(balanced.organism_count(), n, "balanced rows");
    assert_eq!(balanced.gene_count(), m, "balanced columns");
    let advantage = selfish_advantage(fitness, organism_kinship, scale);
    let mut values = vec![0.0; n * m];
    for i in 0..n {
        if fitness[i] == 0.0 {
            continue;
        }
        let row_scale = advantage[i] / fitness[i];
        for j in 0..m {
            values[i * m + j] = balanced.value(i, j) * row_scale;
        }
    }
    DeltaMatrix::new(StrategyKind::OsSelfish, n, m, values)
}

/// How the mixing weights evolve during a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixMode {
    /// Weights stay at their configured values.
    Fixed,
    /// Weights evolve by their own replicator dynamics.
    SelfConsistent,
}

/// Convex mixture of strategies per side, plus the evolution mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyMix {
    pub mode: MixMode,
    gene_weights: BTreeMap<GeneStrategy, f64>,
    organism_weights: BTreeMap<OrganismStrategy, f64>,
}

fn validate_weights<K: Ord>(weights: &BTreeMap<K, f64>, side: &str) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::validation(format!(
            "{side} strategy weights are empty"
        )));
    }
    let mut sum = 0.0;
    for &w in weights.values() {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::validation(format!(
                "{side} strategy weight must be finite and non-negative, got {w}"
            )));
        }
        sum += w;
    }
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::validation(format!(
            "{side} strategy weights must sum to 1, got {sum}"
        )));
    }
    Ok(())
}

impl StrategyMix {
    pub fn new(
        mode: MixMode,
        gene_weights: BTreeMap<GeneStrategy, f64>,
        organism_weights: BTreeMap<OrganismStrategy, f64>,
    ) -> Result<Self> {
        validate_weights(&gene_weights, "gene")?;
        validate_weights(&organism_weights, "organism")?;
        Ok(StrategyMix {
            mode,
            gene_weights,
            organism_weights,
        })
    }

    /// Fixed weights from (strategy, weight) pairs.
    pub fn fixed(
        gene: &[(GeneStrategy, f64)],
        organism: &[(OrganismStrategy, f64)],
    ) -> Result<Self> {
        StrategyMix::new(
            MixMode::Fixed,
            gene.iter().copied().collect(),
            organism.iter().copied().collect(),
        )
    }

    /// Pure dominant + balanced pairing.
    pub fn dominant_balanced() -> Self {
        StrategyMix::fixed(
            &[
                (GeneStrategy::Dominant, 1.0),
                (GeneStrategy::Altruistic, 0.0),
            ],
            &[
                (OrganismStrategy::Balanced, 1.0),
                (OrganismStrategy::Selfish, 0.0),
            ],
        )
        .expect("valid weights")
    }

    /// Pure altruistic + selfish pairing.
    pub fn altruistic_selfish() -> Self {
        StrategyMix::fixed(
            &[
                (GeneStrategy::Dominant, 0.0),
                (GeneStrategy::Altruistic, 1.0),
            ],
            &[
                (OrganismStrategy::Balanced, 0.0),
                (OrganismStrategy::Selfish, 1.0),
            ],
        )
        .expect("valid weights")
    }

    /// Self-consistent mode starting from even weights on both sides.
    pub fn self_consistent() -> Self {
        StrategyMix::new(
            MixMode::SelfConsistent,
            [
                (GeneStrategy::Dominant, 0.5),
                (GeneStrategy::Altruistic, 0.5),
            ]
            .into_iter()
            .collect(),
            [
                (OrganismStrategy::Balanced, 0.5),
                (OrganismStrategy::Selfish, 0.5),
            ]
            .into_iter()
            .collect(),
        )
        .expect("valid weights")
    }

    pub fn gene_weights(&self) -> &BTreeMap<GeneStrategy, f64> {
        &self.gene_weights
    }

    pub fn organism_weights(&self) -> &BTreeMap<OrganismStrategy, f64> {
        &self.organism_weights
    }
}

fn blend<K: Ord>(
    deltas: &BTreeMap<K, DeltaMatrix>,
    weights: &BTreeMap<K, f64>,
    kind: StrategyKind,
    side: &str,
) -> Result<DeltaMatrix> {
    validate_weights(weights, side)?;
    let mut shape: Option<(usize, usize)> = None;
    for key in weights.keys() {
        let matrix = deltas.get(key).ok_or_else(|| {
            Error::validation(format!(
                "{side} mixture references a strategy without a matrix"
            ))
        })?;
        let dims = (matrix.organism_count(), matrix.gene_count());
        if let Some(existing) = shape {
            if existing != dims {
                return Err(Error::Dimension {
                    context: "strategy mixture",
                    expected: existing.0 * existing.1,
                    actual: dims.0 * dims.1,
                });
            }
        } else {
            shape = Some(dims);
        }
    }
    let (n, m) = shape.expect("weights are non-empty");
    let mut values = vec![0.0; n * m];
    for (key, &weight) in weights {
        let matrix = &deltas[key];
        for (out, v) in values.iter_mut().zip(matrix.values()) {
            *out += weight * v;
        }
    }
    Ok(DeltaMatrix::new(kind, n, m, values))
}

/// Linear mixture of gene-side and organism-side strategy matrices under
/// convex weights. Any number of strategies per side is accepted; every
/// weighted strategy must come with its matrix.
pub fn mix(
    gene_deltas: &BTreeMap<GeneStrategy, DeltaMatrix>,
    organism_deltas: &BTreeMap<OrganismStrategy, DeltaMatrix>,
    mix: &StrategyMix,
) -> Result<(DeltaMatrix, DeltaMatrix)> {
    let gene = blend(
        gene_deltas,
        mix.gene_weights(),
        StrategyKind::MixedGene,
        "gene",
    )?;
    let organism = blend(
        organism_deltas,
        mix.organism_weights(),
        StrategyKind::MixedOrganism,
        "organism",
    )?;
    Ok((gene, organism))
}

/// Sign of one factor of a strategy product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of(v: f64) -> Sign {
        if v > 0.0 {
            Sign::Positive
        } else if v < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    fn symbol(&self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Zero => '0',
            Sign::Positive => '+',
        }
    }
}

/// Relative size of a contribution within its matrix; reports repeat the
/// sign symbol once, twice or three times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMagnitude {
    Single,
    Double,
    Triple,
}

/// A sign with its magnitude bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignMark {
    pub sign: Sign,
    pub magnitude: SignMagnitude,
}

impl fmt::Display for SignMark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let repeats = match (self.sign, self.magnitude) {
            (Sign::Zero, _) | (_, SignMagnitude::Single) => 1,
            (_, SignMagnitude::Double) => 2,
            (_, SignMagnitude::Triple) => 3,
        };
        for _ in 0..repeats {
            write!(f, "{}", self.sign.symbol())?;
        }
        Ok(())
    }
}

/// Signs of the two factors of a product-form strategy cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SignPair {
    pub first: SignMark,
    pub second: SignMark,
}

impl fmt::Display for SignPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.second)
    }
}

/// Qualitative diagnostics of a snapshot: per-cell contribution shares and
/// the factor signs of the altruistic and selfish kernels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyDiagnostics {
    pub organisms: usize,
    pub genes: usize,
    /// Share each gene variant contributes to its organism's fitness;
    /// rows with positive fitness sum to 1.
    pub contribution_shares: Vec<f64>,
    /// (dominant factor, exchange factor) signs per cell.
    pub gene_signs: Vec<SignPair>,
    /// (balanced factor, advantage factor) signs per cell.
    pub organism_signs: Vec<SignPair>,
}

impl StrategyDiagnostics {
    pub fn gene_sign(&self, organism: usize, gene: usize) -> SignPair {
        self.gene_signs[organism * self.genes + gene]
    }

    pub fn organism_sign(&self, organism: usize, gene: usize) -> SignPair {
        self.organism_signs[organism * self.genes + gene]
    }

    pub fn contribution_share(&self, organism: usize, gene: usize) -> f64 {
        self.contribution_shares[organism * self.genes + gene]
    }
}

/// Median of the nonzero absolute values; 0 when everything is zero.
fn nonzero_median(values: impl Iterator<Item = f64>) -> f64 {
    let mut magnitudes: Vec<f64> = values.map(f64::abs).filter(|&v| v > 0.0).collect();
    if magnitudes.is_empty() {
        return 0.0;
    }
    magnitudes.sort_by(f64::total_cmp);
    let mid = magnitudes.len() / 2;
    if magnitudes.len() % 2 == 1 {
        magnitudes[mid]
    } else {
        0.5 * (magnitudes[mid - 1] + magnitudes[mid])
    }
}

fn mark(value: f64, median: f64) -> SignMark {
    let magnitude = if median > 0.0 && value.abs() >= 3.0 * median {
        SignMagnitude::Triple
    } else if median > 0.0 && value.abs() >= 1.5 * median {
        SignMagnitude::Double
    } else {
        SignMagnitude::Single
    };
    SignMark {
        sign: Sign::of(value),
        magnitude,
    }
}

/// Compute the sign scenarios and contribution shares for one snapshot.
pub fn sign_scenarios(
    pop: &Population,
    gene_weights: &[f64],
    fitness: &[f64],
    gene_kinship: &KinshipMatrix,
    organism_kinship: &KinshipMatrix,
    scale: &ScaleConstants,
) -> StrategyDiagnostics {
    let (n, m) = (pop.organism_count(), pop.gene_count());
    let dominant = gs_dominant(pop, gene_weights);
    let balanced = os_balanced(pop, gene_weights, fitness);
    let exchange = altruistic_exchange(pop, gene_weights, gene_kinship);
    let advantage = selfish_advantage(fitness, organism_kinship, scale);

    let mut contribution_shares = vec![0.0; n * m];
    for i in 0..n {
        if fitness[i] == 0.0 {
            continue;
        }
        for j in 0..m {
            contribution_shares[i * m + j] = gene_weights[j] * pop.value(i, j) / fitness[i];
        }
    }

    let dom_median = nonzero_median(dominant.values().iter().copied());
    let exch_median = nonzero_median(exchange.iter().copied());
    let bal_median = nonzero_median(balanced.values().iter().copied());
    let adv_median = nonzero_median(advantage.iter().copied());

    let mut gene_signs = Vec::with_capacity(n * m);
    let mut organism_signs = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            gene_signs.push(SignPair {
                first: mark(dominant.value(i, j), dom_median),
                second: mark(exchange[i * m + j], exch_median),
            });
            organism_signs.push(SignPair {
                first: mark(balanced.value(i, j), bal_median),
                second: mark(advantage[i], adv_median),
            });
        }
    }

    StrategyDiagnostics {
        organisms: n,
        genes: m,
        contribution_shares,
        gene_signs,
        organism_signs,
    }
}
