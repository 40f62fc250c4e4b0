//! Static data model: raw tables, gene-variant fitness, the population
//! matrix and the derived quantities (kinship, initial fitness range).
//!
//! Everything in this module is computed once, before a simulation starts,
//! and is immutable afterwards. Rows of the input table are organisms
//! (candidate solutions), columns are genes (data features), and a single
//! cell is a gene variant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError};

/// One cell of the raw input table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    /// A non-negative finite number.
    Number(f64),
    /// A list of labels, e.g. tags attached to a row.
    Labels(Vec<String>),
    /// No value; the cell takes no direct part in the dynamics.
    Missing,
}

/// The raw input matrix: `n` rows (organisms) by `m` named columns (genes).
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    column_names: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl RawTable {
    /// Build a table, checking shape and numeric-cell validity.
    pub fn new(column_names: Vec<String>, rows: Vec<Vec<Cell>>) -> Result<Self> {
        if column_names.is_empty() {
            return Err(Error::validation("table must have at least one column"));
        }
        if rows.is_empty() {
            return Err(Error::validation("table must have at least one row"));
        }
        let m = column_names.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::Validation(
                    ValidationError::new(format!("row has {} cells, expected {}", row.len(), m))
                        .at_row(i + 1),
                ));
            }
            for (j, cell) in row.iter().enumerate() {
                if let Cell::Number(v) = cell {
                    if !v.is_finite() {
                        return Err(Error::Validation(
                            ValidationError::new(format!("numeric cell is not finite: {v}"))
                                .at_row(i + 1)
                                .at_column(&column_names[j]),
                        ));
                    }
                    if *v < 0.0 {
                        return Err(Error::Validation(
                            ValidationError::new(format!("numeric cell is negative: {v}"))
                                .at_row(i + 1)
                                .at_column(&column_names[j]),
                        ));
                    }
                }
            }
        }
        Ok(RawTable { column_names, rows })
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn organism_count(&self) -> usize {
        self.rows.len()
    }

    pub fn gene_count(&self) -> usize {
        self.column_names.len()
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    /// Cells of column `j`, in row order.
    pub fn column(&self, j: usize) -> Vec<Cell> {
        self.rows.iter().map(|row| row[j].clone()).collect()
    }
}

/// How a column's raw values are turned into gene-variant fitness in [0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitnessKind {
    /// 1 when the cell has a value, 0 when missing.
    Boolean,
    /// Value divided by the column maximum ("larger is better").
    Percentage,
    /// One minus value over the column maximum ("larger is worse").
    InversePercentage,
    /// Fraction of the target labels present in the cell.
    Overlap { targets: Vec<String> },
}

/// Binds a fitness function to one table column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub column: usize,
    pub kind: FitnessKind,
}

impl FeatureSpec {
    pub fn new(column: usize, kind: FitnessKind) -> Self {
        FeatureSpec { column, kind }
    }
}

/// Apply a gene-variant fitness function to one column of cells.
///
/// Returns the per-cell fitness values together with the presence mask.
/// Missing cells yield fitness 0 and `present = false`.
///
/// Degenerate numeric columns (maximum over present cells is 0) yield 0 for
/// every present cell under `Percentage` and 1 under `InversePercentage`:
/// zero cost is the best possible cost.
pub fn variant_fitness(kind: &FitnessKind, column: &[Cell]) -> Result<(Vec<f64>, Vec<bool>)> {
    if column.is_empty() {
        return Err(Error::validation(
            "cannot compute fitness of an empty column",
        ));
    }
    let present: Vec<bool> = column.iter().map(|c| !matches!(c, Cell::Missing)).collect();

    match kind {
        FitnessKind::Boolean => {
            let values = present.iter().map(|&p| if p { 1.0 } else { 0.0 }).collect();
            Ok((values, present))
        }
        FitnessKind::Percentage | FitnessKind::InversePercentage => {
            let mut numbers = Vec::with_capacity(column.len());
            for (i, cell) in column.iter().enumerate() {
                match cell {
                    Cell::Number(v) => {
                        if !v.is_finite() || *v < 0.0 {
                            return Err(Error::Validation(
                                ValidationError::new(format!(
                                    "numeric fitness requires finite non-negative values, got {v}"
                                ))
                                .at_row(i + 1),
                            ));
                        }
                        numbers.push(Some(*v));
                    }
                    Cell::Missing => numbers.push(None),
                    Cell::Labels(_) => {
                        return Err(Error::Validation(
                            ValidationError::new(
                                "numeric fitness applied to a label cell".to_string(),
                            )
                            .at_row(i + 1),
                        ));
                    }
                }
            }
            let max = numbers
                .iter()
                .flatten()
                .fold(None::<f64>, |acc, &v| Some(acc.map_or(v, |a| a.max(v))));
            let max = max.ok_or_else(|| {
                Error::validation("column has no present values to normalize against")
            })?;
            let inverse = matches!(kind, FitnessKind::InversePercentage);
            let values = numbers
                .iter()
                .map(|n| match n {
                    None => 0.0,
                    Some(v) => {
                        let share = if max == 0.0 { 0.0 } else { v / max };
                        if inverse {
                            1.0 - share
                        } else {
                            share
                        }
                    }
                })
                .collect();
            Ok((values, present))
        }
        FitnessKind::Overlap { targets } => {
            if targets.is_empty() {
                return Err(Error::validation(
                    "overlap fitness requires at least one target label",
                ));
            }
            let mut values = Vec::with_capacity(column.len());
            let mut any_present = false;
            for (i, cell) in column.iter().enumerate() {
                match cell {
                    Cell::Labels(labels) => {
                        any_present = true;
                        let matched = targets
                            .iter()
                            .filter(|t| labels.iter().any(|l| l == *t))
                            .count();
                        values.push(matched as f64 / targets.len() as f64);
                    }
                    Cell::Missing => values.push(0.0),
                    Cell::Number(_) => {
                        return Err(Error::Validation(
                            ValidationError::new(
                                "overlap fitness applied to a numeric cell".to_string(),
                            )
                            .at_row(i + 1),
                        ));
                    }
                }
            }
            if !any_present {
                return Err(Error::validation(
                    "column has no present values to normalize against",
                ));
            }
            Ok((values, present))
        }
    }
}

/// The immutable population: gene-variant fitness values plus presence mask.
///
/// Every present value lies in [0, 1]; masked cells hold exactly 0. The
/// population never changes during a simulation, so it is safe to share
/// across threads.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Population {
    values: Vec<f64>,
    present: Vec<bool>,
    organisms: usize,
    genes: usize,
}

impl Population {
    /// Construct from row-major values and mask, enforcing the range
    /// invariants.
    pub fn from_parts(
        values: Vec<f64>,
        present: Vec<bool>,
        organisms: usize,
        genes: usize,
    ) -> Result<Self> {
        if organisms == 0 || genes == 0 {
            return Err(Error::validation(
                "population must have at least one organism and one gene",
            ));
        }
        if values.len() != organisms * genes || present.len() != values.len() {
            return Err(Error::Dimension {
                context: "population construction",
                expected: organisms * genes,
                actual: values.len(),
            });
        }
        for (idx, (&v, &p)) in values.iter().zip(&present).enumerate() {
            if p {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::validation(format!(
                        "gene-variant fitness {} out of [0, 1] at row {}, column {}",
                        v,
                        idx / genes + 1,
                        idx % genes + 1
                    )));
                }
            } else if v != 0.0 {
                return Err(Error::validation(format!(
                    "masked cell must hold 0, got {} at row {}, column {}",
                    v,
                    idx / genes + 1,
                    idx % genes + 1
                )));
            }
        }
        Ok(Population {
            values,
            present,
            organisms,
            genes,
        })
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

    #[inline]
    pub fn is_present(&self, organism: usize, gene: usize) -> bool {
        self.present[organism * self.genes + gene]
    }

    /// Gene-variant fitness vector of one organism (a table row).
    pub fn organism(&self, organism: usize) -> &[f64] {
        &self.values[organism * self.genes..(organism + 1) * self.genes]
    }

    /// Gene-variant fitness vector of one gene (a table column).
    pub fn gene(&self, gene: usize) -> Vec<f64> {
        (0..self.organisms).map(|i| self.value(i, gene)).collect()
    }
}

/// Apply the configured fitness functions column by column.
///
/// Exactly one spec per column is required; specs may come in any order.
pub fn build_population(table: &RawTable, specs: &[FeatureSpec]) -> Result<Population> {
    let m = table.gene_count();
    let n = table.organism_count();
    if specs.len() != m {
        return Err(Error::Dimension {
            context: "feature specs",
            expected: m,
            actual: specs.len(),
        });
    }
    let mut by_column: Vec<Option<&FeatureSpec>> = vec![None; m];
    for spec in specs {
        if spec.column >= m {
            return Err(Error::validation(format!(
                "feature spec refers to column {} but the table has {} columns",
                spec.column, m
            )));
        }
        if by_column[spec.column].replace(spec).is_some() {
            return Err(Error::Validation(
                ValidationError::new("duplicate feature spec for column")
                    .at_column(&table.column_names()[spec.column]),
            ));
        }
    }

    let mut values = vec![0.0; n * m];
    let mut present = vec![false; n * m];
    for j in 0..m {
        let spec = by_column[j].expect("every column has a spec");
        let column = table.column(j);
        let (col_values, col_present) =
            variant_fitness(&spec.kind, &column).map_err(|e| match e {
                Error::Validation(v) => Error::Validation(v.at_column(&table.column_names()[j])),
                other => other,
            })?;
        for i in 0..n {
            values[i * m + j] = col_values[i];
            present[i * m + j] = col_present[i];
        }
    }
    Population::from_parts(values, present, n, m)
}

/// Organism fitness: the gene-fitness-weighted sum of each organism's
/// variant fitness values. Each entry lies in [0, 1] when the weights are
/// normalized.
pub fn organism_fitness(pop: &Population, gene_weights: &[f64]) -> Result<Vec<f64>> {
    if gene_weights.len() != pop.gene_count() {
        return Err(Error::Dimension {
            context: "organism fitness",
            expected: pop.gene_count(),
            actual: gene_weights.len(),
        });
    }
    let sum: f64 = gene_weights.iter().sum();
    if !sum.is_finite() || (sum - 1.0).abs() > 1e-9 {
        return Err(Error::validation(format!(
            "gene fitness must be normalized, sum is {sum}"
        )));
    }
    Ok((0..pop.organism_count())
        .map(|i| {
            pop.organism(i)
                .iter()
                .zip(gene_weights)
                .map(|(v, w)| w * v)
                .sum()
        })
        .collect())
}

/// Which vectors a kinship matrix compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KinshipAxis {
    Gene,
    Organism,
}

/// Symmetric similarity matrix with unit diagonal: 1 minus the Euclidean
/// distance of the two vectors divided by their length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KinshipMatrix {
    axis: KinshipAxis,
    dim: usize,
    values: Vec<f64>,
}

impl KinshipMatrix {
    pub fn axis(&self) -> KinshipAxis {
        self.axis
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn value(&self, a: usize, b: usize) -> f64 {
        self.values[a * self.dim + b]
    }
}

/// Compute gene kinship (column similarity) or organism kinship (row
/// similarity) for a population.
pub fn kinship(pop: &Population, axis: KinshipAxis) -> KinshipMatrix {
    let (dim, len) = match axis {
        KinshipAxis::Gene => (pop.gene_count(), pop.organism_count()),
        KinshipAxis::Organism => (pop.organism_count(), pop.gene_count()),
    };
    let component = |a: usize, k: usize| match axis {
        KinshipAxis::Gene => pop.value(k, a),
        KinshipAxis::Organism => pop.value(a, k),
    };
    let mut values = vec![0.0; dim * dim];
    for a in 0..dim {
        values[a * dim + a] = 1.0;
        for b in a + 1..dim {
            let mut sq = 0.0;
            for k in 0..len {
                let d = component(a, k) - component(b, k);
                sq += d * d;
            }
            let kin = 1.0 - sq.sqrt() / len as f64;
            values[a * dim + b] = kin;
            values[b * dim + a] = kin;
        }
    }
    KinshipMatrix { axis, dim, values }
}

/// Scale constants frozen at iteration 0.
///
/// `rho` is the initial spread of organism fitness; it stays fixed for the
/// whole simulation and scales the selfish resource transfers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleConstants {
    pub rho: f64,
}

/// Spread of the initial organism fitness, with fallbacks keeping it
/// strictly positive: all-equal fitness falls back to the maximum, and an
/// all-zero population falls back to 1 (making selfish transfers a no-op).
pub fn initial_fitness_range(initial_fitness: &[f64]) -> ScaleConstants {
    let max = initial_fitness.iter().fold(f64::MIN, |a, &b| a.max(b));
    let min = initial_fitness.iter().fold(f64::MAX, |a, &b| a.min(b));
    let mut rho = max - min;
    if rho == 0.0 {
        rho = max;
    }
    if rho == 0.0 {
        rho = 1.0;
    }
    ScaleConstants { rho }
}
