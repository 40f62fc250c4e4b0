//! Read-side transforms of traces: rankings, equilibrium reports and
//! trajectory velocities. Everything here is a pure function of immutable
//! inputs, so re-running on a stored trace reproduces the output exactly.

use serde::Serialize;

use crate::engine::{TerminalStatus, Trace};
use crate::error::{Error, Result};
use crate::model::{
    initial_fitness_range, kinship, KinshipAxis, KinshipMatrix, Population, ScaleConstants,
};
use crate::strategies::{sign_scenarios, StrategyDiagnostics};

/// One ranked organism.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedOrganism {
    /// Index of the organism in the input table.
    pub index: usize,
    pub name: String,
    pub fitness: f64,
    /// Competition rank: ties share the smaller rank number.
    pub rank: usize,
}

/// Organisms sorted by fitness, best first; ties keep input order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ranking {
    pub iteration: usize,
    pub entries: Vec<RankedOrganism>,
}

/// Rank organisms by fitness, descending. Equal fitness values share the
/// smaller rank and stay in input order, keeping runs reproducible.
pub fn rank(fitness: &[f64], names: &[String], iteration: usize) -> Result<Ranking> {
    if fitness.len() != names.len() {
        return Err(Error::Dimension {
            context: "ranking names",
            expected: fitness.len(),
            actual: names.len(),
        });
    }
    let mut order: Vec<usize> = (0..fitness.len()).collect();
    order.sort_by(|&a, &b| fitness[b].total_cmp(&fitness[a]).then(a.cmp(&b)));

    let mut entries: Vec<RankedOrganism> = Vec::with_capacity(order.len());
    for (position, &index) in order.iter().enumerate() {
        let rank = match entries.last() {
            Some(prev) if prev.fitness == fitness[index] => prev.rank,
            _ => position + 1,
        };
        entries.push(RankedOrganism {
            index,
            name: names[index].clone(),
            fitness: fitness[index],
            rank,
        });
    }
    Ok(Ranking { iteration, entries })
}

/// Final gene fitness with its feature name.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneSummary {
    pub name: String,
    pub fitness: f64,
}

/// Snapshot report of a finished simulation: the terminal state plus the
/// static context needed to read it (kinship, initial spread, final sign
/// scenarios).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EseReport {
    pub converged: bool,
    pub iterations: usize,
    pub genes: Vec<GeneSummary>,
    pub ranking: Ranking,
    pub alpha_gene: std::collections::BTreeMap<crate::strategies::GeneStrategy, f64>,
    pub alpha_organism: std::collections::BTreeMap<crate::strategies::OrganismStrategy, f64>,
    pub top_gene: String,
    pub bottom_gene: String,
    /// Componentwise step of the last iteration, zero for a bare initial
    /// state.
    pub gamma_velocity: Vec<f64>,
    pub scale: ScaleConstants,
    pub gene_kinship: KinshipMatrix,
    pub organism_kinship: KinshipMatrix,
    pub diagnostics: StrategyDiagnostics,
}

/// Build the equilibrium report for a trace.
pub fn summarize(
    trace: &Trace,
    pop: &Population,
    gene_names: &[String],
    organism_names: &[String],
) -> Result<EseReport> {
    let last = trace.final_record();
    if gene_names.len() != pop.gene_count() {
        return Err(Error::Dimension {
            context: "gene names",
            expected: pop.gene_count(),
            actual: gene_names.len(),
        });
    }
    if organism_names.len() != pop.organism_count() {
        return Err(Error::Dimension {
            context: "organism names",
            expected: pop.organism_count(),
            actual: organism_names.len(),
        });
    }

    let genes: Vec<GeneSummary> = gene_names
        .iter()
        .zip(&last.gamma)
        .map(|(name, &fitness)| GeneSummary {
            name: name.clone(),
            fitness,
        })
        .collect();
    let top_gene = genes
        .iter()
        .max_by(|a, b| a.fitness.total_cmp(&b.fitness))
        .expect("at least one gene")
        .name
        .clone();
    let bottom_gene = genes
        .iter()
        .min_by(|a, b| a.fitness.total_cmp(&b.fitness))
        .expect("at least one gene")
        .name
        .clone();

    let gamma_velocity = if trace.records.len() >= 2 {
        let prev = &trace.records[trace.records.len() - 2];
        last.gamma
            .iter()
            .zip(&prev.gamma)
            .map(|(a, b)| a - b)
            .collect()
    } else {
        vec![0.0; pop.gene_count()]
    };

    let scale = initial_fitness_range(&trace.records[0].fitness);
    let gene_kinship = kinship(pop, KinshipAxis::Gene);
    let organism_kinship = kinship(pop, KinshipAxis::Organism);
    let diagnostics = sign_scenarios(
        pop,
        &last.gamma,
        &last.fitness,
        &gene_kinship,
        &organism_kinship,
        &scale,
    );

    Ok(EseReport {
        converged: trace.status == TerminalStatus::Converged,
        iterations: trace.iterations(),
        genes,
        ranking: rank(&last.fitness, organism_names, last.iteration)?,
        alpha_gene: last.alpha_gene.clone(),
        alpha_organism: last.alpha_organism.clone(),
        top_gene,
        bottom_gene,
        gamma_velocity,
        scale,
        gene_kinship,
        organism_kinship,
        diagnostics,
    })
}
