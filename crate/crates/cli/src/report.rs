//! Summary JSON and the plain-text diagnostics report.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use generank_core::{
    initial_fitness_range, kinship, organism_fitness, sign_scenarios, EseReport, GeneFitness,
    KinshipAxis, KinshipMatrix, Population, Trace,
};

use crate::config::RunConfigFile;
use crate::error::CliError;
use crate::input::LoadedTable;

#[derive(Debug, Serialize)]
pub struct Summary {
    pub meta: Meta,
    pub config_echo: RunConfigFile,
    pub converged: bool,
    pub iterations: usize,
    pub genes: Vec<GeneReport>,
    pub organisms: Vec<OrganismReport>,
    pub alphas: Alphas,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub organisms: usize,
    pub genes: usize,
    pub status: String,
}

#[derive(Debug, Serialize)]
pub struct GeneReport {
    pub name: String,
    pub gamma_final: f64,
    /// Pointer into the trace file when one was written.
    pub gamma_series_ref: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct OrganismReport {
    pub name: String,
    pub r_final: f64,
    pub rank: usize,
}

#[derive(Debug, Serialize)]
pub struct Alphas {
    pub gene: BTreeMap<String, f64>,
    pub organism: BTreeMap<String, f64>,
}

/// Assemble the run summary from the trace and its equilibrium report.
pub fn build_summary(
    config: &RunConfigFile,
    trace: &Trace,
    report: &EseReport,
    pop: &Population,
    trace_path: Option<&Path>,
) -> Summary {
    let mut warnings = Vec::new();
    if !report.converged {
        warnings.push(format!(
            "did not converge within {} iterations",
            report.iterations
        ));
    }
    let clamped: usize = trace.records.iter().map(|r| r.clamp_events.len()).sum();
    if clamped > 0 {
        warnings.push(format!(
            "accumulated deltas were clamped into (-1, 1] {clamped} time(s)"
        ));
    }

    let genes = report
        .genes
        .iter()
        .map(|g| GeneReport {
            name: g.name.clone(),
            gamma_final: g.fitness,
            gamma_series_ref: trace_path.map(|p| format!("{}#gamma/{}", p.display(), g.name)),
        })
        .collect();
    let organisms = report
        .ranking
        .entries
        .iter()
        .map(|e| OrganismReport {
            name: e.name.clone(),
            r_final: e.fitness,
            rank: e.rank,
        })
        .collect();

    Summary {
        meta: Meta {
            tool: "generank",
            version: env!("CARGO_PKG_VERSION"),
            organisms: pop.organism_count(),
            genes: pop.gene_count(),
            status: if report.converged {
                "converged".to_string()
            } else {
                "max_iterations".to_string()
            },
        },
        config_echo: config.clone(),
        converged: report.converged,
        iterations: report.iterations,
        genes,
        organisms,
        alphas: Alphas {
            gene: report
                .alpha_gene
                .iter()
                .map(|(k, &v)| (k.name().to_string(), v))
                .collect(),
            organism: report
                .alpha_organism
                .iter()
                .map(|(k, &v)| (k.name().to_string(), v))
                .collect(),
        },
        warnings,
    }
}

fn matrix_block(
    out: &mut String,
    title: &str,
    column_labels: &[String],
    row_labels: &[String],
    value: impl Fn(usize, usize) -> Option<f64>,
) {
    let _ = writeln!(out, "{title}");
    let width = 10usize;
    let label_width = row_labels.iter().map(|l| l.len()).max().unwrap_or(4).max(4);
    let mut header = format!("{:label_width$}", "");
    for label in column_labels {
        let _ = write!(header, " {label:>width$}");
    }
    let _ = writeln!(out, "{header}");
    for (i, label) in row_labels.iter().enumerate() {
        let mut line = format!("{label:label_width$}");
        for j in 0..column_labels.len() {
            match value(i, j) {
                Some(v) => {
                    let _ = write!(line, " {v:>width$.4}");
                }
                None => {
                    let _ = write!(line, " {:>width$}", "-");
                }
            }
        }
        let _ = writeln!(out, "{line}");
    }
}

fn kinship_block(out: &mut String, title: &str, labels: &[String], matrix: &KinshipMatrix) {
    matrix_block(out, title, labels, labels, |a, b| Some(matrix.value(a, b)));
}

/// Static diagnostics: the population, kinship, the initial fitness and
/// spread, and the iteration-0 sign scenarios.
pub fn analyze_report(loaded: &LoadedTable, config: &RunConfigFile) -> Result<String, CliError> {
    let pop = loaded.population()?;
    let gamma = match &config.initial_gamma {
        Some(values) => GeneFitness::new(values.clone(), 0).map_err(CliError::from)?,
        None => GeneFitness::uniform(pop.gene_count()).map_err(CliError::from)?,
    };
    let fitness = organism_fitness(&pop, gamma.weights())?;
    let scale = initial_fitness_range(&fitness);
    let gene_kinship = kinship(&pop, KinshipAxis::Gene);
    let organism_kinship = kinship(&pop, KinshipAxis::Organism);
    let diagnostics = sign_scenarios(
        &pop,
        gamma.weights(),
        &fitness,
        &gene_kinship,
        &organism_kinship,
        &scale,
    );

    let mut out = String::new();
    let _ = writeln!(
        out,
        "population: {} organisms x {} genes",
        pop.organism_count(),
        pop.gene_count()
    );
    matrix_block(
        &mut out,
        "\ngene variant fitness (missing cells shown as -)",
        &loaded.gene_names,
        &loaded.organism_names,
        |i, j| pop.is_present(i, j).then(|| pop.value(i, j)),
    );
    kinship_block(
        &mut out,
        "\ngene kinship",
        &loaded.gene_names,
        &gene_kinship,
    );
    kinship_block(
        &mut out,
        "\norganism kinship",
        &loaded.organism_names,
        &organism_kinship,
    );
    let _ = writeln!(out, "\ninitial organism fitness");
    for (name, value) in loaded.organism_names.iter().zip(&fitness) {
        let _ = writeln!(out, "  {name}: {value:.6}");
    }
    let _ = writeln!(out, "\ninitial fitness spread rho = {:.6}", scale.rho);

    let _ = writeln!(
        out,
        "\ngene sign scenarios (dominant factor, exchange factor)"
    );
    for (i, name) in loaded.organism_names.iter().enumerate() {
        let cells: Vec<String> = (0..pop.gene_count())
            .map(|j| diagnostics.gene_sign(i, j).to_string())
            .collect();
        let _ = writeln!(out, "  {name}: {}", cells.join(" "));
    }
    let _ = writeln!(
        out,
        "\norganism sign scenarios (balanced factor, advantage factor)"
    );
    for (i, name) in loaded.organism_names.iter().enumerate() {
        let cells: Vec<String> = (0..pop.gene_count())
            .map(|j| diagnostics.organism_sign(i, j).to_string())
            .collect();
        let _ = writeln!(out, "  {name}: {}", cells.join(" "));
    }
    Ok(out)
}
