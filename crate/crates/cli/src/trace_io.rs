//! Long-format trace CSV: `iteration,kind,name,value` with 17 significant
//! digits and LF line endings, so any plotting tool can reproduce the
//! fitness and mixing curves, and a re-parse recovers the exact values.

use std::io::{Read, Write};

use generank_core::{GeneStrategy, OrganismStrategy, Trace};

use crate::error::CliError;

/// One row of the long-format trace.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub kind: String,
    pub name: String,
    pub value: f64,
}

fn fmt_value(value: f64) -> String {
    format!("{value:.16e}")
}

/// Serialize a trace. Row order is fixed: per iteration the gamma series,
/// the organism fitness, the two mixing pairs, then the per-strategy
/// effects.
pub fn write_trace<W: Write>(
    writer: W,
    trace: &Trace,
    gene_names: &[String],
    organism_names: &[String],
) -> Result<(), CliError> {
    let mut csv = csv::WriterBuilder::new().from_writer(writer);
    csv.write_record(["iteration", "kind", "name", "value"])
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    for record in &trace.records {
        let iteration = record.iteration.to_string();
        let mut put = |kind: &str, name: &str, value: f64| -> Result<(), CliError> {
            csv.write_record([iteration.as_str(), kind, name, fmt_value(value).as_str()])
                .map_err(|e| CliError::Runtime(e.to_string()))
        };
        for (name, &value) in gene_names.iter().zip(&record.gamma) {
            put("gamma", name, value)?;
        }
        for (name, &value) in organism_names.iter().zip(&record.fitness) {
            put("r", name, value)?;
        }
        for strategy in GeneStrategy::ALL {
            put(
                "alpha_gene",
                strategy.name(),
                record.alpha_gene.get(&strategy).copied().unwrap_or(0.0),
            )?;
        }
        for strategy in OrganismStrategy::ALL {
            put(
                "alpha_organism",
                strategy.name(),
                record.alpha_organism.get(&strategy).copied().unwrap_or(0.0),
            )?;
        }
        put("delta_bar", "dominant", record.effects.dominant)?;
        put("delta_bar", "altruistic", record.effects.altruistic)?;
        put("delta_bar", "balanced", record.effects.balanced)?;
        put("delta_bar", "selfish", record.effects.selfish)?;
    }
    csv.flush().map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(())
}

/// Parse a trace CSV back into rows.
pub fn read_trace<R: Read>(reader: R) -> Result<Vec<TraceRow>, CliError> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let mut rows = Vec::new();
    for record in csv.records() {
        let record = record.map_err(|e| CliError::validation(format!("malformed trace: {e}")))?;
        let field = |index: usize| record.get(index).unwrap_or_default().to_string();
        rows.push(TraceRow {
            iteration: field(0)
                .parse()
                .map_err(|e| CliError::validation(format!("bad iteration: {e}")))?,
            kind: field(1),
            name: field(2),
            value: field(3)
                .parse()
                .map_err(|e| CliError::validation(format!("bad value: {e}")))?,
        });
    }
    Ok(rows)
}
