//! CSV ingestion: UTF-8, header row, '.' decimal separator, empty cell =
//! missing, ';'-separated tokens = label list. Parsing is locale
//! independent and collects every problem it finds instead of stopping at
//! the first.

use std::path::Path;

use generank_core::{build_population, Cell, FeatureSpec, Population, RawTable};

use crate::config::{fitness_kind, RunConfigFile};
use crate::error::{CliError, Issue};

/// A parsed table with its naming, ready for the engine.
pub struct LoadedTable {
    pub table: RawTable,
    pub gene_names: Vec<String>,
    pub organism_names: Vec<String>,
    pub specs: Vec<FeatureSpec>,
}

impl LoadedTable {
    pub fn population(&self) -> Result<Population, CliError> {
        build_population(&self.table, &self.specs).map_err(CliError::from)
    }
}

fn parse_cell(raw: &str) -> Result<Cell, String> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Ok(Cell::Missing);
    }
    if let Ok(value) = trimmed.parse::<f64>() {
        if !value.is_finite() {
            return Err(format!("numeric cell is not finite: '{trimmed}'"));
        }
        if value < 0.0 {
            return Err(format!("numeric cell is negative: '{trimmed}'"));
        }
        return Ok(Cell::Number(value));
    }
    let labels: Vec<String> = trimmed
        .split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect();
    if labels.is_empty() {
        Ok(Cell::Missing)
    } else {
        Ok(Cell::Labels(labels))
    }
}

/// Read a CSV file and match it against the configured columns.
pub fn load_table(csv_path: &Path, config: &RunConfigFile) -> Result<LoadedTable, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_path(csv_path)
        .map_err(|e| {
            CliError::validation(format!("cannot read data '{}': {e}", csv_path.display()))
        })?;

    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::validation(format!("malformed CSV header: {e}")))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();

    let mut issues = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for header in &headers {
        if !seen.insert(header.as_str()) {
            issues.push(Issue::at(
                "duplicate column name in CSV header",
                None,
                Some(header.clone()),
            ));
        }
    }

    let name_index = match &config.row_name_column {
        None => None,
        Some(name) => match headers.iter().position(|h| h == name) {
            Some(index) => Some(index),
            None => {
                issues.push(Issue::at(
                    "row name column not found in CSV header",
                    None,
                    Some(name.clone()),
                ));
                None
            }
        },
    };

    // every data column needs a config entry and vice versa
    let data_columns: Vec<(usize, &String)> = headers
        .iter()
        .enumerate()
        .filter(|(index, _)| Some(*index) != name_index)
        .collect();
    for (_, header) in &data_columns {
        if config.column(header).is_none() {
            issues.push(Issue::at(
                "CSV column has no fitness entry in the config",
                None,
                Some((*header).clone()),
            ));
        }
    }
    for column in &config.columns {
        if !data_columns.iter().any(|(_, h)| *h == &column.name) {
            issues.push(Issue::at(
                "configured column not found in the CSV",
                None,
                Some(column.name.clone()),
            ));
        }
    }
    if !issues.is_empty() {
        return Err(CliError::Validation(issues));
    }

    let mut organism_names = Vec::new();
    let mut rows: Vec<Vec<Cell>> = Vec::new();
    for (row_number, record) in reader.records().enumerate() {
        let row = row_number + 1;
        let record = match record {
            Ok(record) => record,
            Err(e) => {
                issues.push(Issue::at(
                    format!("malformed CSV record: {e}"),
                    Some(row),
                    None,
                ));
                continue;
            }
        };
        let mut cells = Vec::with_capacity(data_columns.len());
        for &(index, header) in &data_columns {
            match parse_cell(record.get(index).unwrap_or_default()) {
                Ok(cell) => cells.push(cell),
                Err(message) => {
                    issues.push(Issue::at(message, Some(row), Some(header.clone())));
                    cells.push(Cell::Missing);
                }
            }
        }
        organism_names.push(match name_index {
            Some(index) => record.get(index).unwrap_or_default().trim().to_string(),
            None => format!("row{row}"),
        });
        rows.push(cells);
    }
    if rows.is_empty() {
        issues.push(Issue::new("CSV contains no data rows"));
    }
    if !issues.is_empty() {
        return Err(CliError::Validation(issues));
    }

    let gene_names: Vec<String> = data_columns
        .iter()
        .map(|(_, header)| (*header).clone())
        .collect();
    let specs: Vec<FeatureSpec> = gene_names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let column = config.column(name).expect("cross-checked above");
            FeatureSpec::new(j, fitness_kind(column))
        })
        .collect();

    let table = RawTable::new(gene_names.clone(), rows).map_err(CliError::from)?;
    Ok(LoadedTable {
        table,
        gene_names,
        organism_names,
        specs,
    })
}
