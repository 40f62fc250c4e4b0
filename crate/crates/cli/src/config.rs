//! Run configuration files (YAML or JSON) and their translation into
//! engine settings.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use generank_core::{FitnessKind, GeneStrategy, MixMode, OrganismStrategy, SimConfig, StrategyMix};

use crate::error::{CliError, Issue};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfigFile {
    /// Input CSV; may be overridden by `--data`. Relative paths resolve
    /// against the config file's directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<PathBuf>,
    /// Column holding row names; excluded from the features.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_name_column: Option<String>,
    pub columns: Vec<ColumnConfig>,
    #[serde(default)]
    pub strategy: StrategyConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_gamma: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(default)]
    pub outputs: OutputsConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnConfig {
    pub name: String,
    pub fitness: FitnessName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitnessName {
    Boolean,
    Percentage,
    Inverse,
    Overlap,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyConfig {
    #[serde(default)]
    pub mode: ModeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gene_alphas: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub organism_alphas: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    #[default]
    Fixed,
    SelfConsistent,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<PathBuf>,
}

impl RunConfigFile {
    /// Parse a config file, choosing the format by extension (`.json` is
    /// JSON, everything else YAML).
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::validation(format!("cannot read config '{}': {e}", path.display()))
        })?;
        let is_json = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.eq_ignore_ascii_case("json"))
            .unwrap_or(false);
        let config: RunConfigFile = if is_json {
            serde_json::from_str(&text)
                .map_err(|e| CliError::validation(format!("invalid JSON config: {e}")))?
        } else {
            serde_yaml::from_str(&text)
                .map_err(|e| CliError::validation(format!("invalid YAML config: {e}")))?
        };
        config.check()?;
        Ok(config)
    }

    /// Structural checks that need no table.
    fn check(&self) -> Result<(), CliError> {
        let mut issues = Vec::new();
        if self.columns.is_empty() {
            issues.push(Issue::new("config must declare at least one column"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for column in &self.columns {
            if !seen.insert(column.name.as_str()) {
                issues.push(Issue::at(
                    "duplicate column entry in config",
                    None,
                    Some(column.name.clone()),
                ));
            }
            match column.fitness {
                FitnessName::Overlap => {
                    if column.labels.as_ref().is_none_or(|l| l.is_empty()) {
                        issues.push(Issue::at(
                            "overlap fitness requires a non-empty labels list",
                            None,
                            Some(column.name.clone()),
                        ));
                    }
                }
                _ => {
                    if column.labels.is_some() {
                        issues.push(Issue::at(
                            "labels only apply to the overlap fitness",
                            None,
                            Some(column.name.clone()),
                        ));
                    }
                }
            }
        }
        if let Some(name) = &self.row_name_column {
            if self.columns.iter().any(|c| &c.name == name) {
                issues.push(Issue::at(
                    "the row name column cannot also carry a fitness entry",
                    None,
                    Some(name.clone()),
                ));
            }
        }
        if let Some(alphas) = &self.strategy.gene_alphas {
            check_alphas(alphas, &["dominant", "altruistic"], "gene", &mut issues);
        }
        if let Some(alphas) = &self.strategy.organism_alphas {
            check_alphas(alphas, &["balanced", "selfish"], "organism", &mut issues);
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(CliError::Validation(issues))
        }
    }

    /// The fitness kind configured for a named column, if any.
    pub fn column(&self, name: &str) -> Option<&ColumnConfig> {
        self.columns.iter().find(|c| c.name == name)
    }

    /// Engine settings for this config; `iterations_override` comes from
    /// the command line.
    pub fn sim_config(&self, iterations_override: Option<usize>) -> Result<SimConfig, CliError> {
        let mix = self.strategy_mix()?;
        let mut sim = SimConfig::new(mix);
        if let Some(gamma) = &self.initial_gamma {
            sim = sim.with_initial_gamma(gamma.clone());
        }
        if let Some(epsilon) = self.epsilon {
            sim = sim.with_epsilon(epsilon);
        }
        if let Some(max_iterations) = self.max_iterations {
            sim = sim.with_max_iterations(max_iterations);
        }
        if let Some(iterations) = iterations_override {
            sim = sim.with_max_iterations(iterations);
        }
        Ok(sim)
    }

    fn strategy_mix(&self) -> Result<StrategyMix, CliError> {
        let (mode, default_gene, default_organism) = match self.strategy.mode {
            ModeName::Fixed => (MixMode::Fixed, (1.0, 0.0), (1.0, 0.0)),
            ModeName::SelfConsistent => (MixMode::SelfConsistent, (0.5, 0.5), (0.5, 0.5)),
        };
        let gene = pair_weights(
            self.strategy.gene_alphas.as_ref(),
            "dominant",
            "altruistic",
            default_gene,
        );
        let organism = pair_weights(
            self.strategy.organism_alphas.as_ref(),
            "balanced",
            "selfish",
            default_organism,
        );
        let gene_weights: BTreeMap<GeneStrategy, f64> = [
            (GeneStrategy::Dominant, gene.0),
            (GeneStrategy::Altruistic, gene.1),
        ]
        .into_iter()
        .collect();
        let organism_weights: BTreeMap<OrganismStrategy, f64> = [
            (OrganismStrategy::Balanced, organism.0),
            (OrganismStrategy::Selfish, organism.1),
        ]
        .into_iter()
        .collect();
        StrategyMix::new(mode, gene_weights, organism_weights).map_err(CliError::from)
    }
}

fn check_alphas(
    alphas: &BTreeMap<String, f64>,
    known: &[&str],
    side: &str,
    issues: &mut Vec<Issue>,
) {
    for key in alphas.keys() {
        if !known.contains(&key.as_str()) {
            issues.push(Issue::new(format!(
                "unknown {side} strategy '{key}' (expected one of {known:?})"
            )));
        }
    }
    let sum: f64 = alphas.values().sum();
    if alphas.values().any(|w| !w.is_finite() || *w < 0.0) {
        issues.push(Issue::new(format!(
            "{side} alphas must be finite and non-negative"
        )));
    } else if (sum - 1.0).abs() > 1e-12 {
        issues.push(Issue::new(format!(
            "{side} alphas must sum to 1, got {sum}"
        )));
    }
}

fn pair_weights(
    alphas: Option<&BTreeMap<String, f64>>,
    first: &str,
    second: &str,
    default: (f64, f64),
) -> (f64, f64) {
    match alphas {
        None => default,
        Some(map) => (
            map.get(first).copied().unwrap_or(0.0),
            map.get(second).copied().unwrap_or(0.0),
        ),
    }
}

/// The fitness kind for one configured column.
pub fn fitness_kind(column: &ColumnConfig) -> FitnessKind {
    match column.fitness {
        FitnessName::Boolean => FitnessKind::Boolean,
        FitnessName::Percentage => FitnessKind::Percentage,
        FitnessName::Inverse => FitnessKind::InversePercentage,
        FitnessName::Overlap => FitnessKind::Overlap {
            targets: column.labels.clone().unwrap_or_default(),
        },
    }
}

/// Resolve a config-referenced path against the config file's directory.
pub fn resolve(config_path: &Path, referenced: &Path) -> PathBuf {
    if referenced.is_absolute() {
        referenced.to_path_buf()
    } else {
        config_path
            .parent()
            .map(|dir| dir.join(referenced))
            .unwrap_or_else(|| referenced.to_path_buf())
    }
}
