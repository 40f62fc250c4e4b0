//! Command implementations behind the `generank` binary: ingest a CSV and
//! a run config, simulate, and emit trace/summary artifacts or static
//! diagnostics.

pub mod config;
pub mod error;
pub mod input;
pub mod report;
pub mod trace_io;

use std::path::{Path, PathBuf};

use generank_core::{simulate, summarize};

use crate::config::{resolve, RunConfigFile};
use crate::error::CliError;
use crate::input::load_table;

/// Arguments shared by every subcommand.
pub struct CommonArgs {
    pub data: Option<PathBuf>,
    pub config: PathBuf,
}

/// `run` outputs; command-line flags override the config's `outputs`.
pub struct RunArgs {
    pub common: CommonArgs,
    pub out_trace: Option<PathBuf>,
    pub out_summary: Option<PathBuf>,
    pub iterations: Option<usize>,
}

fn data_path(common: &CommonArgs, config: &RunConfigFile) -> Result<PathBuf, CliError> {
    match (&common.data, &config.data) {
        (Some(path), _) => Ok(path.clone()),
        (None, Some(path)) => Ok(resolve(&common.config, path)),
        (None, None) => Err(CliError::validation(
            "no data file: pass --data or set 'data' in the config",
        )),
    }
}

fn load(common: &CommonArgs) -> Result<(RunConfigFile, input::LoadedTable), CliError> {
    let config = RunConfigFile::load(&common.config)?;
    let data = data_path(common, &config)?;
    let loaded = load_table(&data, &config)?;
    Ok((config, loaded))
}

/// Execute a simulation and write the requested outputs.
pub fn run(args: &RunArgs) -> Result<(), CliError> {
    let (config, loaded) = load(&args.common)?;
    let pop = loaded.population()?;
    let sim_config = config.sim_config(args.iterations)?;
    let trace = simulate(&pop, &sim_config)?;

    let trace_path = args.out_trace.clone().or_else(|| {
        config
            .outputs
            .trace
            .as_ref()
            .map(|p| resolve(&args.common.config, p))
    });
    let summary_path = args.out_summary.clone().or_else(|| {
        config
            .outputs
            .summary
            .as_ref()
            .map(|p| resolve(&args.common.config, p))
    });

    if let Some(path) = &trace_path {
        let file = create_output(path)?;
        trace_io::write_trace(file, &trace, &loaded.gene_names, &loaded.organism_names)?;
    }

    let report = summarize(&trace, &pop, &loaded.gene_names, &loaded.organism_names)?;
    let summary = report::build_summary(&config, &trace, &report, &pop, trace_path.as_deref());
    let json =
        serde_json::to_string_pretty(&summary).map_err(|e| CliError::Runtime(e.to_string()))?;
    match &summary_path {
        Some(path) => {
            use std::io::Write as _;
            let mut file = create_output(path)?;
            writeln!(file, "{json}").map_err(|e| {
                CliError::Runtime(format!("cannot write '{}': {e}", path.display()))
            })?;
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn create_output(path: &Path) -> Result<std::fs::File, CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| {
                CliError::Runtime(format!("cannot create '{}': {e}", parent.display()))
            })?;
        }
    }
    std::fs::File::create(path)
        .map_err(|e| CliError::Runtime(format!("cannot write '{}': {e}", path.display())))
}

/// Static diagnostics without running the simulation.
pub fn analyze(common: &CommonArgs) -> Result<(), CliError> {
    let (config, loaded) = load(common)?;
    let text = report::analyze_report(&loaded, &config)?;
    print!("{text}");
    Ok(())
}

/// Schema and type checks only.
pub fn validate(common: &CommonArgs) -> Result<(), CliError> {
    let (config, loaded) = load(common)?;
    loaded.population()?;
    config.sim_config(None)?;
    if let Some(gamma) = &config.initial_gamma {
        if gamma.len() != loaded.gene_names.len() {
            return Err(CliError::validation(format!(
                "initial_gamma has {} entries for {} data columns",
                gamma.len(),
                loaded.gene_names.len()
            )));
        }
    }
    println!(
        "ok: {} organisms, {} genes",
        loaded.organism_names.len(),
        loaded.gene_names.len()
    );
    Ok(())
}

/// Shared helper for the binary: turn a result into an exit code,
/// printing the machine-readable error list on stderr.
pub fn exit_with(result: Result<(), CliError>) -> i32 {
    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("{}", err.to_json());
            err.exit_code()
        }
    }
}

/// Resolve a path for documentation/tests.
pub fn resolve_for(config: &Path, referenced: &Path) -> PathBuf {
    resolve(config, referenced)
}
