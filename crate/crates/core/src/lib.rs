//! Deterministic evolutionary-game engine for tabular multi-objective
//! decision problems.
//!
//! A table of candidate solutions is translated into a population of
//! organisms (rows) carrying gene variants (cells of data features). Four
//! evolutionary strategies produce per-cell resource changes, replicator
//! updates turn those into dynamic feature-relevance weights, and the
//! weighted organism fitness ranks the solutions. The strategy mixture can
//! be fixed or can itself evolve self-consistently.
//!
//! The crate is organized along the pipeline:
//!
//! * [`model`] — raw tables, variant-fitness normalization, the immutable
//!   population and its static derived quantities
//! * [`strategies`] — the four strategy kernels, mixing, sign diagnostics
//! * [`engine`] — the iterative simulation and its trace
//! * [`analysis`] — rankings and equilibrium reports
//!
//! ```
//! use generank_core::{
//!     build_population, simulate, Cell, FeatureSpec, FitnessKind, RawTable, SimConfig,
//!     StrategyMix,
//! };
//!
//! let table = RawTable::new(
//!     vec!["price".into(), "stops".into()],
//!     vec![
//!         vec![Cell::Number(300.0), Cell::Number(2.0)],
//!         vec![Cell::Number(900.0), Cell::Number(0.0)],
//!     ],
//! )?;
//! let specs = vec![
//!     FeatureSpec::new(0, FitnessKind::InversePercentage),
//!     FeatureSpec::new(1, FitnessKind::InversePercentage),
//! ];
//! let population = build_population(&table, &specs)?;
//! let trace = simulate(&population, &SimConfig::new(StrategyMix::dominant_balanced()))?;
//! assert!(trace.final_record().gamma.iter().sum::<f64>() > 0.99);
//! # Ok::<(), generank_core::Error>(())
//! ```

pub mod analysis;
pub mod engine;
pub mod error;
pub mod model;
pub mod strategies;

pub use analysis::{rank, summarize, EseReport, GeneSummary, RankedOrganism, Ranking};
pub use engine::{
    accumulate, alpha_replicator_step, replicator_step, simulate, simulate_self_consistent,
    strategy_effect, AccumulatedDelta, ClampEvent, ClampPolicy, GeneEffectScale, GeneFitness,
    SimConfig, SimRecord, StrategyEffects, TerminalStatus, Trace,
};
pub use error::{Error, Result, ValidationError};
pub use model::{
    build_population, initial_fitness_range, kinship, organism_fitness, variant_fitness, Cell,
    FeatureSpec, FitnessKind, KinshipAxis, KinshipMatrix, Population, RawTable, ScaleConstants,
};
pub use strategies::{
    gs_altruistic, gs_dominant, mix, os_balanced, os_selfish, sign_scenarios, DeltaMatrix,
    GeneStrategy, MixMode, OrganismStrategy, Sign, SignMagnitude, SignMark, SignPair,
    StrategyDiagnostics, StrategyKind, StrategyMix,
};
