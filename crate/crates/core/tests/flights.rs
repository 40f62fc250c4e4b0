//! Worked-example checks on the two flight-selection tables: frozen
//! normalization, first-iteration kernels, replicator steps and report
//! content. Loose tolerances follow the precision of the rounded
//! reference values; tight ones pin values frozen from the straight-loop
//! evaluator in `common`.

#![allow(clippy::needless_range_loop, clippy::excessive_precision)]

mod common;

use common::{assert_close, real_population, simple_population};
use generank_core::{
    build_population, gs_altruistic, gs_dominant, initial_fitness_range, kinship, organism_fitness,
    os_balanced, os_selfish, rank, simulate, strategy_effect, summarize, Cell, FeatureSpec,
    FitnessKind, GeneEffectScale, KinshipAxis, RawTable, SimConfig, StrategyMix,
};

#[test]
fn normalization_matches_reference_tables() {
    let pop = simple_population();
    let expected = [[0.8, 0.0, 0.0], [0.6, 0.5, 0.0], [0.0, 0.6, 0.5]];
    for i in 0..3 {
        for j in 0..3 {
            assert_eq!(pop.value(i, j), expected[i][j], "cell ({i},{j})");
            assert!(pop.is_present(i, j));
        }
    }

    let pop = real_population();
    assert_eq!(pop.organism(9), &[0.0, 0.6, 0.5, 1.0, 1.0]);
}

#[test]
fn initial_fitness_and_range() {
    let pop = simple_population();
    let gamma = vec![1.0 / 3.0; 3];
    let fitness = organism_fitness(&pop, &gamma).unwrap();
    assert_close("r0[A]", fitness[0], 0.266, 0.001);
    assert_close("r0[B]", fitness[1], 0.366, 0.001);
    assert_close("r0[C]", fitness[2], 0.366, 0.001);
    assert_close("rho", initial_fitness_range(&fitness).rho, 0.1, 1e-12);

    let pop = real_population();
    let fitness = organism_fitness(&pop, &[0.2; 5]).unwrap();
    let worst = fitness
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    assert_eq!(worst, 0, "flight A starts weakest");
}

#[test]
fn slightly_shifted_weights_separate_the_leaders() {
    let pop = simple_population();
    let fitness = organism_fitness(&pop, &[0.32, 0.33, 0.35]).unwrap();
    assert_close("r[A]", fitness[0], 0.26, 0.005);
    assert_close("r[B]", fitness[1], 0.36, 0.005);
    assert_close("r[C]", fitness[2], 0.37, 0.005);
    let ranking = rank(&fitness, &common::simple_organism_names(), 1).unwrap();
    assert_eq!(ranking.entries[0].name, "C");
    assert_eq!(ranking.entries[1].name, "B");
    assert_eq!(ranking.entries[2].name, "A");
}

#[test]
fn first_iteration_kernels_match_reference_evaluator() {
    let pop = simple_population();
    let gamma = vec![1.0 / 3.0; 3];
    let phi: Vec<Vec<f64>> = (0..3).map(|i| pop.organism(i).to_vec()).collect();
    let present = vec![vec![true; 3]; 3];
    let step = common::reference_step(&phi, &present, &gamma, (1.0, 0.0), (1.0, 0.0), false);

    let fitness = organism_fitness(&pop, &gamma).unwrap();
    let gene_kinship = kinship(&pop, KinshipAxis::Gene);
    let organism_kinship = kinship(&pop, KinshipAxis::Organism);
    let scale = initial_fitness_range(&fitness);

    let dominant = gs_dominant(&pop, &gamma);
    let balanced = os_balanced(&pop, &gamma, &fitness);
    let altruistic = gs_altruistic(&pop, &gamma, &gene_kinship);
    let selfish = os_selfish(&pop, &fitness, &organism_kinship, &scale, &balanced);
    for i in 0..3 {
        for j in 0..3 {
            assert_close("dominant", dominant.value(i, j), step.dominant[i][j], 1e-14);
            assert_close("balanced", balanced.value(i, j), step.balanced[i][j], 1e-14);
            assert_close(
                "altruistic",
                altruistic.value(i, j),
                step.altruistic[i][j],
                1e-14,
            );
            assert_close("selfish", selfish.value(i, j), step.selfish[i][j], 1e-14);
        }
    }

    // column totals of the two symmetric-testing kernels, frozen exactly
    let dom_sums = dominant.column_sums();
    assert_close("dom sum price", dom_sums[0], -0.014814814814814815, 1e-9);
    assert_close("dom sum time", dom_sums[1], -0.059259259259259262, 1e-9);
    assert_close("dom sum stops", dom_sums[2], -0.14814814814814814, 1e-9);
    let bal_sums = balanced.column_sums();
    assert_close("bal sum price", bal_sums[0], -0.09, 0.005);
    assert_close("bal sum time", bal_sums[1], -0.02, 0.005);
    assert_close("bal sum stops", bal_sums[2], 0.11, 0.005);
}

#[test]
fn first_replicator_step_frozen_values() {
    let pop = simple_population();
    let config = SimConfig::new(StrategyMix::dominant_balanced()).with_max_iterations(1);
    let trace = simulate(&pop, &config).unwrap();

    let accumulated = &trace.records[0].accumulated;
    assert_close("delta price", accumulated[0], -0.10, 0.005);
    assert_close("delta time", accumulated[1], -0.08, 0.005);
    assert_close("delta stops", accumulated[2], -0.04, 0.005);

    let gamma = &trace.records[1].gamma;
    assert_close("gamma1 price", gamma[0], 0.32266666666666666, 1e-12);
    assert_close("gamma1 time", gamma[1], 0.33066666666666666, 1e-12);
    assert_close("gamma1 stops", gamma[2], 0.34666666666666668, 1e-12);
    assert_close("gamma1 price (coarse)", gamma[0], 0.32, 0.005);
    assert_close("gamma1 time (coarse)", gamma[1], 0.33, 0.005);
    assert_close("gamma1 stops (coarse)", gamma[2], 0.35, 0.005);

    let fitness = &trace.records[1].fitness;
    assert_close("r1[A]", fitness[0], 0.25813333333333333, 1e-12);
    assert_close("r1[B]", fitness[1], 0.35893333333333333, 1e-12);
    assert_close("r1[C]", fitness[2], 0.37173333333333336, 1e-12);
}

#[test]
fn gene_kinship_reference_matrix() {
    let pop = simple_population();
    let gene_kinship = kinship(&pop, KinshipAxis::Gene);
    assert_close("k12", gene_kinship.value(0, 1), 0.66500414596263702, 1e-12);
    assert_close("k13", gene_kinship.value(0, 2), 0.62732200375003511, 1e-12);
    assert_close("k23", gene_kinship.value(1, 2), 0.83003268288024046, 1e-12);
}

#[test]
fn real_table_selfish_first_iteration() {
    let pop = real_population();
    let gamma = vec![0.2; 5];
    let fitness = organism_fitness(&pop, &gamma).unwrap();
    let organism_kinship = kinship(&pop, KinshipAxis::Organism);
    let scale = initial_fitness_range(&fitness);
    let balanced = os_balanced(&pop, &gamma, &fitness);
    let selfish = os_selfish(&pop, &fitness, &organism_kinship, &scale, &balanced);

    // the weakest flight shifts the largest chunk of fitness
    let expected_row = [0.040, -0.019, -0.019, -0.019, 0.017];
    for (j, &expected) in expected_row.iter().enumerate() {
        assert_close("selfish row A", selfish.value(0, j), expected, 0.002);
    }
    let expected_totals = [0.091, -0.023, -0.030, -0.055, 0.016];
    let totals = selfish.column_sums();
    for (j, &expected) in expected_totals.iter().enumerate() {
        assert_close("selfish totals", totals[j], expected, 0.003);
    }

    // matches the straight-loop evaluator cell for cell
    let phi: Vec<Vec<f64>> = (0..10).map(|i| pop.organism(i).to_vec()).collect();
    let present = vec![vec![true; 5]; 10];
    let step = common::reference_step(&phi, &present, &gamma, (1.0, 0.0), (0.0, 1.0), false);
    for i in 0..10 {
        for j in 0..5 {
            assert_close("selfish", selfish.value(i, j), step.selfish[i][j], 1e-14);
        }
    }
}

#[test]
fn strategy_effect_quartet_and_scales() {
    let pop = simple_population();
    let gamma = vec![1.0 / 3.0; 3];
    let fitness = organism_fitness(&pop, &gamma).unwrap();
    let gene_kinship = kinship(&pop, KinshipAxis::Gene);
    let organism_kinship = kinship(&pop, KinshipAxis::Organism);
    let scale = initial_fitness_range(&fitness);

    let dominant = gs_dominant(&pop, &gamma);
    let balanced = os_balanced(&pop, &gamma, &fitness);
    let altruistic = gs_altruistic(&pop, &gamma, &gene_kinship);
    let selfish = os_selfish(&pop, &fitness, &organism_kinship, &scale, &balanced);

    let dom = strategy_effect(&dominant, &gamma, GeneEffectScale::Mean);
    let alt = strategy_effect(&altruistic, &gamma, GeneEffectScale::Mean);
    let bal = strategy_effect(&balanced, &gamma, GeneEffectScale::Mean);
    let sel = strategy_effect(&selfish, &gamma, GeneEffectScale::Mean);
    assert_close("dominant effect", dom, 0.041, 0.002);
    assert_close("altruistic effect", alt, 0.037, 0.002);
    assert_close("balanced effect", bal, 0.062, 0.002);
    assert_close("selfish effect", sel, 0.071, 0.002);

    let per_eq = strategy_effect(&dominant, &gamma, GeneEffectScale::PerEquation);
    assert_close("per-equation scale", per_eq, 3.0 * dom, 1e-15);
    // organism-side effects ignore the gene scale setting
    let bal_scaled = strategy_effect(&balanced, &gamma, GeneEffectScale::PerEquation);
    assert_eq!(bal, bal_scaled);
}

#[test]
fn real_table_row_a_sign_pattern() {
    let pop = real_population();
    let gamma = vec![0.2; 5];
    let fitness = organism_fitness(&pop, &gamma).unwrap();
    let gene_kinship = kinship(&pop, KinshipAxis::Gene);
    let organism_kinship = kinship(&pop, KinshipAxis::Organism);
    let scale = initial_fitness_range(&fitness);
    let diag = generank_core::sign_scenarios(
        &pop,
        &gamma,
        &fitness,
        &gene_kinship,
        &organism_kinship,
        &scale,
    );

    use generank_core::Sign::*;
    let expected_first = [Negative, Positive, Positive, Positive, Negative];
    for (j, &expected) in expected_first.iter().enumerate() {
        let pair = diag.organism_sign(0, j);
        assert_eq!(pair.first.sign, expected, "first factor, gene {j}");
        assert_eq!(pair.second.sign, Negative, "advantage factor, gene {j}");
    }
}

#[test]
fn summaries_name_top_and_bottom_genes() {
    let pop = simple_population();
    let gene_names = common::simple_gene_names();
    let organism_names = common::simple_organism_names();

    let config = SimConfig::new(StrategyMix::altruistic_selfish()).with_max_iterations(500);
    let trace = simulate(&pop, &config).unwrap();
    assert!(trace.converged());
    let report = summarize(&trace, &pop, &gene_names, &organism_names).unwrap();
    assert_eq!(report.top_gene, "price");
    assert_close(
        "price share at equilibrium",
        report.genes[0].fitness,
        0.39,
        0.02,
    );

    let config = SimConfig::new(StrategyMix::dominant_balanced()).with_max_iterations(30);
    let trace = simulate(&pop, &config).unwrap();
    let report = summarize(&trace, &pop, &gene_names, &organism_names).unwrap();
    assert_eq!(report.bottom_gene, "price");
    assert_eq!(report.iterations, 30);
    // velocity is the last recorded step
    let last = trace.final_record();
    let prev = &trace.records[trace.records.len() - 2];
    for j in 0..3 {
        assert_eq!(report.gamma_velocity[j], last.gamma[j] - prev.gamma[j]);
    }
}

#[test]
fn mixed_cell_kinds_are_rejected_with_coordinates() {
    let table = RawTable::new(
        vec!["price".into(), "tags".into()],
        vec![
            vec![Cell::Number(10.0), Cell::Labels(vec!["wifi".into()])],
            vec![Cell::Number(20.0), Cell::Number(3.0)],
        ],
    )
    .unwrap();
    let specs = vec![
        FeatureSpec::new(0, FitnessKind::InversePercentage),
        FeatureSpec::new(
            1,
            FitnessKind::Overlap {
                targets: vec!["wifi".into()],
            },
        ),
    ];
    let err = build_population(&table, &specs).unwrap_err();
    match err {
        generank_core::Error::Validation(v) => {
            assert_eq!(v.column.as_deref(), Some("tags"));
            assert_eq!(v.row, Some(2));
        }
        other => panic!("unexpected error: {other:?}"),
    }
}
