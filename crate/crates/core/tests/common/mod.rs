//! Shared fixtures and the straight-loop reference evaluator used by the
//! integration suites. The evaluator implements the update equations with
//! naive loops and no shared code with the library, so it can serve as an
//! independent check of one full engine iteration.
#![allow(dead_code, clippy::needless_range_loop)]

use generank_core::{build_population, Cell, FeatureSpec, FitnessKind, Population, RawTable};

pub fn approx(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn assert_close(what: &str, actual: f64, expected: f64, tol: f64) {
    assert!(
        approx(actual, expected, tol),
        "{what}: {actual} not within {tol} of {expected}"
    );
}

fn number_rows(rows: &[&[f64]]) -> Vec<Vec<Cell>> {
    rows.iter()
        .map(|row| row.iter().map(|&v| Cell::Number(v)).collect())
        .collect()
}

/// Three flights by price, transfer time and stop count; larger is worse
/// everywhere.
pub fn simple_table() -> (RawTable, Vec<FeatureSpec>) {
    let table = RawTable::new(
        vec!["price".into(), "time".into(), "stops".into()],
        number_rows(&[&[300.0, 10.0, 2.0], &[600.0, 5.0, 2.0], &[1500.0, 4.0, 1.0]]),
    )
    .unwrap();
    let specs = (0..3)
        .map(|j| FeatureSpec::new(j, FitnessKind::InversePercentage))
        .collect();
    (table, specs)
}

pub fn simple_population() -> Population {
    let (table, specs) = simple_table();
    build_population(&table, &specs).unwrap()
}

pub fn simple_gene_names() -> Vec<String> {
    vec!["price".into(), "time".into(), "stops".into()]
}

pub fn simple_organism_names() -> Vec<String> {
    vec!["A".into(), "B".into(), "C".into()]
}

/// Ten flights by price, time, stops, luggage allowance and rating; cost
/// columns are inverted, benefit columns are kept as shares of the maximum.
pub fn real_table() -> (RawTable, Vec<FeatureSpec>) {
    let table = RawTable::new(
        vec![
            "price".into(),
            "time".into(),
            "stops".into(),
            "luggages".into(),
            "rating".into(),
        ],
        number_rows(&[
            &[300.0, 10.0, 2.0, 0.0, 2.5],
            &[600.0, 5.0, 2.0, 1.0, 3.0],
            &[1500.0, 4.0, 1.0, 2.0, 4.0],
            &[400.0, 8.0, 2.0, 0.0, 3.5],
            &[500.0, 8.0, 2.0, 1.0, 3.0],
            &[700.0, 5.0, 2.0, 1.0, 4.5],
            &[900.0, 6.0, 1.0, 1.0, 4.0],
            &[1100.0, 6.0, 1.0, 2.0, 3.5],
            &[1300.0, 5.0, 2.0, 2.0, 5.0],
            &[1700.0, 4.0, 1.0, 2.0, 5.0],
        ]),
    )
    .unwrap();
    let specs = vec![
        FeatureSpec::new(0, FitnessKind::InversePercentage),
        FeatureSpec::new(1, FitnessKind::InversePercentage),
        FeatureSpec::new(2, FitnessKind::InversePercentage),
        FeatureSpec::new(3, FitnessKind::Percentage),
        FeatureSpec::new(4, FitnessKind::Percentage),
    ];
    (table, specs)
}

pub fn real_population() -> Population {
    let (table, specs) = real_table();
    build_population(&table, &specs).unwrap()
}

pub fn real_gene_names() -> Vec<String> {
    vec![
        "price".into(),
        "time".into(),
        "stops".into(),
        "luggages".into(),
        "rating".into(),
    ]
}

pub fn real_organism_names() -> Vec<String> {
    ["A", "B", "C", "D", "E", "F", "G", "H", "I", "J"]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

/// Everything one reference iteration produces.
pub struct ReferenceStep {
    pub fitness: Vec<f64>,
    pub rho: f64,
    pub dominant: Vec<Vec<f64>>,
    pub altruistic: Vec<Vec<f64>>,
    pub balanced: Vec<Vec<f64>>,
    pub selfish: Vec<Vec<f64>>,
    /// dominant, altruistic, balanced, selfish; gene side as plain means.
    pub effects: [f64; 4],
    pub delta: Vec<f64>,
    pub gamma_next: Vec<f64>,
    pub fitness_next: Vec<f64>,
    pub alpha_gene_next: (f64, f64),
    pub alpha_organism_next: (f64, f64),
}

/// One naive iteration of the update equations, written as directly as
/// possible: explicit loops, no masking shortcuts beyond the definition,
/// clamping into (-1, 1].
pub fn reference_step(
    phi: &[Vec<f64>],
    present: &[Vec<bool>],
    gamma: &[f64],
    alpha_gene: (f64, f64),
    alpha_organism: (f64, f64),
    evolve_alphas: bool,
) -> ReferenceStep {
    let n = phi.len();
    let m = phi[0].len();

    let fitness: Vec<f64> = (0..n)
        .map(|i| (0..m).map(|j| gamma[j] * phi[i][j]).sum())
        .collect();

    let max = fitness.iter().cloned().fold(f64::MIN, f64::max);
    let min = fitness.iter().cloned().fold(f64::MAX, f64::min);
    let mut rho = max - min;
    if rho == 0.0 {
        rho = max;
    }
    if rho == 0.0 {
        rho = 1.0;
    }

    let mut gene_kinship = vec![vec![0.0; m]; m];
    for j in 0..m {
        for l in 0..m {
            let mut sq = 0.0;
            for i in 0..n {
                sq += (phi[i][j] - phi[i][l]) * (phi[i][j] - phi[i][l]);
            }
            gene_kinship[j][l] = 1.0 - sq.sqrt() / n as f64;
        }
    }
    let mut organism_kinship = vec![vec![0.0; n]; n];
    for i in 0..n {
        for t in 0..n {
            let mut sq = 0.0;
            for j in 0..m {
                sq += (phi[i][j] - phi[t][j]) * (phi[i][j] - phi[t][j]);
            }
            organism_kinship[i][t] = 1.0 - sq.sqrt() / m as f64;
        }
    }

    let mut dominant = vec![vec![0.0; m]; n];
    for i in 0..n {
        for j in 0..m {
            if present[i][j] {
                dominant[i][j] = 4.0 * gamma[j] * gamma[j] / n as f64 * (phi[i][j] - 0.5);
            }
        }
    }

    let mut balanced = vec![vec![0.0; m]; n];
    for i in 0..n {
        if fitness[i] == 0.0 {
            continue;
        }
        for j in 0..m {
            if present[i][j] {
                let share = gamma[j] * phi[i][j] / fitness[i];
                balanced[i][j] = -(2.0 * fitness[i] / n as f64) * (share - 1.0 / m as f64);
            }
        }
    }

    let mut altruistic = vec![vec![0.0; m]; n];
    for i in 0..n {
        for j in 0..m {
            if present[i][j] && gamma[j] > 0.0 {
                let mut exchange = 0.0;
                for l in 0..m {
                    if l != j {
                        exchange += gamma[l] * gene_kinship[j][l] * (phi[i][l] - phi[i][j]);
                    }
                }
                exchange *= 4.0 / m as f64;
                altruistic[i][j] = dominant[i][j] * exchange / gamma[j];
            }
        }
    }

    let mut selfish = vec![vec![0.0; m]; n];
    for i in 0..n {
        if fitness[i] == 0.0 {
            continue;
        }
        let mut advantage = 0.0;
        for t in 0..n {
            if t != i {
                advantage += organism_kinship[i][t] * (fitness[i] - fitness[t]) / rho;
            }
        }
        advantage /= n as f64;
        for j in 0..m {
            selfish[i][j] = balanced[i][j] * advantage / fitness[i];
        }
    }

    let gene_mean = |matrix: &Vec<Vec<f64>>| -> f64 {
        matrix.iter().flatten().map(|v| v.abs()).sum::<f64>() / (n * m) as f64
    };
    let organism_mean = |matrix: &Vec<Vec<f64>>| -> f64 {
        (0..n)
            .map(|i| (0..m).map(|j| matrix[i][j].abs() * gamma[j]).sum::<f64>())
            .sum::<f64>()
            / n as f64
    };
    let effects = [
        gene_mean(&dominant),
        gene_mean(&altruistic),
        organism_mean(&balanced),
        organism_mean(&selfish),
    ];

    let mut delta = vec![0.0; m];
    for j in 0..m {
        for i in 0..n {
            delta[j] += alpha_gene.0 * dominant[i][j]
                + alpha_gene.1 * altruistic[i][j]
                + alpha_organism.0 * balanced[i][j]
                + alpha_organism.1 * selfish[i][j];
        }
        delta[j] = delta[j].clamp(-1.0 + 1e-6, 1.0);
    }

    let scaled: Vec<f64> = (0..m).map(|j| gamma[j] * (1.0 + delta[j])).collect();
    let total: f64 = scaled.iter().sum();
    let gamma_next: Vec<f64> = scaled.iter().map(|v| v / total).collect();
    let fitness_next: Vec<f64> = (0..n)
        .map(|i| (0..m).map(|j| gamma_next[j] * phi[i][j]).sum())
        .collect();

    let (alpha_gene_next, alpha_organism_next) = if evolve_alphas {
        let g = (
            alpha_gene.0 * (1.0 + effects[0]),
            alpha_gene.1 * (1.0 + effects[1]),
        );
        let w = (
            alpha_organism.0 * (1.0 + effects[2]),
            alpha_organism.1 * (1.0 + effects[3]),
        );
        (
            (g.0 / (g.0 + g.1), g.1 / (g.0 + g.1)),
            (w.0 / (w.0 + w.1), w.1 / (w.0 + w.1)),
        )
    } else {
        (alpha_gene, alpha_organism)
    };

    ReferenceStep {
        fitness,
        rho,
        dominant,
        altruistic,
        balanced,
        selfish,
        effects,
        delta,
        gamma_next,
        fitness_next,
        alpha_gene_next,
        alpha_organism_next,
    }
}
