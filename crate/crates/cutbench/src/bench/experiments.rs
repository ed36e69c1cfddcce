//! Experiment drivers: the GHZ reconstruction-accuracy sweep and the QAOA
//! end-to-end comparison.
//!
//! Each driver expands its configuration into independent runs, executes
//! them in parallel with per-run seeds derived from the master seed, and
//! returns one [`RunRecord`] per run plus aggregate records (marked with
//! `rep = -1`) per method-and-budget cell. Wall times ride along as a
//! metric but everything else is a pure function of the master seed.

use std::time::Instant;

use rayon::prelude::*;

use crate::circuit::{ghz_benchmark_circuit, ghz_cut_circuit};
use crate::qaoa::{run_qaoa, Graph, QaoaMethod, QaoaRunConfig, Rank, SpsaConfig};
use crate::rng::mix;
use crate::sim::{exact_distribution, NoiseModel};
use crate::wirecut::{
    clip_and_normalize, execute_pauli_configs_sampled, fragment, pauli_config_count,
    reconstruct_pauli, run_randomized_cut, CutVariant,
};

use super::{allocate_shots, hellinger, BenchError};

/// Width of the GHZ benchmark circuit.
pub const GHZ_QUBITS: usize = 5;

// Seed-stream namespaces. Circuit seeds depend only on the repetition, so
// every method and budget reconstructs the same per-rep circuit; execution
// seeds additionally fold in method and budget.
const NS_CIRCUIT: u64 = 0x10;
const NS_EXEC: u64 = 0x11;
const NS_QAOA_RUN: u64 = 0x12;

/// Cutting strategy compared by the GHZ experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhzMethod {
    /// Deterministic basis-and-preparation enumeration.
    Pauli,
    /// Randomized Clifford-or-reinitialize channels.
    Clifford,
    /// The biased random-rotation baseline.
    Rotation,
}

impl GhzMethod {
    pub const ALL: [GhzMethod; 3] = [GhzMethod::Pauli, GhzMethod::Clifford, GhzMethod::Rotation];

    pub fn name(&self) -> &'static str {
        match self {
            GhzMethod::Pauli => "pauli",
            GhzMethod::Clifford => "clifford",
            GhzMethod::Rotation => "rotation",
        }
    }
}

/// GHZ experiment shape: which budgets, how many repetitions, what noise.
#[derive(Debug, Clone)]
pub struct GhzConfig {
    pub master_seed: u64,
    /// Total shot budget per run; the Pauli method splits it over its
    /// subcircuit configurations, the randomized methods spend it one
    /// stitched sample per shot.
    pub budgets: Vec<u64>,
    pub reps: usize,
    pub noise: Option<NoiseModel>,
}

impl GhzConfig {
    pub fn new(master_seed: u64) -> GhzConfig {
        GhzConfig {
            master_seed,
            budgets: vec![1000, 10_000, 100_000],
            reps: 60,
            noise: None,
        }
    }
}

/// One experiment run (or aggregate) in schema order: the fixed columns
/// plus a list of named metric values that each become a CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub experiment: String,
    pub method: String,
    /// Graph label, `-` when the experiment has no graph.
    pub graph: String,
    pub budget: u64,
    /// Noise label, `none` for ideal runs.
    pub noise: String,
    /// Repetition index; `-1` marks an aggregate over repetitions.
    pub rep: i64,
    /// Seed that reproduces the run (the master seed on aggregates).
    pub seed: u64,
    pub metrics: Vec<(String, f64)>,
}

impl RunRecord {
    /// Value of a named metric, if present.
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, v)| v)
    }
}

fn noise_label(noise: &Option<NoiseModel>) -> String {
    noise
        .as_ref()
        .map_or_else(|| "none".to_string(), |nm| nm.label.clone())
}

/// Mean and standard error of the mean (zero for a single value).
fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs every GHZ method at every budget for the configured repetitions.
///
/// Each repetition draws a fresh dressed GHZ circuit (shared by all methods
/// and budgets so comparisons are paired), cuts it on the middle wire,
/// reconstructs from the method's runs, and scores the clipped result
/// against the exact uncut distribution by Hellinger distance. Per-run
/// records carry `hellinger`, the raw signed `quasi_mass`, and
/// `wall_time_s`; aggregates carry `hellinger_mean` and `hellinger_stderr`.
pub fn run_ghz_experiment(config: &GhzConfig) -> Result<Vec<RunRecord>, BenchError> {
    if config.budgets.is_empty() {
        return Err(BenchError::NoBudgets);
    }
    if config.reps == 0 {
        return Err(BenchError::NoReps);
    }
    if let Some(nm) = &config.noise {
        nm.validate().map_err(crate::sim::SimError::from)?;
    }
    let noise = noise_label(&config.noise);

    let mut tasks = Vec::new();
    for (m, method) in GhzMethod::ALL.iter().enumerate() {
        for &budget in &config.budgets {
            for rep in 0..config.reps {
                tasks.push((m, *method, budget, rep));
            }
        }
    }

    let mut records = tasks
        .par_iter()
        .map(|&(m, method, budget, rep)| {
            let circuit_seed = mix(config.master_seed, &[NS_CIRCUIT, rep as u64]);
            let exec_seed = mix(
                config.master_seed,
                &[NS_EXEC, m as u64, budget, rep as u64],
            );
            let uncut = ghz_benchmark_circuit(GHZ_QUBITS, circuit_seed)?;
            let reference = exact_distribution(&uncut)?;
            let cut = ghz_cut_circuit(GHZ_QUBITS, circuit_seed)?;
            let frags = fragment(&cut, None)?;

            let start = Instant::now();
            let quasi = match method {
                GhzMethod::Pauli => {
                    let plan = allocate_shots(budget, pauli_config_count(&frags))?;
                    let results = execute_pauli_configs_sampled(
                        &frags,
                        &plan,
                        exec_seed,
                        config.noise.as_ref(),
                    )?;
                    reconstruct_pauli(&frags, &results)?
                }
                GhzMethod::Clifford => run_randomized_cut(
                    &frags,
                    budget,
                    exec_seed,
                    CutVariant::Clifford,
                    config.noise.as_ref(),
                )?,
                GhzMethod::Rotation => run_randomized_cut(
                    &frags,
                    budget,
                    exec_seed,
                    CutVariant::Rotation,
                    config.noise.as_ref(),
                )?,
            };
            let wall = start.elapsed().as_secs_f64();
            let distance = hellinger(&clip_and_normalize(&quasi)?, &reference)?;

            Ok(RunRecord {
                experiment: "ghz".to_string(),
                method: method.name().to_string(),
                graph: "-".to_string(),
                budget,
                noise: noise.clone(),
                rep: rep as i64,
                seed: exec_seed,
                metrics: vec![
                    ("hellinger".to_string(), distance),
                    ("quasi_mass".to_string(), quasi.mass()),
                    ("wall_time_s".to_string(), wall),
                ],
            })
        })
        .collect::<Result<Vec<RunRecord>, BenchError>>()?;

    for method in GhzMethod::ALL {
        for &budget in &config.budgets {
            let distances: Vec<f64> = records
                .iter()
                .filter(|r| r.method == method.name() && r.budget == budget)
                .filter_map(|r| r.metric("hellinger"))
                .collect();
            let (mean, stderr) = mean_and_stderr(&distances);
            records.push(RunRecord {
                experiment: "ghz".to_string(),
                method: method.name().to_string(),
                graph: "-".to_string(),
                budget,
                noise: noise.clone(),
                rep: -1,
                seed: config.master_seed,
                metrics: vec![
                    ("hellinger_mean".to_string(), mean),
                    ("hellinger_stderr".to_string(), stderr),
                ],
            });
        }
    }
    Ok(records)
}

/// QAOA experiment shape: one graph, a method list, budgets, repetitions.
#[derive(Debug, Clone)]
pub struct QaoaExperimentConfig {
    pub master_seed: u64,
    pub graph: Graph,
    /// Label written to the CSV graph column.
    pub graph_label: String,
    pub budgets: Vec<u64>,
    pub methods: Vec<QaoaMethod>,
    /// Repetitions for the uncut method.
    pub reps_uncut: usize,
    /// Repetitions for the cut methods, typically fewer because each
    /// optimization loop is costlier.
    pub reps_cut: usize,
    pub noise: Option<NoiseModel>,
    pub device_limit: usize,
    pub p: usize,
    pub max_iter: usize,
}

impl QaoaExperimentConfig {
    pub fn new(master_seed: u64, graph: Graph, graph_label: impl Into<String>) -> Self {
        QaoaExperimentConfig {
            master_seed,
            graph,
            graph_label: graph_label.into(),
            budgets: vec![2000, 3000, 4000],
            methods: vec![QaoaMethod::Uncut, QaoaMethod::CliffordCut],
            reps_uncut: 60,
            reps_cut: 60,
            noise: None,
            device_limit: 5,
            p: 1,
            max_iter: 60,
        }
    }

    fn reps_for(&self, method: QaoaMethod) -> usize {
        if method == QaoaMethod::Uncut {
            self.reps_uncut
        } else {
            self.reps_cut
        }
    }
}

fn rank_value(rank: Rank) -> f64 {
    match rank {
        Rank::Best => 1.0,
        Rank::Second => 2.0,
        Rank::Third => 3.0,
        Rank::Wrong => 4.0,
    }
}

/// Runs the full variational loop for every configured method, budget, and
/// repetition, and aggregates answer-rank fractions per cell.
///
/// Per-run records carry `rank` (1 best, 2 second, 3 third, 4 wrong), the
/// final `expected_cost`, `quasi_mass` for cut methods, and `wall_time_s`.
/// Aggregates carry the four rank fractions (summing to one) and
/// `expected_cost_mean`.
pub fn run_qaoa_experiment(
    config: &QaoaExperimentConfig,
) -> Result<Vec<RunRecord>, BenchError> {
    if config.budgets.is_empty() {
        return Err(BenchError::NoBudgets);
    }
    if config.methods.is_empty() {
        return Err(BenchError::NoMethods);
    }
    if config.methods.iter().any(|&m| config.reps_for(m) == 0) {
        return Err(BenchError::NoReps);
    }
    if let Some(nm) = &config.noise {
        nm.validate().map_err(crate::sim::SimError::from)?;
    }
    let noise = noise_label(&config.noise);

    let mut tasks = Vec::new();
    for (m, &method) in config.methods.iter().enumerate() {
        for &budget in &config.budgets {
            for rep in 0..config.reps_for(method) {
                tasks.push((m, method, budget, rep));
            }
        }
    }

    let mut records = tasks
        .par_iter()
        .map(|&(m, method, budget, rep)| {
            let run_seed = mix(
                config.master_seed,
                &[NS_QAOA_RUN, m as u64, budget, rep as u64],
            );
            let run_config = QaoaRunConfig {
                method,
                shots: budget,
                noise: config.noise.clone(),
                spsa: SpsaConfig {
                    max_iter: config.max_iter,
                    ..SpsaConfig::default()
                },
                p: config.p,
                seed: run_seed,
                device_limit: Some(config.device_limit),
                theta0: None,
            };
            let start = Instant::now();
            let outcome = run_qaoa(&config.graph, &run_config)?;
            let wall = start.elapsed().as_secs_f64();

            let mut metrics = vec![
                ("rank".to_string(), rank_value(outcome.rank)),
                ("expected_cost".to_string(), outcome.expected),
            ];
            if let Some(mass) = outcome.quasi_mass {
                metrics.push(("quasi_mass".to_string(), mass));
            }
            metrics.push(("wall_time_s".to_string(), wall));

            Ok(RunRecord {
                experiment: "qaoa".to_string(),
                method: method.name().to_string(),
                graph: config.graph_label.clone(),
                budget,
                noise: noise.clone(),
                rep: rep as i64,
                seed: run_seed,
                metrics,
            })
        })
        .collect::<Result<Vec<RunRecord>, BenchError>>()?;

    for &method in &config.methods {
        for &budget in &config.budgets {
            let cell: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.method == method.name() && r.budget == budget)
                .collect();
            let total = cell.len() as f64;
            let fraction = |rank: f64| {
                cell.iter()
                    .filter(|r| r.metric("rank") == Some(rank))
                    .count() as f64
                    / total
            };
            let costs: Vec<f64> = cell
                .iter()
                .filter_map(|r| r.metric("expected_cost"))
                .collect();
            let (cost_mean, _) = mean_and_stderr(&costs);
            records.push(RunRecord {
                experiment: "qaoa".to_string(),
                method: method.name().to_string(),
                graph: config.graph_label.clone(),
                budget,
                noise: noise.clone(),
                rep: -1,
                seed: config.master_seed,
                metrics: vec![
                    ("best_fraction".to_string(), fraction(1.0)),
                    ("second_fraction".to_string(), fraction(2.0)),
                    ("third_fraction".to_string(), fraction(3.0)),
                    ("wrong_fraction".to_string(), fraction(4.0)),
                    ("expected_cost_mean".to_string(), cost_mean),
                ],
            });
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qaoa::default_graph;

    #[test]
    fn ghz_experiment_produces_paired_records_and_summaries() {
        let config = GhzConfig {
            master_seed: 9,
            budgets: vec![700, 1500],
            reps: 2,
            noise: None,
        };
        let records = run_ghz_experiment(&config).unwrap();
        let runs: Vec<&RunRecord> = records.iter().filter(|r| r.rep >= 0).collect();
        let summaries: Vec<&RunRecord> = records.iter().filter(|r| r.rep == -1).collect();
        assert_eq!(runs.len(), 3 * 2 * 2);
        assert_eq!(summaries.len(), 3 * 2);
        for r in &runs {
            let h = r.metric("hellinger").unwrap();
            assert!((0.0..=1.0).contains(&h), "hellinger {h}");
            assert!(r.metric("quasi_mass").unwrap().is_finite());
            assert_eq!(r.graph, "-");
            assert_eq!(r.noise, "none");
        }
        for s in &summaries {
            let mean = s.metric("hellinger_mean").unwrap();
            assert!((0.0..=1.0).contains(&mean));
            assert!(s.metric("hellinger_stderr").unwrap() >= 0.0);
            assert_eq!(s.seed, 9);
        }
    }

    #[test]
    fn ghz_experiment_is_deterministic_up_to_wall_time() {
        let config = GhzConfig {
            master_seed: 4,
            budgets: vec![900],
            reps: 2,
            noise: None,
        };
        let a = run_ghz_experiment(&config).unwrap();
        let b = run_ghz_experiment(&config).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.seed, y.seed);
            assert_eq!(x.metric("hellinger"), y.metric("hellinger"));
            assert_eq!(x.metric("quasi_mass"), y.metric("quasi_mass"));
        }
    }

    #[test]
    fn ghz_experiment_rejects_empty_plans() {
        let mut config = GhzConfig::new(1);
        config.budgets.clear();
        assert!(matches!(
            run_ghz_experiment(&config),
            Err(BenchError::NoBudgets)
        ));
        let mut config = GhzConfig::new(1);
        config.reps = 0;
        assert!(matches!(run_ghz_experiment(&config), Err(BenchError::NoReps)));
    }

    #[test]
    fn qaoa_experiment_ranks_and_fractions_are_consistent() {
        let mut config =
            QaoaExperimentConfig::new(17, default_graph("A").unwrap(), "A");
        config.budgets = vec![400];
        config.reps_uncut = 3;
        config.reps_cut = 2;
        config.max_iter = 1;
        let records = run_qaoa_experiment(&config).unwrap();
        let runs: Vec<&RunRecord> = records.iter().filter(|r| r.rep >= 0).collect();
        assert_eq!(runs.len(), 3 + 2);
        for r in &runs {
            let rank = r.metric("rank").unwrap();
            assert!((1.0..=4.0).contains(&rank));
            assert_eq!(r.graph, "A");
            if r.method == "clifford_cut" {
                assert!(r.metric("quasi_mass").is_some());
            } else {
                assert!(r.metric("quasi_mass").is_none());
            }
        }
        let summaries: Vec<&RunRecord> = records.iter().filter(|r| r.rep == -1).collect();
        assert_eq!(summaries.len(), 2);
        for s in &summaries {
            let total: f64 = [
                "best_fraction",
                "second_fraction",
                "third_fraction",
                "wrong_fraction",
            ]
            .iter()
            .map(|name| s.metric(name).unwrap())
            .sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn qaoa_experiment_reps_differ_by_method() {
        let mut config =
            QaoaExperimentConfig::new(3, default_graph("A").unwrap(), "A");
        config.budgets = vec![300];
        config.reps_uncut = 2;
        config.reps_cut = 1;
        config.max_iter = 0;
        let records = run_qaoa_experiment(&config).unwrap();
        let uncut = records
            .iter()
            .filter(|r| r.rep >= 0 && r.method == "uncut")
            .count();
        let cut = records
            .iter()
            .filter(|r| r.rep >= 0 && r.method == "clifford_cut")
            .count();
        assert_eq!((uncut, cut), (2, 1));
    }
}
