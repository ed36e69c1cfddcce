//! QAOA for MaxCut, with optional wire cutting to fit a device limit.
//!
//! The circuit layout follows the usual alternating-operator form: Hadamards
//! everywhere, then per layer one ZZ interaction per edge (CX, RZ on the
//! target, CX) followed by an RX mixer on every qubit, then a terminal
//! measurement. Edges are visited in lexicographic order, which on the
//! layered benchmark graphs means each block's edges complete before its hub
//! fans out to the next block, so a cut marker on the hub wire between those
//! two groups splits the circuit cleanly.
//!
//! [`run_qaoa`] wraps the full variational loop: SPSA over the angles, each
//! objective evaluation executed either whole or through one of the cutting
//! strategies, and a final execution at the best angles to produce the
//! answer distribution and its rank against the true optimum.

mod graph;
mod spsa;

pub use graph::{
    brute_force_maxcut, cut_value, default_graph, distinct_cut_values, layered_graph, Graph,
    BRUTE_FORCE_LIMIT,
};
pub use spsa::{spsa_minimize, SpsaConfig, SpsaError, SpsaIterate, SpsaResult};

use std::f64::consts::PI;

use rand::Rng;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Operation};
use crate::rng::{derive_rng, mix};
use crate::sim::{sample, Distribution, NoiseModel, OutcomeWeights, SimError};
use crate::wirecut::{
    clip_and_normalize, execute_pauli_configs_sampled, fragment, pauli_config_count,
    reconstruct_pauli, run_randomized_cut, CutVariant, WirecutError,
};

/// Device limit assumed by the cut methods when none is configured.
pub const DEFAULT_DEVICE_LIMIT: usize = 5;

/// Hub subsets are searched exhaustively for a minimal cut set up to this
/// many candidate hubs; beyond it only the cut-everything plan is tried.
const HUB_SEARCH_LIMIT: usize = 12;

#[derive(Debug, Error)]
pub enum QaoaError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Wirecut(#[from] WirecutError),
    #[error("edge ({u}, {v}) out of range for {n} vertices")]
    EdgeOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop on vertex {v}")]
    SelfLoop { v: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },
    #[error("no built-in graph named `{name}`; expected A, B, or C")]
    UnknownGraph { name: String },
    #[error("edge-list line {line}: {detail}")]
    GraphParse { line: usize, detail: String },
    #[error("assignment `{assignment}` is not a {vertices}-bit string")]
    BadAssignment {
        assignment: String,
        vertices: usize,
    },
    #[error("graph with {n} vertices exceeds the exhaustive-search limit of {limit}")]
    GraphTooLarge { n: usize, limit: usize },
    #[error("angle layer counts differ: {gammas} gammas vs {betas} betas")]
    AngleCountMismatch { gammas: usize, betas: usize },
    #[error("at least one layer of angles is required")]
    EmptyParams,
    #[error("angles must be finite")]
    NonFiniteAngle,
    #[error("flat angle vector of length {len} does not split into gamma and beta halves")]
    ThetaLength { len: usize },
    #[error("initial angles have length {got}, expected {expected}")]
    Theta0Length { expected: usize, got: usize },
    #[error("distribution is over {bits} bits but the graph has {vertices} vertices")]
    WidthMismatch { bits: usize, vertices: usize },
    #[error("device limit {limit} is infeasible for this circuit: {detail}")]
    DeviceLimitInfeasible { limit: usize, detail: String },
    #[error("shot budget {total} cannot cover {runs} subcircuit runs")]
    ShotBudget { total: u64, runs: usize },
    #[error("empty distribution has no answer")]
    EmptyDistribution,
    #[error("optimizer aborted: {detail}")]
    Optimizer { detail: String },
}

/// Reading a graph from disk: IO failure or bad file content.
#[derive(Debug, Error)]
pub enum GraphFileError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Parse(#[from] QaoaError),
}

/// Per-layer QAOA angles. `gammas[l]` drives layer `l`'s cost unitary and
/// `betas[l]` its mixer.
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaParams {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<QaoaParams, QaoaError> {
        if gammas.len() != betas.len() {
            return Err(QaoaError::AngleCountMismatch {
                gammas: gammas.len(),
                betas: betas.len(),
            });
        }
        if gammas.is_empty() {
            return Err(QaoaError::EmptyParams);
        }
        if !gammas.iter().chain(&betas).all(|a| a.is_finite()) {
            return Err(QaoaError::NonFiniteAngle);
        }
        Ok(QaoaParams { gammas, betas })
    }

    /// Splits a flat `[gammas..., betas...]` vector down the middle.
    pub fn from_flat(theta: &[f64]) -> Result<QaoaParams, QaoaError> {
        if theta.is_empty() || theta.len() % 2 != 0 {
            return Err(QaoaError::ThetaLength { len: theta.len() });
        }
        let p = theta.len() / 2;
        QaoaParams::new(theta[..p].to_vec(), theta[p..].to_vec())
    }

    /// Inverse of [`QaoaParams::from_flat`].
    pub fn to_flat(&self) -> Vec<f64> {
        self.gammas
            .iter()
            .chain(&self.betas)
            .copied()
            .collect()
    }

    /// Number of layers.
    pub fn p(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }
}

/// Builds the QAOA circuit for `graph` at the given angles.
///
/// With a device limit the builder also places wire-cut markers: candidate
/// positions are articulation vertices, each cut on the hub's wire between
/// its incoming and outgoing edge groups, and the smallest hub subset whose
/// fragments all fit the limit wins. Multi-layer circuits re-entangle
/// across any single wire, so auto-cutting only succeeds for one layer;
/// deeper circuits must either fit the device or be cut by hand.
pub fn build_qaoa_circuit(
    graph: &Graph,
    params: &QaoaParams,
    device_limit: Option<usize>,
) -> Result<Circuit, QaoaError> {
    let n = graph.num_vertices();
    let limit = match device_limit {
        Some(limit) if n > limit => limit,
        _ => return Ok(assemble(graph, params, &[])),
    };

    let hubs: Vec<usize> = graph
        .articulation_points()
        .into_iter()
        .filter(|&h| {
            let lower = graph.edges().iter().any(|&(_, v)| v == h);
            let upper = graph.edges().iter().any(|&(u, _)| u == h);
            lower && upper
        })
        .collect();

    let mut last_failure = format!("no usable cut positions on {n} qubits");
    let subsets: Vec<Vec<usize>> = if hubs.len() <= HUB_SEARCH_LIMIT {
        // All hub subsets, fewest cuts first, ties in mask order.
        let mut masks: Vec<u32> = (1..1u32 << hubs.len()).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        masks
            .iter()
            .map(|m| {
                hubs.iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .map(|(_, &h)| h)
                    .collect()
            })
            .collect()
    } else {
        vec![hubs.clone()]
    };
    for subset in subsets {
        let circuit = assemble(graph, params, &subset);
        match fragment(&circuit, Some(limit)) {
            Ok(_) => return Ok(circuit),
            Err(e) => last_failure = e.to_string(),
        }
    }
    Err(QaoaError::DeviceLimitInfeasible {
        limit,
        detail: last_failure,
    })
}

/// Emits the circuit, cutting the wires in `cut_hubs` just before their
/// first outgoing edge.
fn assemble(graph: &Graph, params: &QaoaParams, cut_hubs: &[usize]) -> Circuit {
    let n = graph.num_vertices();
    let mut c = Circuit::new(n, n);
    for q in 0..n {
        c.h(q);
    }
    let mut next_cut = 0;
    let mut pending: Vec<usize> = cut_hubs.to_vec();
    for layer in 0..params.p() {
        let gamma = params.gammas[layer];
        let beta = params.betas[layer];
        for &(u, v) in graph.edges() {
            if let Some(i) = pending.iter().position(|&h| h == u) {
                pending.remove(i);
                c.push(Operation::Cut {
                    cut_id: next_cut,
                    qubit: u,
                })
                .expect("fresh cut id on a valid wire");
                next_cut += 1;
            }
            c.cx(u, v);
            c.rz(v, 2.0 * gamma);
            c.cx(u, v);
        }
        for q in 0..n {
            c.rx(q, 2.0 * beta);
        }
    }
    c.measure_all();
    c
}

/// Expected cut value under an outcome distribution, `sum_b w(b) C(b)`.
///
/// Linear in the weights, so it accepts signed quasi-distributions as well
/// as proper ones; cut-method objectives feed it raw reconstruction output
/// to keep the estimator unbiased.
pub fn expected_cost(weights: &impl OutcomeWeights, graph: &Graph) -> Result<f64, QaoaError> {
    if weights.bits() != graph.num_vertices() {
        return Err(QaoaError::WidthMismatch {
            bits: weights.bits(),
            vertices: graph.num_vertices(),
        });
    }
    Ok(weights
        .weights()
        .iter()
        .map(|(key, &w)| {
            let crossing = graph
                .edges()
                .iter()
                .filter(|&&(u, v)| key.as_bytes()[u] != key.as_bytes()[v])
                .count();
            w * crossing as f64
        })
        .sum())
}

/// Highest-weight outcome, ties broken toward the lexicographically
/// smallest bitstring. `None` on an empty distribution.
pub fn best_bitstring(weights: &impl OutcomeWeights) -> Option<String> {
    let mut best: Option<(&String, f64)> = None;
    for (key, &w) in weights.weights() {
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((key, w));
        }
    }
    best.map(|(key, _)| key.clone())
}

/// How good the answer's cut value is relative to everything the graph can
/// realize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    Best,
    Second,
    Third,
    Wrong,
}

impl Rank {
    pub fn name(&self) -> &'static str {
        match self {
            Rank::Best => "best",
            Rank::Second => "second",
            Rank::Third => "third",
            Rank::Wrong => "wrong",
        }
    }
}

/// Ranks a distribution's modal bitstring: `Best` if its cut value is the
/// optimum, `Second` or `Third` for the next distinct values down, `Wrong`
/// below that.
pub fn rank_answer(dist: &Distribution, graph: &Graph) -> Result<Rank, QaoaError> {
    let answer = best_bitstring(dist).ok_or(QaoaError::EmptyDistribution)?;
    let value = cut_value(graph, &answer)?;
    let ladder = distinct_cut_values(graph)?;
    Ok(match ladder.iter().position(|&v| v == value) {
        Some(0) => Rank::Best,
        Some(1) => Rank::Second,
        Some(2) => Rank::Third,
        _ => Rank::Wrong,
    })
}

/// Execution strategy for each circuit run inside the variational loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QaoaMethod {
    /// Simulate the whole circuit directly.
    Uncut,
    /// Cut to fragments, enumerate the deterministic basis-and-preparation
    /// configurations, split the shot budget over them, reconstruct.
    PauliCut,
    /// Cut to fragments, draw one random channel per cut per shot, stitch
    /// and reweight.
    CliffordCut,
}

impl QaoaMethod {
    pub const ALL: [QaoaMethod; 3] = [
        QaoaMethod::Uncut,
        QaoaMethod::PauliCut,
        QaoaMethod::CliffordCut,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            QaoaMethod::Uncut => "uncut",
            QaoaMethod::PauliCut => "pauli_cut",
            QaoaMethod::CliffordCut => "clifford_cut",
        }
    }
}

/// One full QAOA run: method, budget, noise, optimizer settings, seed.
///
/// `shots` is the per-evaluation budget. The uncut method spends it on one
/// circuit; the Pauli method splits it evenly over the deterministic
/// configurations; the randomized method treats it as the stitched sample
/// count, one end-to-end fragment pass per sample.
#[derive(Debug, Clone)]
pub struct QaoaRunConfig {
    pub method: QaoaMethod,
    pub shots: u64,
    pub noise: Option<NoiseModel>,
    pub spsa: SpsaConfig,
    pub p: usize,
    pub seed: u64,
    pub device_limit: Option<usize>,
    /// Fixed starting angles; drawn uniformly from `[0, pi)` per parameter
    /// when absent.
    pub theta0: Option<Vec<f64>>,
}

impl QaoaRunConfig {
    pub fn new(method: QaoaMethod, shots: u64, seed: u64) -> QaoaRunConfig {
        QaoaRunConfig {
            method,
            shots,
            noise: None,
            spsa: SpsaConfig::default(),
            p: 1,
            seed,
            device_limit: None,
            theta0: None,
        }
    }
}

/// Result of a full variational run.
#[derive(Debug, Clone)]
pub struct QaoaOutcome {
    /// Angles of the best iterate found (or the start when `max_iter` is 0).
    pub theta: Vec<f64>,
    /// Optimizer trace, empty when the optimizer was skipped.
    pub trajectory: Vec<SpsaIterate>,
    /// Objective evaluations spent by the optimizer (the final answer
    /// execution is one more run on top).
    pub evaluations: usize,
    /// Expected cut value of the final execution, from raw weights.
    pub expected: f64,
    /// Final answer distribution (clipped and renormalized for the cut
    /// methods).
    pub distribution: Distribution,
    /// Modal bitstring of the final distribution.
    pub answer: String,
    pub rank: Rank,
    /// Total signed mass of the final raw reconstruction; `None` for the
    /// uncut method.
    pub quasi_mass: Option<f64>,
}

// Seed-stream namespaces within a run.
const NS_THETA0: u64 = 1;
const NS_SPSA: u64 = 2;
const NS_EVAL: u64 = 3;
const NS_FINAL: u64 = 4;

struct MethodRun {
    cost: f64,
    distribution: Distribution,
    quasi_mass: Option<f64>,
}

/// Executes the circuit for `params` once under the configured method and
/// seed, returning the cost estimate and the outcome distribution.
fn run_method(
    graph: &Graph,
    params: &QaoaParams,
    config: &QaoaRunConfig,
    seed: u64,
) -> Result<MethodRun, QaoaError> {
    let uncut_run = |circuit: &Circuit| -> Result<MethodRun, QaoaError> {
        let counts = sample(circuit, config.shots, seed, config.noise.as_ref())?;
        let distribution = counts.to_distribution()?;
        Ok(MethodRun {
            cost: expected_cost(&distribution, graph)?,
            distribution,
            quasi_mass: None,
        })
    };

    if config.method == QaoaMethod::Uncut {
        let circuit = build_qaoa_circuit(graph, params, None)?;
        return uncut_run(&circuit);
    }

    let limit = config.device_limit.unwrap_or(DEFAULT_DEVICE_LIMIT);
    let circuit = build_qaoa_circuit(graph, params, Some(limit))?;
    if circuit.num_cuts() == 0 {
        // The graph already fits the device; nothing to cut.
        return uncut_run(&circuit);
    }
    let frags = fragment(&circuit, Some(limit))?;
    let quasi = match config.method {
        QaoaMethod::PauliCut => {
            let runs = pauli_config_count(&frags);
            let plan =
                crate::bench::allocate_shots(config.shots, runs).map_err(|_| {
                    QaoaError::ShotBudget {
                        total: config.shots,
                        runs,
                    }
                })?;
            let results =
                execute_pauli_configs_sampled(&frags, &plan, seed, config.noise.as_ref())?;
            reconstruct_pauli(&frags, &results)?
        }
        QaoaMethod::CliffordCut => run_randomized_cut(
            &frags,
            config.shots,
            seed,
            CutVariant::Clifford,
            config.noise.as_ref(),
        )?,
        QaoaMethod::Uncut => unreachable!("handled above"),
    };
    let cost = expected_cost(&quasi, graph)?;
    let mass = quasi.mass();
    let distribution = clip_and_normalize(&quasi)?;
    Ok(MethodRun {
        cost,
        distribution,
        quasi_mass: Some(mass),
    })
}

/// Runs the full variational loop and classifies the answer.
///
/// The run seed fixes everything: the starting angles, the optimizer's
/// perturbation signs, each evaluation's execution seed, and the final
/// answer execution. The optimizer maximizes expected cut value by
/// minimizing its negation.
pub fn run_qaoa(graph: &Graph, config: &QaoaRunConfig) -> Result<QaoaOutcome, QaoaError> {
    if config.shots == 0 {
        return Err(QaoaError::ShotBudget { total: 0, runs: 1 });
    }
    if config.p == 0 {
        return Err(QaoaError::EmptyParams);
    }
    let dim = 2 * config.p;
    let theta0 = match &config.theta0 {
        Some(t) => {
            if t.len() != dim {
                return Err(QaoaError::Theta0Length {
                    expected: dim,
                    got: t.len(),
                });
            }
            t.clone()
        }
        None => {
            let mut rng = derive_rng(config.seed, &[NS_THETA0]);
            (0..dim).map(|_| rng.random::<f64>() * PI).collect()
        }
    };

    let (theta, trajectory, evaluations) = if config.spsa.max_iter == 0 {
        (theta0, Vec::new(), 0)
    } else {
        let mut spsa_config = config.spsa.clone();
        spsa_config.seed = mix(config.seed, &[NS_SPSA]);
        let mut eval_index = 0u64;
        let objective = |theta: &[f64]| -> Result<f64, QaoaError> {
            let eval_seed = mix(config.seed, &[NS_EVAL, eval_index]);
            eval_index += 1;
            let params = QaoaParams::from_flat(theta)?;
            Ok(-run_method(graph, &params, config, eval_seed)?.cost)
        };
        match spsa_minimize(objective, &theta0, &spsa_config) {
            Ok(result) => (result.theta, result.trajectory, result.evaluations),
            Err(SpsaError::Objective(e)) => return Err(e),
            Err(e) => {
                return Err(QaoaError::Optimizer {
                    detail: e.to_string(),
                })
            }
        }
    };

    let params = QaoaParams::from_flat(&theta)?;
    let final_run = run_method(graph, &params, config, mix(config.seed, &[NS_FINAL]))?;
    let answer = best_bitstring(&final_run.distribution).ok_or(QaoaError::EmptyDistribution)?;
    let rank = rank_answer(&final_run.distribution, graph)?;
    Ok(QaoaOutcome {
        theta,
        trajectory,
        evaluations,
        expected: final_run.cost,
        distribution: final_run.distribution,
        answer,
        rank,
        quasi_mass: final_run.quasi_mass,
    })
}
