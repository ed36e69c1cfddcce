//! Dense statevector simulation with exact distributions and shot sampling.
//!
//! Outcome bitstrings follow the crate convention: qubit 0 is the leftmost
//! character, so for amplitude index `i` the bit of qubit `q` sits at
//! position `n - 1 - q`. A circuit's outcome records, per qubit, the result
//! of its last measurement; mid-circuit measurements that are later repeated
//! are overwritten.
//!
//! [`exact_distribution`] enumerates every branch of mid-circuit
//! measurements, resets, and preparations, and treats the trailing block of
//! measurements jointly, so circuits whose only measurements are terminal
//! cost a single statevector pass. [`sample`] draws per-shot ChaCha8 streams
//! from a master seed, which makes counts independent of thread scheduling,
//! and applies [`NoiseModel`] errors as stochastic Pauli insertions.

mod noise;

pub use noise::{NoiseModel, NoiseModelError};

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, Mat2, Operation, PauliAxis, PrepState, C64};
use crate::rng::derive_rng;

/// Default cap on simulated qubits (16M amplitudes).
pub const DEFAULT_QUBIT_LIMIT: usize = 24;

/// Branches with probability below this are dropped during exact enumeration.
const BRANCH_EPS: f64 = 1e-15;
/// Amplitudes with squared magnitude below this are skipped in leaf sums.
const AMP_EPS: f64 = 1e-18;
/// Tolerance for a probability map to count as normalized.
const MASS_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("circuit has {got} qubits, exceeding the limit of {limit}")]
    TooManyQubits { got: usize, limit: usize },
    #[error("qubit {qubit} is never measured; outcome would be undefined")]
    UnmeasuredQubit { qubit: usize },
    #[error("gate on qubit {qubit} deviates from unitarity by {deviation:.3e}")]
    NonUnitaryGate { qubit: usize, deviation: f64 },
    #[error("operation `{op}` has no unitary action")]
    NonUnitaryOperation { op: String },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Noise(#[from] NoiseModelError),
    #[error("outcome key `{key}` is not a bitstring of length {bits}")]
    BadOutcomeKey { key: String, bits: usize },
    #[error("probability {value} for outcome `{key}` is outside [0, 1]")]
    BadProbability { key: String, value: f64 },
    #[error("probabilities sum to {mass}, not 1")]
    BadMass { mass: f64 },
    #[error("cannot normalize an empty count table")]
    EmptyCounts,
}

/// Formats an amplitude index as an outcome bitstring, qubit 0 leftmost.
pub fn index_to_bitstring(index: u64, bits: usize) -> String {
    if bits == 0 {
        return String::new();
    }
    format!("{index:0bits$b}")
}

/// Inverse of [`index_to_bitstring`].
pub fn bitstring_to_index(key: &str, bits: usize) -> Result<u64, SimError> {
    if key.len() != bits || !key.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(SimError::BadOutcomeKey {
            key: key.into(),
            bits,
        });
    }
    if bits == 0 {
        return Ok(0);
    }
    u64::from_str_radix(key, 2).map_err(|_| SimError::BadOutcomeKey {
        key: key.into(),
        bits,
    })
}

/// Read access to signed outcome weights, shared by true distributions and
/// the quasi-distributions produced by cut reconstruction.
pub trait OutcomeWeights {
    fn bits(&self) -> usize;
    fn weights(&self) -> &BTreeMap<String, f64>;

    fn weight(&self, key: &str) -> f64 {
        self.weights().get(key).copied().unwrap_or(0.0)
    }
}

/// A normalized probability distribution over outcome bitstrings.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution {
    bits: usize,
    probs: BTreeMap<String, f64>,
}

impl Distribution {
    /// Validates keys, ranges, and total mass (within `1e-9`).
    pub fn from_probs(
        bits: usize,
        probs: BTreeMap<String, f64>,
    ) -> Result<Distribution, SimError> {
        let mut mass = 0.0;
        for (key, &p) in &probs {
            if key.len() != bits || !key.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(SimError::BadOutcomeKey {
                    key: key.clone(),
                    bits,
                });
            }
            if !(0.0..=1.0 + MASS_TOL).contains(&p) || p.is_nan() {
                return Err(SimError::BadProbability {
                    key: key.clone(),
                    value: p,
                });
            }
            mass += p;
        }
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(SimError::BadMass { mass });
        }
        Ok(Distribution { bits, probs })
    }

    pub(crate) fn from_index_probs(
        bits: usize,
        probs: impl IntoIterator<Item = (u64, f64)>,
    ) -> Result<Distribution, SimError> {
        let map: BTreeMap<String, f64> = probs
            .into_iter()
            .filter(|&(_, p)| p > BRANCH_EPS)
            .map(|(i, p)| (index_to_bitstring(i, bits), p))
            .collect();
        Distribution::from_probs(bits, map)
    }

    pub fn get(&self, key: &str) -> f64 {
        self.probs.get(key).copied().unwrap_or(0.0)
    }

    pub fn probs(&self) -> &BTreeMap<String, f64> {
        &self.probs
    }
}

impl OutcomeWeights for Distribution {
    fn bits(&self) -> usize {
        self.bits
    }

    fn weights(&self) -> &BTreeMap<String, f64> {
        &self.probs
    }
}

/// Shot counts keyed by outcome bitstring.
#[derive(Clone, Debug, PartialEq)]
pub struct Counts {
    bits: usize,
    counts: BTreeMap<String, u64>,
}

impl Counts {
    pub fn from_map(bits: usize, counts: BTreeMap<String, u64>) -> Result<Counts, SimError> {
        for key in counts.keys() {
            if key.len() != bits || !key.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(SimError::BadOutcomeKey {
                    key: key.clone(),
                    bits,
                });
            }
        }
        Ok(Counts { bits, counts })
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn get(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Relative frequencies as a [`Distribution`].
    pub fn to_distribution(&self) -> Result<Distribution, SimError> {
        let total = self.total();
        if total == 0 {
            return Err(SimError::EmptyCounts);
        }
        let probs: BTreeMap<String, f64> = self
            .counts
            .iter()
            .filter(|&(_, &c)| c > 0)
            .map(|(k, &c)| (k.clone(), c as f64 / total as f64))
            .collect();
        Distribution::from_probs(self.bits, probs)
    }
}

/// Limits and conveniences for the simulation entry points.
#[derive(Clone, Debug)]
pub struct SimOptions {
    pub qubit_limit: usize,
    /// Treat qubits that are never measured as if a terminal measurement had
    /// been appended, instead of failing.
    pub measure_all_missing: bool,
}

impl Default for SimOptions {
    fn default() -> SimOptions {
        SimOptions {
            qubit_limit: DEFAULT_QUBIT_LIMIT,
            measure_all_missing: false,
        }
    }
}

/// Dense state over `num_qubits` wires, starting from |0...0>.
#[derive(Clone, Debug)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Panics above 30 qubits; configurable limits are enforced by the
    /// circuit-level entry points before allocation.
    pub fn zero_state(num_qubits: usize) -> StateVector {
        assert!(num_qubits <= 30, "statevector of {num_qubits} qubits");
        let mut amps = vec![C64::ZERO; 1usize << num_qubits];
        amps[0] = C64::ONE;
        StateVector { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn qubit_mask(&self, q: usize) -> usize {
        1usize << (self.num_qubits - 1 - q)
    }

    fn apply_mat2(&mut self, q: usize, m: &Mat2) {
        let bit = self.qubit_mask(q);
        let low = bit - 1;
        let [[m00, m01], [m10, m11]] = m.0;
        for i in 0..self.amps.len() / 2 {
            let i0 = ((i & !low) << 1) | (i & low);
            let i1 = i0 | bit;
            let a0 = self.amps[i0];
            let a1 = self.amps[i1];
            self.amps[i0] = m00 * a0 + m01 * a1;
            self.amps[i1] = m10 * a0 + m11 * a1;
        }
    }

    fn apply_cx(&mut self, control: usize, target: usize) {
        let cbit = self.qubit_mask(control);
        let tbit = self.qubit_mask(target);
        for i in 0..self.amps.len() {
            if i & cbit != 0 && i & tbit == 0 {
                self.amps.swap(i, i | tbit);
            }
        }
    }

    /// Applies a gate in place. Qubit indices must be in range; gates coming
    /// out of a validated [`Circuit`] always are.
    pub fn apply_gate(&mut self, gate: &Gate) {
        match gate {
            Gate::Cx(c, t) => self.apply_cx(*c, *t),
            _ => {
                let q = gate.qubits()[0];
                let m = gate.matrix().unwrap();
                self.apply_mat2(q, &m);
            }
        }
    }

    fn apply_pauli(&mut self, q: usize, axis: PauliAxis) {
        let m = match axis {
            PauliAxis::X => Mat2::x(),
            PauliAxis::Y => Mat2::y(),
            PauliAxis::Z => Mat2::z(),
        };
        self.apply_mat2(q, &m);
    }

    /// Probability that measuring `q` yields 1.
    pub fn prob_one(&self, q: usize) -> f64 {
        let bit = self.qubit_mask(q);
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects onto `outcome` for qubit `q` and renormalizes by
    /// `sqrt(prob)`. `prob` must be the probability of that outcome.
    fn project(&mut self, q: usize, outcome: u8, prob: f64) {
        let bit = self.qubit_mask(q);
        let keep_set = outcome == 1;
        let scale = 1.0 / prob.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if ((i & bit) != 0) == keep_set {
                *a *= scale;
            } else {
                *a = C64::ZERO;
            }
        }
    }

    /// Samples a Z measurement of `q`, collapsing the state.
    pub fn measure(&mut self, q: usize, rng: &mut impl Rng) -> u8 {
        let p1 = self.prob_one(q);
        let outcome = u8::from(rng.random::<f64>() < p1);
        let p = if outcome == 1 { p1 } else { 1.0 - p1 };
        self.project(q, outcome, p);
        outcome
    }

    fn reset(&mut self, q: usize, rng: &mut impl Rng) {
        if self.measure(q, rng) == 1 {
            self.apply_mat2(q, &Mat2::x());
        }
    }

    fn prepare(&mut self, q: usize, state: PrepState, rng: &mut impl Rng) {
        self.reset(q, rng);
        apply_prep_rotation(self, q, state);
    }

    /// Draws an amplitude index with probability |amp|^2 in one pass.
    fn sample_index(&self, rng: &mut impl Rng) -> u64 {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last_nonzero = 0u64;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = i as u64;
                acc += p;
                if u < acc {
                    return i as u64;
                }
            }
        }
        last_nonzero
    }
}

fn apply_prep_rotation(state: &mut StateVector, q: usize, prep: PrepState) {
    match prep {
        PrepState::Zero => {}
        PrepState::One => state.apply_mat2(q, &Mat2::x()),
        PrepState::Plus => state.apply_mat2(q, &Mat2::h()),
        PrepState::IState => {
            state.apply_mat2(q, &Mat2::h());
            state.apply_mat2(q, &Mat2::s());
        }
    }
}

/// Returns a new state with `gate` applied, validating the gate first.
pub fn apply_unitary(state: &StateVector, gate: &Gate) -> Result<StateVector, SimError> {
    for q in gate.qubits() {
        if q >= state.num_qubits() {
            return Err(SimError::Circuit(CircuitError::QubitOutOfRange {
                qubit: q,
                num_qubits: state.num_qubits(),
            }));
        }
    }
    if let Gate::U1q(q, m) = gate {
        let deviation = m.unitarity_deviation();
        if deviation > crate::circuit::UNITARY_TOL {
            return Err(SimError::NonUnitaryGate {
                qubit: *q,
                deviation,
            });
        }
    }
    if let Gate::Cx(c, t) = gate {
        if c == t {
            return Err(SimError::Circuit(CircuitError::DuplicateQubit { qubit: *c }));
        }
    }
    let mut out = state.clone();
    out.apply_gate(gate);
    Ok(out)
}

/// Runs the unitary part of a gates-only circuit and returns the final
/// state. Terminal measurements are skipped; mid-circuit measurements,
/// resets, and preparations are rejected because they have no unitary
/// action.
pub fn evolve_gates(circuit: &Circuit) -> Result<StateVector, SimError> {
    circuit.validate()?;
    let end = body_end(circuit.ops());
    let mut state = StateVector::zero_state(circuit.num_qubits());
    for op in &circuit.ops()[..end] {
        match op {
            Operation::Gate(g) => state.apply_gate(g),
            Operation::Barrier { .. } | Operation::Cut { .. } => {}
            other => {
                return Err(SimError::NonUnitaryOperation {
                    op: format!("{other:?}"),
                })
            }
        }
    }
    Ok(state)
}

/// Index of the first op of the trailing measurement block: everything at
/// and after this index is a measurement, barrier, or cut marker.
fn body_end(ops: &[Operation]) -> usize {
    let mut end = ops.len();
    while end > 0 {
        match &ops[end - 1] {
            Operation::Measure { .. } | Operation::Barrier { .. } | Operation::Cut { .. } => {
                end -= 1
            }
            _ => break,
        }
    }
    end
}

fn check_limit(circuit: &Circuit, options: &SimOptions) -> Result<(), SimError> {
    if circuit.num_qubits() > options.qubit_limit {
        return Err(SimError::TooManyQubits {
            got: circuit.num_qubits(),
            limit: options.qubit_limit,
        });
    }
    Ok(())
}

/// Ops to simulate: the circuit's own, plus appended terminal measurements
/// when `measure_all_missing` is set and some qubit would otherwise be
/// unmeasured.
fn effective_ops(circuit: &Circuit, options: &SimOptions) -> Result<Vec<Operation>, SimError> {
    let mut measured = vec![false; circuit.num_qubits()];
    for op in circuit.ops() {
        if let Operation::Measure { qubit, .. } = op {
            measured[*qubit] = true;
        }
    }
    let mut ops = circuit.ops().to_vec();
    for (q, &m) in measured.iter().enumerate() {
        if !m {
            if !options.measure_all_missing {
                return Err(SimError::UnmeasuredQubit { qubit: q });
            }
            ops.push(Operation::Measure { qubit: q, clbit: q });
        }
    }
    Ok(ops)
}

/// Exact outcome distribution of `circuit` with default options.
pub fn exact_distribution(circuit: &Circuit) -> Result<Distribution, SimError> {
    exact_distribution_with(circuit, &SimOptions::default())
}

/// Exact outcome distribution: branch-enumerates mid-circuit measurements,
/// resets, and preparations, and marginalizes the trailing measurement block
/// from a single statevector.
pub fn exact_distribution_with(
    circuit: &Circuit,
    options: &SimOptions,
) -> Result<Distribution, SimError> {
    circuit.validate()?;
    check_limit(circuit, options)?;
    let n = circuit.num_qubits();
    let ops = effective_ops(circuit, options)?;
    let end = body_end(&ops);
    let body = &ops[..end];

    let mut suffix_qubit = vec![false; n];
    for op in &ops[end..] {
        if let Operation::Measure { qubit, .. } = op {
            suffix_qubit[*qubit] = true;
        }
    }

    let mut acc: HashMap<u64, f64> = HashMap::new();
    let mut outcomes: Vec<Option<u8>> = vec![None; n];
    enumerate_branches(
        StateVector::zero_state(n),
        body,
        &mut outcomes,
        1.0,
        &mut |state, outcomes, weight| {
            for (idx, amp) in state.amplitudes().iter().enumerate() {
                let p = amp.norm_sqr();
                if p < AMP_EPS {
                    continue;
                }
                let mut key = 0u64;
                for q in 0..n {
                    let bit = if suffix_qubit[q] {
                        ((idx >> (n - 1 - q)) & 1) as u8
                    } else {
                        outcomes[q].expect("qubit measured in body")
                    };
                    key = (key << 1) | u64::from(bit);
                }
                *acc.entry(key).or_insert(0.0) += weight * p;
            }
        },
    );
    Distribution::from_index_probs(n, acc)
}

/// Walks `ops`, forking at each measurement-like operation, and calls `sink`
/// with every leaf state, its recorded outcomes, and its path probability.
fn enumerate_branches(
    mut state: StateVector,
    ops: &[Operation],
    outcomes: &mut Vec<Option<u8>>,
    weight: f64,
    sink: &mut dyn FnMut(&StateVector, &[Option<u8>], f64),
) {
    for (i, op) in ops.iter().enumerate() {
        match op {
            Operation::Gate(g) => state.apply_gate(g),
            Operation::Barrier { .. } | Operation::Cut { .. } => {}
            Operation::Measure { qubit, .. } => {
                let p1 = state.prob_one(*qubit);
                let rest = &ops[i + 1..];
                for outcome in [0u8, 1u8] {
                    let p = if outcome == 1 { p1 } else { 1.0 - p1 };
                    if p < BRANCH_EPS {
                        continue;
                    }
                    let mut branch = state.clone();
                    branch.project(*qubit, outcome, p);
                    let saved = outcomes[*qubit];
                    outcomes[*qubit] = Some(outcome);
                    enumerate_branches(branch, rest, outcomes, weight * p, sink);
                    outcomes[*qubit] = saved;
                }
                return;
            }
            Operation::Reset { qubit } | Operation::Prepare { qubit, .. } => {
                let prep = match op {
                    Operation::Prepare { state, .. } => Some(*state),
                    _ => None,
                };
                let p1 = state.prob_one(*qubit);
                let rest = &ops[i + 1..];
                for outcome in [0u8, 1u8] {
                    let p = if outcome == 1 { p1 } else { 1.0 - p1 };
                    if p < BRANCH_EPS {
                        continue;
                    }
                    let mut branch = state.clone();
                    branch.project(*qubit, outcome, p);
                    if outcome == 1 {
                        branch.apply_mat2(*qubit, &Mat2::x());
                    }
                    if let Some(prep) = prep {
                        apply_prep_rotation(&mut branch, *qubit, prep);
                    }
                    enumerate_branches(branch, rest, outcomes, weight * p, sink);
                }
                return;
            }
        }
    }
    sink(&state, outcomes, weight);
}

fn random_1q_pauli(rng: &mut impl Rng) -> PauliAxis {
    PauliAxis::ALL[rng.random_range(0..3)]
}

/// Uniform non-identity two-qubit Pauli as (first wire, second wire) factors.
fn random_2q_pauli(rng: &mut impl Rng) -> (Option<PauliAxis>, Option<PauliAxis>) {
    let t = rng.random_range(1..16u8);
    let decode = |v: u8| match v {
        0 => None,
        1 => Some(PauliAxis::X),
        2 => Some(PauliAxis::Y),
        _ => Some(PauliAxis::Z),
    };
    (decode(t / 4), decode(t % 4))
}

fn maybe_insert_gate_noise(state: &mut StateVector, gate: &Gate, nm: &NoiseModel, rng: &mut impl Rng) {
    match gate {
        Gate::Cx(c, t) => {
            if nm.p2 > 0.0 && rng.random::<f64>() < nm.p2 {
                let (pc, pt) = random_2q_pauli(rng);
                if let Some(axis) = pc {
                    state.apply_pauli(*c, axis);
                }
                if let Some(axis) = pt {
                    state.apply_pauli(*t, axis);
                }
            }
        }
        _ => {
            if nm.p1 > 0.0 && rng.random::<f64>() < nm.p1 {
                let q = gate.qubits()[0];
                let axis = random_1q_pauli(rng);
                state.apply_pauli(q, axis);
            }
        }
    }
}

/// Runs one stochastic trajectory of a validated circuit and returns the
/// outcome as an amplitude-style index (bit of qubit `q` at position
/// `n - 1 - q`). Every qubit must be measured. A noise model whose rates are
/// all zero consumes exactly the same random stream as no noise model, so
/// the two produce identical outcomes for identical `rng` states.
pub fn run_trajectory(
    circuit: &Circuit,
    rng: &mut impl Rng,
    noise: Option<&NoiseModel>,
) -> Result<u64, SimError> {
    let n = circuit.num_qubits();
    let nm = noise.filter(|m| !m.is_trivial());
    let mut state = StateVector::zero_state(n);
    let mut last_outcome: Vec<Option<u8>> = vec![None; n];
    for op in circuit.ops() {
        match op {
            Operation::Gate(g) => {
                state.apply_gate(g);
                if let Some(nm) = nm {
                    maybe_insert_gate_noise(&mut state, g, nm, rng);
                }
            }
            Operation::Measure { qubit, .. } => {
                let outcome = state.measure(*qubit, rng);
                let recorded = match nm {
                    Some(nm) if nm.p_ro > 0.0 => outcome ^ u8::from(rng.random::<f64>() < nm.p_ro),
                    _ => outcome,
                };
                last_outcome[*qubit] = Some(recorded);
            }
            Operation::Reset { qubit } => state.reset(*qubit, rng),
            Operation::Prepare { qubit, state: prep } => state.prepare(*qubit, *prep, rng),
            Operation::Barrier { .. } | Operation::Cut { .. } => {}
        }
    }
    let mut key = 0u64;
    for (q, outcome) in last_outcome.iter().enumerate() {
        let bit = outcome.ok_or(SimError::UnmeasuredQubit { qubit: q })?;
        key = (key << 1) | u64::from(bit);
    }
    Ok(key)
}

/// Positions of body gates by arity, for the sampler's noise-event planning.
struct FastPlan {
    gate1: Vec<usize>,
    gate2: Vec<usize>,
}

enum ErrorInsertion {
    One(PauliAxis),
    Two(Option<PauliAxis>, Option<PauliAxis>),
}

/// Appends `(gate position, insertion)` events for one arity group using
/// geometric skipping, so the number of random draws scales with the number
/// of events rather than the number of gates.
fn sample_group_events(
    rng: &mut impl Rng,
    positions: &[usize],
    p: f64,
    two_qubit: bool,
    events: &mut Vec<(usize, ErrorInsertion)>,
) {
    if p <= 0.0 || positions.is_empty() {
        return;
    }
    let mut at = 0usize;
    if p >= 1.0 {
        while at < positions.len() {
            push_event(rng, positions[at], two_qubit, events);
            at += 1;
        }
        return;
    }
    let denom = (1.0 - p).ln();
    loop {
        let u: f64 = rng.random();
        let step_f = ((1.0 - u).ln() / denom).floor();
        if !step_f.is_finite() || step_f >= (positions.len() - at) as f64 {
            return;
        }
        at += step_f as usize;
        push_event(rng, positions[at], two_qubit, events);
        at += 1;
        if at >= positions.len() {
            return;
        }
    }
}

fn push_event(
    rng: &mut impl Rng,
    position: usize,
    two_qubit: bool,
    events: &mut Vec<(usize, ErrorInsertion)>,
) {
    let insertion = if two_qubit {
        let (a, b) = random_2q_pauli(rng);
        ErrorInsertion::Two(a, b)
    } else {
        ErrorInsertion::One(random_1q_pauli(rng))
    };
    events.push((position, insertion));
}

/// Samples `shots` outcomes with default options.
pub fn sample(
    circuit: &Circuit,
    shots: u64,
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<Counts, SimError> {
    sample_with(circuit, shots, seed, noise, &SimOptions::default())
}

/// Samples `shots` outcomes. Shots run in parallel, each on a ChaCha8
/// stream derived from `seed` and the shot index, so counts depend only on
/// the arguments. Circuits without mid-circuit measurements are sampled from
/// a single noiseless statevector, with full trajectories only for shots on
/// which a noise event actually fires.
pub fn sample_with(
    circuit: &Circuit,
    shots: u64,
    seed: u64,
    noise: Option<&NoiseModel>,
    options: &SimOptions,
) -> Result<Counts, SimError> {
    circuit.validate()?;
    check_limit(circuit, options)?;
    if let Some(nm) = noise {
        nm.validate()?;
    }
    let nm = noise.filter(|m| !m.is_trivial());
    let n = circuit.num_qubits();
    let ops = effective_ops(circuit, options)?;
    let end = body_end(&ops);
    let body = &ops[..end];

    let fast = body
        .iter()
        .all(|op| matches!(op, Operation::Gate(_) | Operation::Barrier { .. } | Operation::Cut { .. }));

    let merged: HashMap<u64, u64> = if fast {
        let mut base = StateVector::zero_state(n);
        let mut plan = FastPlan {
            gate1: Vec::new(),
            gate2: Vec::new(),
        };
        let mut gates: Vec<&Gate> = Vec::new();
        for op in body {
            if let Operation::Gate(g) = op {
                match g {
                    Gate::Cx(..) => plan.gate2.push(gates.len()),
                    _ => plan.gate1.push(gates.len()),
                }
                gates.push(g);
                base.apply_gate(g);
            }
        }
        // Suffix measurements cover every qubit here (effective_ops filled
        // the gaps or errored), so an outcome is a full amplitude index.
        let cumulative: Vec<f64> = {
            let mut acc = 0.0;
            base.amplitudes()
                .iter()
                .map(|a| {
                    acc += a.norm_sqr();
                    acc
                })
                .collect()
        };
        (0..shots)
            .into_par_iter()
            .fold(HashMap::<u64, u64>::new, |mut map, shot| {
                let mut rng = derive_rng(seed, &[shot]);
                let mut events: Vec<(usize, ErrorInsertion)> = Vec::new();
                if let Some(nm) = nm {
                    sample_group_events(&mut rng, &plan.gate1, nm.p1, false, &mut events);
                    sample_group_events(&mut rng, &plan.gate2, nm.p2, true, &mut events);
                    events.sort_by_key(|(pos, _)| *pos);
                }
                let mut idx = if events.is_empty() {
                    let u: f64 = rng.random();
                    let found = cumulative.partition_point(|&c| c <= u);
                    found.min(cumulative.len() - 1) as u64
                } else {
                    let mut state = StateVector::zero_state(n);
                    let mut next_event = 0usize;
                    for (pos, g) in gates.iter().enumerate() {
                        state.apply_gate(g);
                        while next_event < events.len() && events[next_event].0 == pos {
                            match &events[next_event].1 {
                                ErrorInsertion::One(axis) => {
                                    state.apply_pauli(g.qubits()[0], *axis)
                                }
                                ErrorInsertion::Two(a, b) => {
                                    let qs = g.qubits();
                                    if let Some(axis) = a {
                                        state.apply_pauli(qs[0], *axis);
                                    }
                                    if let Some(axis) = b {
                                        state.apply_pauli(qs[1], *axis);
                                    }
                                }
                            }
                            next_event += 1;
                        }
                    }
                    state.sample_index(&mut rng)
                };
                if let Some(nm) = nm {
                    if nm.p_ro > 0.0 {
                        for q in 0..n {
                            if rng.random::<f64>() < nm.p_ro {
                                idx ^= 1 << (n - 1 - q);
                            }
                        }
                    }
                }
                *map.entry(idx).or_insert(0) += 1;
                map
            })
            .reduce(HashMap::new, merge_count_maps)
    } else {
        let mut scratch = Circuit::new(n, circuit.num_clbits().max(n));
        for op in &ops {
            scratch
                .push(op.clone())
                .map_err(SimError::Circuit)?;
        }
        let scratch = &scratch;
        (0..shots)
            .into_par_iter()
            .fold(HashMap::<u64, u64>::new, |mut map, shot| {
                let mut rng = derive_rng(seed, &[shot]);
                let idx = run_trajectory(scratch, &mut rng, nm)
                    .expect("validated circuit with full measurement coverage");
                *map.entry(idx).or_insert(0) += 1;
                map
            })
            .reduce(HashMap::new, merge_count_maps)
    };

    let counts: BTreeMap<String, u64> = merged
        .into_iter()
        .map(|(idx, c)| (index_to_bitstring(idx, n), c))
        .collect();
    Counts::from_map(n, counts)
}

fn merge_count_maps(mut a: HashMap<u64, u64>, b: HashMap<u64, u64>) -> HashMap<u64, u64> {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}
