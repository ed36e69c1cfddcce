//! Wire cutting: fragmentation, cut decompositions, and reconstruction.
//!
//! [`fragment`] splits a circuit at its cut markers into independently
//! runnable fragments. Each cut turns one wire into an upstream stub that
//! gets measured and a downstream stub that gets freshly prepared; the
//! strategies in [`pauli`] and [`randomized`] choose those measurements and
//! preparations and recombine the per-fragment statistics into a (quasi)
//! distribution for the original circuit.

pub mod clifford;
mod join;
pub mod pauli;
pub mod randomized;

pub use clifford::{clifford_element, clifford_group_1q, CLIFFORD_1Q_SIZE};
pub use pauli::{
    enumerate_pauli_configs, execute_pauli_configs_exact, execute_pauli_configs_sampled,
    pauli_config_count, reconstruct_pauli, PauliRunConfig, PauliTerm, PauliTermTable,
};
pub use randomized::{
    randomized_exact_distribution, run_randomized_cut, sample_channel_choice, ChannelChoice,
    CutChannel, CutVariant,
};

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Mat2, Operation, PrepState};
use crate::sim::{OutcomeWeights, SimError};

#[derive(Debug, Error)]
pub enum WirecutError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("stitching graph has a cycle through cut {cut_id}")]
    CyclicStitching { cut_id: usize },
    #[error("fragment {fragment} has {qubits} qubits, exceeding the device limit of {limit}")]
    FragmentTooLarge {
        fragment: usize,
        qubits: usize,
        limit: usize,
    },
    #[error(
        "cut {cut_id} on qubit {qubit} comes after that wire's final measurement; \
         move the cut before the measurement"
    )]
    CutAfterMeasurement { cut_id: usize, qubit: usize },
    #[error("circuit has no cut markers")]
    NoCuts,
    #[error("qubit {qubit} is never measured; reconstruction would be undefined")]
    UnmeasuredWire { qubit: usize },
    #[error("clifford index {index} out of range (group has {size} elements)")]
    BadCliffordIndex { index: usize, size: usize },
    #[error("need at least one sample")]
    NoSamples,
    #[error("shot plan has {got} entries, expected {expected}")]
    ShotPlanMismatch { expected: usize, got: usize },
    #[error("quasi-probability for outcome `{key}` is not finite")]
    NonFiniteWeight { key: String },
    #[error("outcome key `{key}` is not a bitstring of length {bits}")]
    BadOutcomeKey { key: String, bits: usize },
    #[error("all quasi-probability mass ({mass}) was clipped; nothing to normalize")]
    AllMassClipped { mass: f64 },
}

/// Measurement basis for the Pauli-basis strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MeasBasis {
    Z,
    X,
    Y,
}

impl MeasBasis {
    pub const ALL: [MeasBasis; 3] = [MeasBasis::Z, MeasBasis::X, MeasBasis::Y];

    pub fn name(self) -> &'static str {
        match self {
            MeasBasis::Z => "Z",
            MeasBasis::X => "X",
            MeasBasis::Y => "Y",
        }
    }
}

/// How to terminate one out-boundary wire when instantiating a fragment.
#[derive(Clone, Debug)]
pub enum OutSetting {
    /// Rotate into the basis, then measure.
    Basis(MeasBasis),
    /// Apply the unitary, then measure in the computational basis.
    Unitary(Mat2),
    /// Plain computational-basis measurement.
    Computational,
}

/// How to initialize one in-boundary wire.
#[derive(Clone, Debug)]
pub enum InSetting {
    Prep(PrepState),
    /// Prepare the state, then apply the unitary.
    PrepThenUnitary(PrepState, Mat2),
}

/// A fragment-local wire that carries a cut boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Boundary {
    pub cut_id: usize,
    pub local_qubit: usize,
}

/// Position of a wire inside a fragment set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FragmentBit {
    pub fragment: usize,
    pub local_qubit: usize,
}

/// One cut connecting an upstream out-boundary to a downstream in-boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutEdge {
    pub cut_id: usize,
    pub upstream: FragmentBit,
    pub downstream: FragmentBit,
}

/// A connected piece of the cut circuit.
#[derive(Clone, Debug)]
pub struct Fragment {
    /// The fragment's operations over its local wires. Boundary
    /// measurements and preparations are not included; they are added per
    /// run by [`Fragment::instantiate`].
    pub circuit: Circuit,
    /// Wires that end at a cut, sorted by cut id.
    pub out_boundaries: Vec<Boundary>,
    /// Wires that start at a cut, sorted by cut id.
    pub in_boundaries: Vec<Boundary>,
    /// For each local wire, the original wire and the segment index on it.
    pub origins: Vec<(usize, usize)>,
}

impl Fragment {
    pub fn num_qubits(&self) -> usize {
        self.circuit.num_qubits()
    }

    /// Builds the executable circuit for one run: in-boundary preparations
    /// are prepended (in `in_boundaries` order), the fragment body follows,
    /// and each out-boundary gets its basis change or unitary plus a
    /// terminal measurement into a fresh classical bit.
    pub fn instantiate(&self, outs: &[OutSetting], ins: &[InSetting]) -> Circuit {
        assert_eq!(outs.len(), self.out_boundaries.len(), "out settings");
        assert_eq!(ins.len(), self.in_boundaries.len(), "in settings");
        let base_clbits = self.circuit.num_clbits();
        let mut c = Circuit::new(self.num_qubits(), base_clbits + outs.len());
        for (boundary, setting) in self.in_boundaries.iter().zip(ins) {
            match setting {
                InSetting::Prep(state) => {
                    c.prepare(boundary.local_qubit, *state);
                }
                InSetting::PrepThenUnitary(state, u) => {
                    c.prepare(boundary.local_qubit, *state);
                    c.u1q(boundary.local_qubit, *u);
                }
            }
        }
        for op in self.circuit.ops() {
            c.push(op.clone()).expect("fragment op fits its registers");
        }
        for (j, (boundary, setting)) in self.out_boundaries.iter().zip(outs).enumerate() {
            let q = boundary.local_qubit;
            match setting {
                OutSetting::Basis(MeasBasis::Z) | OutSetting::Computational => {}
                OutSetting::Basis(MeasBasis::X) => {
                    c.h(q);
                }
                OutSetting::Basis(MeasBasis::Y) => {
                    // S^dagger then H sends the +i eigenstate to |0>.
                    c.rz(q, -std::f64::consts::FRAC_PI_2);
                    c.h(q);
                }
                OutSetting::Unitary(u) => {
                    c.u1q(q, *u);
                }
            }
            c.measure(q, base_clbits + j);
        }
        c
    }
}

/// The result of cutting: fragments in topological stitching order.
#[derive(Clone, Debug)]
pub struct FragmentSet {
    pub fragments: Vec<Fragment>,
    /// All cuts, sorted by cut id. Channel choices and term tables index
    /// cuts by position in this list.
    pub cuts: Vec<CutEdge>,
    /// For each original qubit, the fragment wire whose measurement record
    /// provides that qubit's outcome (`None` when the wire is never
    /// measured).
    pub outputs: Vec<Option<FragmentBit>>,
    pub num_qubits: usize,
}

impl FragmentSet {
    pub fn num_cuts(&self) -> usize {
        self.cuts.len()
    }

    /// Position in `cuts` of the given cut id.
    pub(crate) fn cut_index(&self, cut_id: usize) -> usize {
        self.cuts
            .binary_search_by_key(&cut_id, |c| c.cut_id)
            .expect("boundary cut id present in cut list")
    }

    pub(crate) fn require_outputs(&self) -> Result<Vec<FragmentBit>, WirecutError> {
        self.outputs
            .iter()
            .enumerate()
            .map(|(q, o)| o.ok_or(WirecutError::UnmeasuredWire { qubit: q }))
            .collect()
    }
}

/// Splits `circuit` at its cut markers into connected fragments.
///
/// Wires are divided into segments at each marker; operations connect the
/// segments they touch, and each connected component becomes a fragment.
/// Fragments are ordered so that every cut's upstream fragment comes before
/// its downstream fragment, and a cycle in that relation is an error. When
/// `device_limit` is given, any fragment with more qubits than the limit is
/// an error. A circuit without markers yields a single fragment containing
/// the circuit unchanged.
pub fn fragment(
    circuit: &Circuit,
    device_limit: Option<usize>,
) -> Result<FragmentSet, WirecutError> {
    circuit.validate()?;
    let n = circuit.num_qubits();

    // Wire -> arena index of its current segment; arena entries are
    // (wire, segment index on that wire).
    let mut segments: Vec<(usize, usize)> = (0..n).map(|q| (q, 0)).collect();
    let mut current: Vec<usize> = (0..n).collect();
    let mut next_seg_on_wire: Vec<usize> = vec![1; n];

    // For each op, the segments its qubits sit on (aligned with
    // `op.qubits()`); cut markers record nothing.
    let mut op_segments: Vec<Vec<usize>> = Vec::with_capacity(circuit.ops().len());
    let mut cut_records: Vec<(usize, usize, usize)> = Vec::new();
    let mut last_measure_seg: Vec<Option<usize>> = vec![None; n];

    for op in circuit.ops() {
        match op {
            Operation::Cut { cut_id, qubit } => {
                let upstream = current[*qubit];
                let downstream = segments.len();
                segments.push((*qubit, next_seg_on_wire[*qubit]));
                next_seg_on_wire[*qubit] += 1;
                current[*qubit] = downstream;
                cut_records.push((*cut_id, upstream, downstream));
                op_segments.push(Vec::new());
            }
            _ => {
                let segs: Vec<usize> = op.qubits().iter().map(|&q| current[q]).collect();
                if let Operation::Measure { qubit, .. } = op {
                    last_measure_seg[*qubit] = Some(current[*qubit]);
                }
                op_segments.push(segs);
            }
        }
    }

    // Without markers the circuit passes through whole, even when its
    // qubits never interact.
    if cut_records.is_empty() {
        if let Some(limit) = device_limit {
            if n > limit {
                return Err(WirecutError::FragmentTooLarge {
                    fragment: 0,
                    qubits: n,
                    limit,
                });
            }
        }
        let outputs = last_measure_seg
            .iter()
            .map(|seg| {
                seg.map(|s| FragmentBit {
                    fragment: 0,
                    local_qubit: segments[s].0,
                })
            })
            .collect();
        return Ok(FragmentSet {
            fragments: vec![Fragment {
                circuit: circuit.clone(),
                out_boundaries: Vec::new(),
                in_boundaries: Vec::new(),
                origins: (0..n).map(|q| (q, 0)).collect(),
            }],
            cuts: Vec::new(),
            outputs,
            num_qubits: n,
        });
    }

    // Union segments joined by multi-qubit gates. Barriers are scheduling
    // hints and do not connect anything.
    let mut uf = UnionFind::new(segments.len());
    for (op, segs) in circuit.ops().iter().zip(&op_segments) {
        if let Operation::Gate(g) = op {
            if g.qubits().len() == 2 {
                uf.union(segs[0], segs[1]);
            }
        }
    }

    // A cut whose two sides land in the same component loops on itself.
    for &(cut_id, up, down) in &cut_records {
        if uf.find(up) == uf.find(down) {
            return Err(WirecutError::CyclicStitching { cut_id });
        }
    }

    // Components keyed by root, ordered by their smallest (wire, segment).
    let mut comp_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut comp_keys: Vec<(usize, usize)> = Vec::new();
    let mut comp_segments: Vec<Vec<usize>> = Vec::new();
    let mut order: Vec<usize> = (0..segments.len()).collect();
    order.sort_by_key(|&s| segments[s]);
    for s in order {
        let root = uf.find(s);
        let comp = *comp_of_root.entry(root).or_insert_with(|| {
            comp_keys.push(segments[s]);
            comp_segments.push(Vec::new());
            comp_keys.len() - 1
        });
        comp_segments[comp].push(s);
    }
    let num_comps = comp_keys.len();

    // Topological order over components with deterministic tie-breaking by
    // component key.
    let mut indegree = vec![0usize; num_comps];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for &(_, up, down) in &cut_records {
        let a = comp_of_root[&uf.find(up)];
        let b = comp_of_root[&uf.find(down)];
        edges.push((a, b));
        indegree[b] += 1;
    }
    let mut ready: BTreeSet<((usize, usize), usize)> = (0..num_comps)
        .filter(|&c| indegree[c] == 0)
        .map(|c| (comp_keys[c], c))
        .collect();
    let mut topo: Vec<usize> = Vec::with_capacity(num_comps);
    while let Some(&(key, comp)) = ready.iter().next() {
        ready.remove(&(key, comp));
        topo.push(comp);
        for &(a, b) in &edges {
            if a == comp {
                indegree[b] -= 1;
                if indegree[b] == 0 {
                    ready.insert((comp_keys[b], b));
                }
            }
        }
    }
    if topo.len() < num_comps {
        let unplaced: HashSet<usize> = (0..num_comps).filter(|c| !topo.contains(c)).collect();
        let cut_id = cut_records
            .iter()
            .find(|&&(_, up, down)| {
                unplaced.contains(&comp_of_root[&uf.find(up)])
                    && unplaced.contains(&comp_of_root[&uf.find(down)])
            })
            .map(|&(id, ..)| id)
            .unwrap_or(0);
        return Err(WirecutError::CyclicStitching { cut_id });
    }

    // Fragment index per component, and local wire index per segment.
    let mut frag_of_comp = vec![0usize; num_comps];
    for (frag, &comp) in topo.iter().enumerate() {
        frag_of_comp[comp] = frag;
    }
    let mut local_of_seg: Vec<(usize, usize)> = vec![(0, 0); segments.len()];
    let mut frag_origins: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_comps];
    for (frag, &comp) in topo.iter().enumerate() {
        // comp_segments is already sorted by (wire, segment index).
        for (local, &s) in comp_segments[comp].iter().enumerate() {
            local_of_seg[s] = (frag, local);
            frag_origins[frag].push(segments[s]);
        }
    }

    // Second pass: route each op into its fragment with remapped wires.
    let mut frag_circuits: Vec<Circuit> = topo
        .iter()
        .map(|&comp| Circuit::new(comp_segments[comp].len(), circuit.num_clbits()))
        .collect();
    for (op, segs) in circuit.ops().iter().zip(&op_segments) {
        match op {
            Operation::Cut { .. } => {}
            Operation::Barrier { .. } => {
                let mut by_frag: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
                for &s in segs {
                    let (frag, local) = local_of_seg[s];
                    by_frag.entry(frag).or_default().push(local);
                }
                for (frag, qubits) in by_frag {
                    frag_circuits[frag]
                        .push(Operation::Barrier { qubits })
                        .expect("remapped barrier fits");
                }
            }
            _ => {
                let (frag, _) = local_of_seg[segs[0]];
                let remapped = remap_op(op, segs, &local_of_seg);
                frag_circuits[frag].push(remapped).expect("remapped op fits");
            }
        }
    }

    // Boundaries per fragment, in cut-id order.
    let mut cuts_sorted = cut_records.clone();
    cuts_sorted.sort_by_key(|&(id, ..)| id);
    let mut out_bnd: Vec<Vec<Boundary>> = vec![Vec::new(); num_comps];
    let mut in_bnd: Vec<Vec<Boundary>> = vec![Vec::new(); num_comps];
    let mut cuts: Vec<CutEdge> = Vec::new();
    for &(cut_id, up, down) in &cuts_sorted {
        let (uf_frag, u_local) = local_of_seg[up];
        let (df_frag, d_local) = local_of_seg[down];
        out_bnd[uf_frag].push(Boundary {
            cut_id,
            local_qubit: u_local,
        });
        in_bnd[df_frag].push(Boundary {
            cut_id,
            local_qubit: d_local,
        });
        cuts.push(CutEdge {
            cut_id,
            upstream: FragmentBit {
                fragment: uf_frag,
                local_qubit: u_local,
            },
            downstream: FragmentBit {
                fragment: df_frag,
                local_qubit: d_local,
            },
        });
    }

    let outputs: Vec<Option<FragmentBit>> = last_measure_seg
        .iter()
        .map(|seg| {
            seg.map(|s| {
                let (fragment, local_qubit) = local_of_seg[s];
                FragmentBit {
                    fragment,
                    local_qubit,
                }
            })
        })
        .collect();

    // A load-bearing measurement record must not be clobbered by a boundary
    // measurement appended to the same wire at instantiation time.
    for (q, output) in outputs.iter().enumerate() {
        if let Some(bit) = output {
            if let Some(b) = out_bnd[bit.fragment]
                .iter()
                .find(|b| b.local_qubit == bit.local_qubit)
            {
                return Err(WirecutError::CutAfterMeasurement {
                    cut_id: b.cut_id,
                    qubit: q,
                });
            }
        }
    }

    let fragments: Vec<Fragment> = frag_circuits
        .into_iter()
        .enumerate()
        .map(|(frag, circuit)| Fragment {
            circuit,
            out_boundaries: std::mem::take(&mut out_bnd[frag]),
            in_boundaries: std::mem::take(&mut in_bnd[frag]),
            origins: std::mem::take(&mut frag_origins[frag]),
        })
        .collect();

    let total: usize = fragments.iter().map(|f| f.num_qubits()).sum();
    assert_eq!(
        total,
        n + cuts.len(),
        "fragment wires must count original wires plus one per cut"
    );

    if let Some(limit) = device_limit {
        for (i, f) in fragments.iter().enumerate() {
            if f.num_qubits() > limit {
                return Err(WirecutError::FragmentTooLarge {
                    fragment: i,
                    qubits: f.num_qubits(),
                    limit,
                });
            }
        }
    }

    Ok(FragmentSet {
        fragments,
        cuts,
        outputs,
        num_qubits: n,
    })
}

fn remap_op(op: &Operation, segs: &[usize], local_of_seg: &[(usize, usize)]) -> Operation {
    use crate::circuit::Gate;
    let local = |slot: usize| local_of_seg[segs[slot]].1;
    match op {
        Operation::Gate(g) => Operation::Gate(match g {
            Gate::H(_) => Gate::H(local(0)),
            Gate::X(_) => Gate::X(local(0)),
            Gate::Y(_) => Gate::Y(local(0)),
            Gate::Z(_) => Gate::Z(local(0)),
            Gate::Rx(_, a) => Gate::Rx(local(0), *a),
            Gate::Ry(_, a) => Gate::Ry(local(0), *a),
            Gate::Rz(_, a) => Gate::Rz(local(0), *a),
            Gate::U1q(_, m) => Gate::U1q(local(0), *m),
            Gate::Cx(..) => Gate::Cx(local(0), local(1)),
        }),
        Operation::Measure { clbit, .. } => Operation::Measure {
            qubit: local(0),
            clbit: *clbit,
        },
        Operation::Reset { .. } => Operation::Reset { qubit: local(0) },
        Operation::Prepare { state, .. } => Operation::Prepare {
            qubit: local(0),
            state: *state,
        },
        Operation::Barrier { .. } | Operation::Cut { .. } => {
            unreachable!("barriers and cuts are routed separately")
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Signed weights over outcome bitstrings, as produced by cut
/// reconstruction. The mass (sum of weights) converges to 1 but individual
/// entries may be negative or exceed 1.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiDistribution {
    bits: usize,
    weights: BTreeMap<String, f64>,
}

impl QuasiDistribution {
    pub fn new(bits: usize, weights: BTreeMap<String, f64>) -> Result<QuasiDistribution, WirecutError> {
        for (key, &w) in &weights {
            if key.len() != bits || !key.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(WirecutError::BadOutcomeKey {
                    key: key.clone(),
                    bits,
                });
            }
            if !w.is_finite() {
                return Err(WirecutError::NonFiniteWeight { key: key.clone() });
            }
        }
        Ok(QuasiDistribution { bits, weights })
    }

    pub fn get(&self, key: &str) -> f64 {
        self.weights.get(key).copied().unwrap_or(0.0)
    }

    pub fn weights(&self) -> &BTreeMap<String, f64> {
        &self.weights
    }

    /// Sum of all weights; 1 for an exact reconstruction, near 1 for a
    /// converged sampled one.
    pub fn mass(&self) -> f64 {
        self.weights.values().sum()
    }
}

impl OutcomeWeights for QuasiDistribution {
    fn bits(&self) -> usize {
        self.bits
    }

    fn weights(&self) -> &BTreeMap<String, f64> {
        &self.weights
    }
}

/// Clips negative weights to zero and renormalizes the remainder into a
/// proper distribution. Errors when nothing positive remains.
pub fn clip_and_normalize(
    quasi: &QuasiDistribution,
) -> Result<crate::sim::Distribution, WirecutError> {
    let positive: BTreeMap<String, f64> = quasi
        .weights()
        .iter()
        .filter(|&(_, &w)| w > 0.0)
        .map(|(k, &w)| (k.clone(), w))
        .collect();
    let total: f64 = positive.values().sum();
    if total <= 0.0 {
        return Err(WirecutError::AllMassClipped { mass: quasi.mass() });
    }
    let probs: BTreeMap<String, f64> = positive
        .into_iter()
        .map(|(k, w)| (k, w / total))
        .collect();
    Ok(crate::sim::Distribution::from_probs(quasi.bits(), probs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{ghz_cut_circuit, Gate};

    fn fig1_style_cut() -> Circuit {
        // Entangle 0-1, cut wire 1, entangle 1-2.
        let mut c = Circuit::new(3, 3);
        c.h(0).cx(0, 1);
        c.push(Operation::Cut { cut_id: 0, qubit: 1 }).unwrap();
        c.cx(1, 2).measure_all();
        c
    }

    #[test]
    fn one_cut_splits_three_qubits_into_two_pairs() {
        let frags = fragment(&fig1_style_cut(), None).unwrap();
        assert_eq!(frags.fragments.len(), 2);
        assert_eq!(frags.fragments[0].num_qubits(), 2);
        assert_eq!(frags.fragments[1].num_qubits(), 2);
        assert_eq!(frags.num_cuts(), 1);
        // Upstream holds wires 0 and 1's first segment.
        assert_eq!(frags.fragments[0].origins, vec![(0, 0), (1, 0)]);
        assert_eq!(frags.fragments[1].origins, vec![(1, 1), (2, 0)]);
        let cut = frags.cuts[0];
        assert_eq!(cut.upstream.fragment, 0);
        assert_eq!(cut.downstream.fragment, 1);
        // Wire 1's outcome comes from the downstream fragment.
        assert_eq!(
            frags.outputs[1],
            Some(FragmentBit {
                fragment: 1,
                local_qubit: 0
            })
        );
    }

    #[test]
    fn ghz_cut_gives_three_plus_three() {
        let frags = fragment(&ghz_cut_circuit(5, 11).unwrap(), None).unwrap();
        let sizes: Vec<usize> = frags.fragments.iter().map(|f| f.num_qubits()).collect();
        assert_eq!(sizes, vec![3, 3]);
        assert_eq!(frags.num_cuts(), 1);
    }

    #[test]
    fn no_cuts_is_identity() {
        let mut c = Circuit::new(3, 3);
        c.h(0).cx(0, 1).h(2).measure_all();
        let frags = fragment(&c, None).unwrap();
        assert_eq!(frags.fragments.len(), 1);
        assert_eq!(frags.fragments[0].circuit, c);
        assert!(frags.cuts.is_empty());
    }

    #[test]
    fn wire_counts_add_one_per_cut() {
        let c = fig1_style_cut();
        let frags = fragment(&c, None).unwrap();
        let total: usize = frags.fragments.iter().map(|f| f.num_qubits()).sum();
        assert_eq!(total, c.num_qubits() + frags.num_cuts());
    }

    #[test]
    fn device_limit_rejects_large_fragments() {
        let c = ghz_cut_circuit(9, 3).unwrap();
        assert!(fragment(&c, Some(5)).is_ok());
        let err = fragment(&c, Some(4)).unwrap_err();
        assert!(matches!(err, WirecutError::FragmentTooLarge { limit: 4, .. }));
    }

    #[test]
    fn interaction_spanning_a_cut_back_and_forth_is_cyclic() {
        let mut c = Circuit::new(2, 2);
        c.cx(0, 1);
        c.push(Operation::Cut { cut_id: 0, qubit: 1 }).unwrap();
        c.cx(0, 1).measure_all();
        let err = fragment(&c, None).unwrap_err();
        assert!(matches!(err, WirecutError::CyclicStitching { cut_id: 0 }));
    }

    #[test]
    fn cut_after_final_measurement_is_rejected() {
        let mut c = Circuit::new(2, 2);
        c.h(0).cx(0, 1).measure(0, 0).measure(1, 1);
        c.push(Operation::Cut { cut_id: 0, qubit: 0 }).unwrap();
        let err = fragment(&c, None).unwrap_err();
        assert!(matches!(
            err,
            WirecutError::CutAfterMeasurement { cut_id: 0, qubit: 0 }
        ));
    }

    #[test]
    fn cut_before_terminal_measure_gives_measure_only_fragment() {
        let mut c = Circuit::new(2, 2);
        c.h(0).cx(0, 1).measure(0, 0);
        c.push(Operation::Cut { cut_id: 0, qubit: 1 }).unwrap();
        c.measure(1, 1);
        let frags = fragment(&c, None).unwrap();
        assert_eq!(frags.fragments.len(), 2);
        let down = &frags.fragments[1];
        assert_eq!(down.num_qubits(), 1);
        assert_eq!(down.circuit.ops().len(), 1);
        assert!(matches!(down.circuit.ops()[0], Operation::Measure { .. }));
    }

    #[test]
    fn instantiate_dresses_boundaries() {
        let frags = fragment(&fig1_style_cut(), None).unwrap();
        let up = &frags.fragments[0];
        let inst = up.instantiate(&[OutSetting::Basis(MeasBasis::X)], &[]);
        // Body (h, cx, measure wire 0) then H basis change then boundary measure.
        let ops = inst.ops();
        assert!(matches!(ops[ops.len() - 2], Operation::Gate(Gate::H(1))));
        assert!(matches!(
            ops[ops.len() - 1],
            Operation::Measure { qubit: 1, clbit } if clbit == up.circuit.num_clbits()
        ));

        let down = &frags.fragments[1];
        let inst = down.instantiate(&[], &[InSetting::Prep(PrepState::Plus)]);
        assert!(matches!(
            inst.ops()[0],
            Operation::Prepare {
                qubit: 0,
                state: PrepState::Plus
            }
        ));
    }

    #[test]
    fn adjacent_cuts_make_an_empty_middle_fragment() {
        let mut c = Circuit::new(2, 2);
        c.h(0).cx(0, 1);
        c.push(Operation::Cut { cut_id: 0, qubit: 1 }).unwrap();
        c.push(Operation::Cut { cut_id: 1, qubit: 1 }).unwrap();
        c.cx(1, 0).measure_all();
        let err = fragment(&c, None);
        // Wire 0 appears on both sides of the cut pair, so this is cyclic.
        assert!(err.is_err());

        let mut c2 = Circuit::new(3, 3);
        c2.h(0).cx(0, 1);
        c2.push(Operation::Cut { cut_id: 0, qubit: 1 }).unwrap();
        c2.push(Operation::Cut { cut_id: 1, qubit: 1 }).unwrap();
        c2.cx(1, 2).measure_all();
        let frags = fragment(&c2, None).unwrap();
        assert_eq!(frags.fragments.len(), 3);
        let middle = &frags.fragments[1];
        assert_eq!(middle.num_qubits(), 1);
        assert!(middle.circuit.ops().is_empty());
        assert_eq!(middle.in_boundaries.len(), 1);
        assert_eq!(middle.out_boundaries.len(), 1);
    }

    #[test]
    fn quasi_distribution_validates_and_sums() {
        let mut m = BTreeMap::new();
        m.insert("00".into(), 1.2);
        m.insert("11".into(), -0.2);
        let q = QuasiDistribution::new(2, m).unwrap();
        assert!((q.mass() - 1.0).abs() < 1e-12);
        let mut bad = BTreeMap::new();
        bad.insert("0".into(), f64::NAN);
        assert!(QuasiDistribution::new(1, bad).is_err());
    }

    #[test]
    fn clip_and_normalize_cases() {
        let mut m = BTreeMap::new();
        m.insert("00".into(), 1.2);
        m.insert("11".into(), -0.2);
        let d = clip_and_normalize(&QuasiDistribution::new(2, m).unwrap()).unwrap();
        assert_eq!(d.get("00"), 1.0);
        assert_eq!(d.get("11"), 0.0);

        let mut m = BTreeMap::new();
        m.insert("00".into(), 0.6);
        m.insert("11".into(), 0.6);
        let d = clip_and_normalize(&QuasiDistribution::new(2, m).unwrap()).unwrap();
        assert_eq!(d.get("00"), 0.5);
        assert_eq!(d.get("11"), 0.5);

        let mut m = BTreeMap::new();
        m.insert("00".into(), -0.5);
        m.insert("11".into(), 0.0);
        let err = clip_and_normalize(&QuasiDistribution::new(2, m).unwrap()).unwrap_err();
        assert!(matches!(err, WirecutError::AllMassClipped { .. }));
    }
}
