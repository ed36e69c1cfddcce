//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered list of [`Operation`]s over `num_qubits` wires
//! and `num_clbits` classical bits. Cut markers live inline in the operation
//! list as [`Operation::Cut`]; they are metadata for the wire-cutting pass and
//! are ignored by direct simulation.
//!
//! Bitstring convention used throughout the crate: qubit 0 is the leftmost
//! character of an outcome string, so `"10"` means qubit 0 read 1 and qubit 1
//! read 0.

mod builders;
mod matrix;
pub mod random;

pub use builders::{ghz_benchmark_circuit, ghz_benchmark_circuit_zeroed, ghz_cut_circuit};
pub use matrix::{Mat2, PauliAxis, C64};

use thiserror::Error;

/// States accepted by `prepare` instructions and produced by cut insertion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrepState {
    /// Computational |0>.
    Zero,
    /// Computational |1>.
    One,
    /// X eigenstate (|0> + |1>)/sqrt(2).
    Plus,
    /// Y eigenstate (|0> + i|1>)/sqrt(2).
    IState,
}

impl PrepState {
    pub const ALL: [PrepState; 4] = [
        PrepState::Zero,
        PrepState::One,
        PrepState::Plus,
        PrepState::IState,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PrepState::Zero => "zero",
            PrepState::One => "one",
            PrepState::Plus => "plus",
            PrepState::IState => "i_state",
        }
    }

    pub fn from_name(name: &str) -> Option<PrepState> {
        match name {
            "zero" => Some(PrepState::Zero),
            "one" => Some(PrepState::One),
            "plus" => Some(PrepState::Plus),
            "i_state" => Some(PrepState::IState),
            _ => None,
        }
    }
}

/// Unitary gates understood by the simulator.
///
/// Angles are in radians. `Rz(theta)` applies `diag(exp(-i theta/2),
/// exp(+i theta/2))`; `Rx` and `Ry` follow the same half-angle convention.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    /// Controlled-X with explicit (control, target).
    Cx(usize, usize),
    /// Arbitrary single-qubit unitary.
    U1q(usize, Mat2),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::X(_) => "x",
            Gate::Y(_) => "y",
            Gate::Z(_) => "z",
            Gate::Rx(..) => "rx",
            Gate::Ry(..) => "ry",
            Gate::Rz(..) => "rz",
            Gate::Cx(..) => "cx",
            Gate::U1q(..) => "u1q",
        }
    }

    /// Qubits the gate acts on, control first for `Cx`.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => vec![*q],
            Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) => vec![*q],
            Gate::U1q(q, _) => vec![*q],
            Gate::Cx(c, t) => vec![*c, *t],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            Gate::Rx(_, a) | Gate::Ry(_, a) | Gate::Rz(_, a) => Some(*a),
            _ => None,
        }
    }

    /// 2x2 matrix of a single-qubit gate; `None` for `Cx`.
    pub fn matrix(&self) -> Option<Mat2> {
        match self {
            Gate::H(_) => Some(Mat2::h()),
            Gate::X(_) => Some(Mat2::x()),
            Gate::Y(_) => Some(Mat2::y()),
            Gate::Z(_) => Some(Mat2::z()),
            Gate::Rx(_, a) => Some(Mat2::rx(*a)),
            Gate::Ry(_, a) => Some(Mat2::ry(*a)),
            Gate::Rz(_, a) => Some(Mat2::rz(*a)),
            Gate::U1q(_, m) => Some(*m),
            Gate::Cx(..) => None,
        }
    }
}

/// One step of a circuit.
#[derive(Clone, Debug, PartialEq)]
pub enum Operation {
    Gate(Gate),
    /// Projective Z measurement recording the outcome into a classical bit.
    Measure { qubit: usize, clbit: usize },
    /// Measure and discard, returning the wire to |0>.
    Reset { qubit: usize },
    /// Reset followed by rotation into `state`.
    Prepare { qubit: usize, state: PrepState },
    /// Wire-cut marker between the preceding and following operations on `qubit`.
    Cut { cut_id: usize, qubit: usize },
    /// Scheduling hint; no effect on simulation.
    Barrier { qubits: Vec<usize> },
}

impl Operation {
    /// Qubits the operation touches.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Operation::Gate(g) => g.qubits(),
            Operation::Measure { qubit, .. }
            | Operation::Reset { qubit }
            | Operation::Prepare { qubit, .. }
            | Operation::Cut { qubit, .. } => vec![*qubit],
            Operation::Barrier { qubits } => qubits.clone(),
        }
    }
}

/// A cut marker's location: wire, position in the operation list, and id.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CutPoint {
    pub cut_id: usize,
    pub qubit: usize,
    /// Index into [`Circuit::ops`] of the marker itself.
    pub op_index: usize,
}

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("qubit index {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("classical bit index {clbit} out of range for {num_clbits} bits")]
    ClbitOutOfRange { clbit: usize, num_clbits: usize },
    #[error("two-qubit gate uses qubit {qubit} twice")]
    DuplicateQubit { qubit: usize },
    #[error("barrier lists qubit {qubit} twice")]
    DuplicateBarrierQubit { qubit: usize },
    #[error("gate angle is not finite")]
    NonFiniteAngle,
    #[error("u1q matrix deviates from unitarity by {deviation:.3e} (tolerance {tolerance:.1e})")]
    NonUnitaryMatrix { deviation: f64, tolerance: f64 },
    #[error("cut id {cut_id} appears more than once")]
    DuplicateCutId { cut_id: usize },
    #[error("operation index {index} out of range for {len} operations")]
    OpIndexOutOfRange { index: usize, len: usize },
    #[error("GHZ benchmark circuit needs at least {min} qubits, got {got}")]
    GhzTooSmall { got: usize, min: usize },
}

/// Tolerance for accepting a `u1q` matrix as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// An ordered operation list over fixed quantum and classical registers.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    num_clbits: usize,
    ops: Vec<Operation>,
}

impl Circuit {
    pub fn new(num_qubits: usize, num_clbits: usize) -> Circuit {
        Circuit {
            num_qubits,
            num_clbits,
            ops: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    /// Appends `op` after validating it against the registers and existing
    /// cut ids.
    pub fn push(&mut self, op: Operation) -> Result<(), CircuitError> {
        self.check_op(&op)?;
        if let Operation::Cut { cut_id, .. } = op {
            if self
                .ops
                .iter()
                .any(|o| matches!(o, Operation::Cut { cut_id: c, .. } if *c == cut_id))
            {
                return Err(CircuitError::DuplicateCutId { cut_id });
            }
        }
        self.ops.push(op);
        Ok(())
    }

    fn check_qubit(&self, qubit: usize) -> Result<(), CircuitError> {
        if qubit >= self.num_qubits {
            return Err(CircuitError::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn check_op(&self, op: &Operation) -> Result<(), CircuitError> {
        match op {
            Operation::Gate(g) => {
                for q in g.qubits() {
                    self.check_qubit(q)?;
                }
                if let Gate::Cx(c, t) = g {
                    if c == t {
                        return Err(CircuitError::DuplicateQubit { qubit: *c });
                    }
                }
                if let Some(a) = g.angle() {
                    if !a.is_finite() {
                        return Err(CircuitError::NonFiniteAngle);
                    }
                }
                if let Gate::U1q(_, m) = g {
                    let dev = m.unitarity_deviation();
                    if !(dev <= UNITARY_TOL) {
                        return Err(CircuitError::NonUnitaryMatrix {
                            deviation: dev,
                            tolerance: UNITARY_TOL,
                        });
                    }
                }
                Ok(())
            }
            Operation::Measure { qubit, clbit } => {
                self.check_qubit(*qubit)?;
                if *clbit >= self.num_clbits {
                    return Err(CircuitError::ClbitOutOfRange {
                        clbit: *clbit,
                        num_clbits: self.num_clbits,
                    });
                }
                Ok(())
            }
            Operation::Reset { qubit }
            | Operation::Prepare { qubit, .. }
            | Operation::Cut { qubit, .. } => self.check_qubit(*qubit),
            Operation::Barrier { qubits } => {
                let mut seen = std::collections::HashSet::new();
                for &q in qubits {
                    self.check_qubit(q)?;
                    if !seen.insert(q) {
                        return Err(CircuitError::DuplicateBarrierQubit { qubit: q });
                    }
                }
                Ok(())
            }
        }
    }

    /// Re-checks every operation plus whole-circuit constraints. `push`
    /// already enforces these, so this only matters for circuits assembled
    /// by direct field manipulation inside the crate.
    pub fn validate(&self) -> Result<(), CircuitError> {
        let mut cut_ids = std::collections::HashSet::new();
        for op in &self.ops {
            self.check_op(op)?;
            if let Operation::Cut { cut_id, .. } = op {
                if !cut_ids.insert(*cut_id) {
                    return Err(CircuitError::DuplicateCutId { cut_id: *cut_id });
                }
            }
        }
        Ok(())
    }

    /// All cut markers in operation order.
    pub fn cut_points(&self) -> Vec<CutPoint> {
        self.ops
            .iter()
            .enumerate()
            .filter_map(|(i, op)| match op {
                Operation::Cut { cut_id, qubit } => Some(CutPoint {
                    cut_id: *cut_id,
                    qubit: *qubit,
                    op_index: i,
                }),
                _ => None,
            })
            .collect()
    }

    pub fn num_cuts(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, Operation::Cut { .. }))
            .count()
    }

    /// Number of operations matching `pred`, e.g. counting gates by name.
    pub fn count_ops(&self, pred: impl Fn(&Operation) -> bool) -> usize {
        self.ops.iter().filter(|op| pred(op)).count()
    }

    /// True when every qubit is measured at least once.
    pub fn all_qubits_measured(&self) -> bool {
        let mut measured = vec![false; self.num_qubits];
        for op in &self.ops {
            if let Operation::Measure { qubit, .. } = op {
                measured[*qubit] = true;
            }
        }
        measured.iter().all(|&m| m)
    }

    // Builder conveniences for programmatic construction. These panic on a
    // register violation, which for generated circuits is a bug in the
    // generator; parsed or user-assembled circuits go through `push`.

    fn pushed(&mut self, op: Operation) -> &mut Circuit {
        self.push(op).expect("builder op must fit the registers");
        self
    }

    pub fn h(&mut self, q: usize) -> &mut Circuit {
        self.pushed(Operation::Gate(Gate::H(q)))
    }

    pub fn x(&mut self, q: usize) -> &mut Circuit {
        self.pushed(Operation::Gate(Gate::X(q)))
    }

    pub fn y(&mut self, q: usize) -> &mut Circuit {
        self.pushed(Operation::Gate(Gate::Y(q)))
    }

    pub fn z(&mut self, q: usize) -> &mut Circuit {
        self.pushed(Operation::Gate(Gate::Z(q)))
    }

    pub fn rx(&mut self, q: usize, theta: f64) -> &mut Circuit {
        self.pushed(Operation::Gate(Gate::Rx(q, theta)))
    }

    pub fn ry(&mut self, q: usize, theta: f64) -> &mut Circuit {
        self.pushed(Operation::Gate(Gate::Ry(q, theta)))
    }

    pub fn rz(&mut self, q: usize, theta: f64) -> &mut Circuit {
        self.pushed(Operation::Gate(Gate::Rz(q, theta)))
    }

    pub fn cx(&mut self, control: usize, target: usize) -> &mut Circuit {
        self.pushed(Operation::Gate(Gate::Cx(control, target)))
    }

    pub fn u1q(&mut self, q: usize, m: Mat2) -> &mut Circuit {
        self.pushed(Operation::Gate(Gate::U1q(q, m)))
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) -> &mut Circuit {
        self.pushed(Operation::Measure { qubit, clbit })
    }

    /// Measures qubit `i` into classical bit `i` for every qubit, growing the
    /// classical register if needed.
    pub fn measure_all(&mut self) -> &mut Circuit {
        if self.num_clbits < self.num_qubits {
            self.num_clbits = self.num_qubits;
        }
        for q in 0..self.num_qubits {
            self.pushed(Operation::Measure { qubit: q, clbit: q });
        }
        self
    }

    pub fn reset(&mut self, qubit: usize) -> &mut Circuit {
        self.pushed(Operation::Reset { qubit })
    }

    pub fn prepare(&mut self, qubit: usize, state: PrepState) -> &mut Circuit {
        self.pushed(Operation::Prepare { qubit, state })
    }

    pub fn barrier(&mut self, qubits: Vec<usize>) -> &mut Circuit {
        self.pushed(Operation::Barrier { qubits })
    }
}

/// Returns a copy of `circuit` with a cut marker on `qubit` inserted at
/// position `op_index` in the operation list (0 = before everything,
/// `ops.len()` = after everything). The marker gets the smallest unused
/// cut id.
pub fn insert_cut(circuit: &Circuit, qubit: usize, op_index: usize) -> Result<Circuit, CircuitError> {
    if qubit >= circuit.num_qubits {
        return Err(CircuitError::QubitOutOfRange {
            qubit,
            num_qubits: circuit.num_qubits,
        });
    }
    if op_index > circuit.ops.len() {
        return Err(CircuitError::OpIndexOutOfRange {
            index: op_index,
            len: circuit.ops.len(),
        });
    }
    let used: std::collections::HashSet<usize> = circuit
        .ops
        .iter()
        .filter_map(|op| match op {
            Operation::Cut { cut_id, .. } => Some(*cut_id),
            _ => None,
        })
        .collect();
    let cut_id = (0..).find(|id| !used.contains(id)).unwrap();
    let mut out = circuit.clone();
    out.ops.insert(op_index, Operation::Cut { cut_id, qubit });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_rejects_out_of_range_qubit() {
        let mut c = Circuit::new(2, 2);
        let err = c.push(Operation::Gate(Gate::H(2))).unwrap_err();
        assert_eq!(
            err,
            CircuitError::QubitOutOfRange {
                qubit: 2,
                num_qubits: 2
            }
        );
    }

    #[test]
    fn push_rejects_out_of_range_clbit() {
        let mut c = Circuit::new(2, 1);
        let err = c
            .push(Operation::Measure { qubit: 0, clbit: 1 })
            .unwrap_err();
        assert_eq!(
            err,
            CircuitError::ClbitOutOfRange {
                clbit: 1,
                num_clbits: 1
            }
        );
    }

    #[test]
    fn push_rejects_cx_on_same_wire() {
        let mut c = Circuit::new(2, 0);
        let err = c.push(Operation::Gate(Gate::Cx(1, 1))).unwrap_err();
        assert_eq!(err, CircuitError::DuplicateQubit { qubit: 1 });
    }

    #[test]
    fn push_rejects_nonfinite_angle() {
        let mut c = Circuit::new(1, 0);
        let err = c
            .push(Operation::Gate(Gate::Rz(0, f64::NAN)))
            .unwrap_err();
        assert_eq!(err, CircuitError::NonFiniteAngle);
    }

    #[test]
    fn push_rejects_non_unitary_matrix() {
        let mut c = Circuit::new(1, 0);
        let m = Mat2::new(
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(2.0, 0.0),
        );
        let err = c.push(Operation::Gate(Gate::U1q(0, m))).unwrap_err();
        assert!(matches!(err, CircuitError::NonUnitaryMatrix { .. }));
    }

    #[test]
    fn push_rejects_duplicate_cut_id() {
        let mut c = Circuit::new(2, 0);
        c.push(Operation::Cut { cut_id: 0, qubit: 0 }).unwrap();
        let err = c.push(Operation::Cut { cut_id: 0, qubit: 1 }).unwrap_err();
        assert_eq!(err, CircuitError::DuplicateCutId { cut_id: 0 });
    }

    #[test]
    fn insert_cut_assigns_fresh_id_and_position() {
        let mut c = Circuit::new(3, 3);
        c.h(0).cx(0, 1).cx(1, 2).measure_all();
        let cut = insert_cut(&c, 1, 2).unwrap();
        let points = cut.cut_points();
        assert_eq!(points.len(), 1);
        assert_eq!(points[0].cut_id, 0);
        assert_eq!(points[0].qubit, 1);
        assert_eq!(points[0].op_index, 2);
        assert!(matches!(cut.ops()[2], Operation::Cut { .. }));
        // Original untouched.
        assert_eq!(c.num_cuts(), 0);
    }

    #[test]
    fn insert_cut_skips_used_ids() {
        let mut c = Circuit::new(2, 0);
        c.push(Operation::Cut { cut_id: 0, qubit: 0 }).unwrap();
        let cut = insert_cut(&c, 1, 1).unwrap();
        let ids: Vec<usize> = cut.cut_points().iter().map(|p| p.cut_id).collect();
        assert_eq!(ids, vec![0, 1]);
    }

    #[test]
    fn insert_cut_rejects_bad_position() {
        let c = Circuit::new(1, 0);
        let err = insert_cut(&c, 0, 1).unwrap_err();
        assert_eq!(err, CircuitError::OpIndexOutOfRange { index: 1, len: 0 });
    }

    #[test]
    fn measure_all_grows_classical_register() {
        let mut c = Circuit::new(3, 0);
        c.h(0).measure_all();
        assert_eq!(c.num_clbits(), 3);
        assert!(c.all_qubits_measured());
    }

    #[test]
    fn cut_points_reports_inline_markers() {
        let mut c = Circuit::new(2, 2);
        c.h(0);
        c.push(Operation::Cut { cut_id: 5, qubit: 0 }).unwrap();
        c.cx(0, 1).measure_all();
        let pts = c.cut_points();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].cut_id, 5);
        assert_eq!(pts[0].op_index, 1);
    }
}
