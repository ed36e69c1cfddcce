//! Seeded random circuit generation, used by self-tests and stress tests.

use rand::Rng;

use super::{Circuit, Gate, Mat2, Operation};

const TAU: f64 = std::f64::consts::TAU;

/// Knobs for [`random_circuit`].
#[derive(Clone, Debug)]
pub struct RandomCircuitParams {
    pub num_qubits: usize,
    pub num_gates: usize,
    /// Probability that a drawn gate is a CNOT (when at least 2 qubits).
    pub two_qubit_fraction: f64,
    /// Allow arbitrary `u1q` gates in the mix.
    pub include_u1q: bool,
    /// Append a terminal measurement of every qubit.
    pub measure: bool,
}

impl Default for RandomCircuitParams {
    fn default() -> RandomCircuitParams {
        RandomCircuitParams {
            num_qubits: 3,
            num_gates: 20,
            two_qubit_fraction: 0.3,
            include_u1q: true,
            measure: true,
        }
    }
}

/// Draws a random unitary from random Euler angles and a random global phase.
pub fn random_u1q(rng: &mut impl Rng) -> Mat2 {
    let alpha = rng.random::<f64>() * TAU;
    let beta = rng.random::<f64>() * TAU;
    let gamma = rng.random::<f64>() * TAU;
    let delta = rng.random::<f64>() * TAU;
    let phase = super::C64::from_polar(1.0, delta);
    let m = Mat2::rz(alpha).mul(&Mat2::ry(beta)).mul(&Mat2::rz(gamma));
    Mat2::new(
        phase * m.0[0][0],
        phase * m.0[0][1],
        phase * m.0[1][0],
        phase * m.0[1][1],
    )
}

/// Generates a gate-only circuit (plus optional terminal measurements) with
/// `params.num_gates` gates drawn from the configured mix.
pub fn random_circuit(rng: &mut impl Rng, params: &RandomCircuitParams) -> Circuit {
    let n = params.num_qubits;
    let mut c = Circuit::new(n, 0);
    for _ in 0..params.num_gates {
        if n >= 2 && rng.random::<f64>() < params.two_qubit_fraction {
            let control = rng.random_range(0..n);
            let mut target = rng.random_range(0..n - 1);
            if target >= control {
                target += 1;
            }
            c.cx(control, target);
        } else {
            let q = rng.random_range(0..n);
            let kinds = if params.include_u1q { 8 } else { 7 };
            let gate = match rng.random_range(0..kinds) {
                0 => Gate::H(q),
                1 => Gate::X(q),
                2 => Gate::Y(q),
                3 => Gate::Z(q),
                4 => Gate::Rx(q, rng.random::<f64>() * TAU),
                5 => Gate::Ry(q, rng.random::<f64>() * TAU),
                6 => Gate::Rz(q, rng.random::<f64>() * TAU),
                _ => Gate::U1q(q, random_u1q(rng)),
            };
            c.push(Operation::Gate(gate)).unwrap();
        }
    }
    if params.measure {
        c.measure_all();
    }
    c
}

/// Generates a measured random circuit carrying `num_cuts` cut markers that
/// fragment cleanly. Marker positions are drawn uniformly over wires and
/// over the gate section (never inside the measurement suffix), and a
/// candidate whose fragmentation fails, for example through a cyclic
/// stitching graph, is discarded and redrawn.
pub fn random_cut_circuit(
    rng: &mut impl Rng,
    params: &RandomCircuitParams,
    num_cuts: usize,
) -> Circuit {
    assert!(params.measure, "cut circuits need measured outputs");
    for _ in 0..1000 {
        let mut c = random_circuit(rng, params);
        let mut body_len = c.count_ops(|op| matches!(op, Operation::Gate(_)));
        let mut ok = true;
        for _ in 0..num_cuts {
            let qubit = rng.random_range(0..c.num_qubits());
            let position = rng.random_range(0..=body_len);
            match super::insert_cut(&c, qubit, position) {
                Ok(with_cut) => {
                    c = with_cut;
                    body_len += 1;
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && c.num_cuts() == num_cuts && crate::wirecut::fragment(&c, None).is_ok() {
            return c;
        }
    }
    panic!("no fragmentable candidate in 1000 draws; loosen the parameters");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::derive_rng;

    #[test]
    fn generator_is_deterministic() {
        let params = RandomCircuitParams::default();
        let a = random_circuit(&mut derive_rng(5, &[]), &params);
        let b = random_circuit(&mut derive_rng(5, &[]), &params);
        assert_eq!(a, b);
    }

    #[test]
    fn generator_respects_counts() {
        let params = RandomCircuitParams {
            num_qubits: 4,
            num_gates: 30,
            ..RandomCircuitParams::default()
        };
        let c = random_circuit(&mut derive_rng(1, &[]), &params);
        assert_eq!(
            c.count_ops(|op| matches!(op, Operation::Gate(_))),
            30
        );
        assert_eq!(c.count_ops(|op| matches!(op, Operation::Measure { .. })), 4);
        c.validate().unwrap();
    }

    #[test]
    fn random_u1q_is_unitary() {
        let mut rng = derive_rng(9, &[]);
        for _ in 0..50 {
            assert!(random_u1q(&mut rng).unitarity_deviation() < 1e-12);
        }
    }

    #[test]
    fn single_qubit_params_never_draw_cx() {
        let params = RandomCircuitParams {
            num_qubits: 1,
            num_gates: 40,
            two_qubit_fraction: 0.9,
            ..RandomCircuitParams::default()
        };
        let c = random_circuit(&mut derive_rng(2, &[]), &params);
        assert_eq!(c.count_ops(|op| matches!(op, Operation::Gate(Gate::Cx(..)))), 0);
    }

    #[test]
    fn cut_circuits_always_fragment() {
        let mut rng = derive_rng(14, &[]);
        for trial in 0..20 {
            let params = RandomCircuitParams {
                num_qubits: 3 + trial % 4,
                num_gates: 12 + trial,
                ..RandomCircuitParams::default()
            };
            let cuts = 1 + trial % 2;
            let c = random_cut_circuit(&mut rng, &params, cuts);
            assert_eq!(c.num_cuts(), cuts);
            let frags = crate::wirecut::fragment(&c, None).unwrap();
            let total: usize = frags.fragments.iter().map(|f| f.num_qubits()).sum();
            assert_eq!(total, c.num_qubits() + cuts);
        }
    }

    #[test]
    fn cut_circuit_generation_is_deterministic() {
        let params = RandomCircuitParams::default();
        let a = random_cut_circuit(&mut derive_rng(8, &[]), &params, 2);
        let b = random_cut_circuit(&mut derive_rng(8, &[]), &params, 2);
        assert_eq!(a, b);
    }
}
