//! Benchmark circuit constructors.

use rand::Rng;

use super::{Circuit, CircuitError};
use crate::rng::derive_rng;

const TAU: f64 = std::f64::consts::TAU;

/// GHZ-style benchmark circuit on `n` qubits: H on qubit 0, then a CNOT
/// ladder `0->1->...->n-1` where each CNOT is dressed with seeded random
/// rotations, and a terminal measurement of every qubit.
///
/// For ladder step `i` the rotations are RZ then RY on the target `i + 1`
/// before the CNOT and RZ then RY on the target after, with angles drawn
/// uniformly from `[0, 2 pi)` in exactly that order. The same `(n, seed)`
/// always yields the same circuit.
pub fn ghz_benchmark_circuit(n: usize, seed: u64) -> Result<Circuit, CircuitError> {
    let mut rng = derive_rng(seed, &[]);
    build_ghz(n, |_| rng.random::<f64>() * TAU)
}

/// The benchmark circuit with all rotation angles forced to zero, which
/// leaves a plain GHZ preparation. Handy for debugging because the exact
/// outcome distribution is 1/2 on all-zeros and 1/2 on all-ones.
pub fn ghz_benchmark_circuit_zeroed(n: usize) -> Result<Circuit, CircuitError> {
    build_ghz(n, |_| 0.0)
}

fn build_ghz(n: usize, mut angle: impl FnMut(usize) -> f64) -> Result<Circuit, CircuitError> {
    if n < 2 {
        return Err(CircuitError::GhzTooSmall { got: n, min: 2 });
    }
    let mut c = Circuit::new(n, n);
    c.h(0);
    for i in 0..n - 1 {
        let t = i + 1;
        c.rz(t, angle(4 * i))
            .ry(t, angle(4 * i + 1))
            .cx(i, t)
            .rz(t, angle(4 * i + 2))
            .ry(t, angle(4 * i + 3));
    }
    c.measure_all();
    Ok(c)
}

/// [`ghz_benchmark_circuit`] with a single cut marker on the middle wire
/// `n / 2`, placed between the CNOT that ends at that wire and the CNOT that
/// leaves it. Fragmenting the result splits the ladder into an upstream half
/// on qubits `0..=n/2` and a downstream half on `n/2..n`.
pub fn ghz_cut_circuit(n: usize, seed: u64) -> Result<Circuit, CircuitError> {
    if n < 3 {
        return Err(CircuitError::GhzTooSmall { got: n, min: 3 });
    }
    let c = ghz_benchmark_circuit(n, seed)?;
    let mid = n / 2;
    // Ops are laid out as [H, (RZ RY CX RZ RY) x (n-1), measures]; the CNOT
    // out of wire `mid` is the third op of ladder step `mid`.
    let cut_index = 1 + 5 * mid + 2;
    super::insert_cut(&c, mid, cut_index)
}
