//! Workbench for quantum circuit wire cutting.
//!
//! The crate bundles a small statevector simulator, a text format for
//! circuits with cut markers, two wire-cutting strategies (exact Pauli-basis
//! reconstruction and randomized channel sampling) plus a deliberately biased
//! rotation baseline, a QAOA MaxCut stack, and a benchmark harness that writes
//! CSV reports. Every randomized step is driven by seeded ChaCha8 streams, so
//! a report is reproducible from the master seed printed alongside it.
//!
//! The `examples/` directory is the front door: each example is a runnable
//! walkthrough of one capability. The `cutbench` binary wraps the same calls
//! for shell use.

pub mod bench;
pub mod circuit;
pub mod qaoa;
pub mod qcut;
pub mod rng;
pub mod sim;
pub mod wirecut;

pub use bench::{allocate_shots, hellinger, BenchError};
pub use circuit::{
    ghz_benchmark_circuit, ghz_benchmark_circuit_zeroed, ghz_cut_circuit, insert_cut, Circuit,
    CircuitError, CutPoint, Gate, Mat2, Operation, PrepState, C64,
};
pub use qaoa::{
    brute_force_maxcut, build_qaoa_circuit, cut_value, default_graph, expected_cost, rank_answer,
    run_qaoa, spsa_minimize, Graph, QaoaError, QaoaMethod, QaoaOutcome, QaoaParams, QaoaRunConfig,
    Rank, SpsaConfig,
};
pub use qcut::{emit_program, parse_program, ParseError};
pub use sim::{
    exact_distribution, sample, Counts, Distribution, NoiseModel, OutcomeWeights, SimError,
    SimOptions, StateVector,
};
pub use wirecut::{
    clip_and_normalize, fragment, run_randomized_cut, CutVariant, Fragment, FragmentSet,
    QuasiDistribution, WirecutError,
};
