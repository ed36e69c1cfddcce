//! Benchmark harness: metrics, experiment drivers, CSV output, and the CLI.

pub mod cli;
mod csv;
mod experiments;
mod metrics;

pub use csv::{records_to_csv, CSV_HEADER};
pub use experiments::{
    run_ghz_experiment, run_qaoa_experiment, GhzConfig, GhzMethod, QaoaExperimentConfig,
    RunRecord, GHZ_QUBITS,
};
pub use metrics::{allocate_shots, hellinger};

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::qaoa::QaoaError;
use crate::sim::SimError;
use crate::wirecut::WirecutError;

/// Errors from metrics, experiment drivers, and result serialization.
#[derive(Debug, Error)]
pub enum BenchError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Wirecut(#[from] WirecutError),
    #[error(transparent)]
    Qaoa(#[from] QaoaError),
    #[error("distributions have different widths ({left} vs {right} bits)")]
    BitsMismatch { left: usize, right: usize },
    #[error("cannot allocate shots over zero runs")]
    NoRuns,
    #[error("budget of {total} shots cannot give each of {runs} runs at least one")]
    BudgetTooSmall { total: u64, runs: usize },
    #[error("experiment needs at least one budget")]
    NoBudgets,
    #[error("experiment needs at least one repetition")]
    NoReps,
    #[error("experiment needs at least one method")]
    NoMethods,
}
