//! Stochastic Pauli noise model.
//!
//! Noise is applied per trajectory: after each single-qubit gate a uniform
//! X/Y/Z error fires with probability `p1`, after each CNOT one of the 15
//! non-identity two-qubit Paulis fires with probability `p2`, and each
//! recorded measurement bit flips with probability `p_ro`. Readout flips
//! corrupt only the record; the post-measurement state follows the true
//! outcome.

use thiserror::Error;

/// Error rates for [`crate::sim::sample`]. All probabilities in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseModel {
    /// Depolarizing probability after each single-qubit gate.
    pub p1: f64,
    /// Depolarizing probability after each two-qubit gate.
    pub p2: f64,
    /// Readout bit-flip probability per measurement.
    pub p_ro: f64,
    /// Name echoed into benchmark reports.
    pub label: String,
}

#[derive(Debug, Error, PartialEq)]
#[error("noise parameter {name}={value} is outside [0, 1]")]
pub struct NoiseModelError {
    pub name: &'static str,
    pub value: f64,
}

impl NoiseModel {
    /// Rates loosely patterned on a current superconducting device: two-qubit
    /// gates dominate, readout error is a few percent, single-qubit gates are
    /// an order of magnitude cleaner. The numbers are stand-ins chosen to
    /// visibly degrade shallow circuits, not calibration data.
    pub fn brisbane_like() -> NoiseModel {
        NoiseModel {
            p1: 3e-4,
            p2: 8e-3,
            p_ro: 1.5e-2,
            label: "brisbane-like".into(),
        }
    }

    pub fn custom(p1: f64, p2: f64, p_ro: f64) -> NoiseModel {
        NoiseModel {
            p1,
            p2,
            p_ro,
            label: "custom".into(),
        }
    }

    /// Looks up a preset by name. `"none"` and `"ideal"` mean no noise.
    pub fn by_name(name: &str) -> Option<Option<NoiseModel>> {
        match name {
            "none" | "ideal" => Some(None),
            "brisbane-like" => Some(Some(NoiseModel::brisbane_like())),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), NoiseModelError> {
        for (name, value) in [("p1", self.p1), ("p2", self.p2), ("p_ro", self.p_ro)] {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                return Err(NoiseModelError { name, value });
            }
        }
        Ok(())
    }

    /// True when every rate is exactly zero, in which case sampling behaves
    /// bit-for-bit like sampling with no noise model at all.
    pub fn is_trivial(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_ro == 0.0
    }
}
