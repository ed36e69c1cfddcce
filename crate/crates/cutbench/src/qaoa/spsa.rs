//! Simultaneous perturbation stochastic approximation, the gradient-free
//! optimizer driving the variational loop.
//!
//! Each iteration evaluates the objective at exactly two points, a symmetric
//! pair around the current iterate along a random sign vector, and steps
//! against the resulting one-sample gradient estimate. Noisy objectives are
//! the intended use, so the returned parameters are the iterate whose pair
//! of evaluations had the best mean rather than the final iterate.

use rand::Rng;
use thiserror::Error;

use crate::rng::derive_rng;

/// Gain schedules and iteration budget.
///
/// Step sizes follow the standard two-sequence recursion: at iteration `k`
/// the update gain is `a / (big_a + k + 1)^alpha` and the perturbation
/// radius is `c / (k + 1)^gamma_exp`.
#[derive(Debug, Clone)]
pub struct SpsaConfig {
    pub a: f64,
    pub c: f64,
    pub big_a: f64,
    pub alpha: f64,
    pub gamma_exp: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SpsaConfig {
    fn default() -> SpsaConfig {
        SpsaConfig {
            a: 0.2,
            c: 0.15,
            big_a: 10.0,
            alpha: 0.602,
            gamma_exp: 0.101,
            max_iter: 60,
            seed: 0,
        }
    }
}

impl SpsaConfig {
    /// Update gain at iteration `k`.
    pub fn gain_a(&self, k: usize) -> f64 {
        self.a / (self.big_a + k as f64 + 1.0).powf(self.alpha)
    }

    /// Perturbation radius at iteration `k`.
    pub fn gain_c(&self, k: usize) -> f64 {
        self.c / (k as f64 + 1.0).powf(self.gamma_exp)
    }

    fn validate(&self) -> Result<(), &'static str> {
        if !(self.a.is_finite() && self.a > 0.0 && self.c.is_finite() && self.c > 0.0) {
            return Err("gains a and c must be positive and finite");
        }
        if !(self.big_a.is_finite() && self.big_a >= 0.0) {
            return Err("stability constant big_a must be nonnegative");
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0 && self.gamma_exp > 0.0 && self.gamma_exp <= 1.0)
        {
            return Err("decay exponents must lie in (0, 1]");
        }
        if self.max_iter == 0 {
            return Err("max_iter must be at least 1");
        }
        Ok(())
    }
}

/// One optimizer step: the iterate it started from and the objective values
/// at the two perturbed points.
#[derive(Debug, Clone)]
pub struct SpsaIterate {
    pub theta: Vec<f64>,
    pub value_plus: f64,
    pub value_minus: f64,
}

impl SpsaIterate {
    /// Mean of the two perturbed evaluations, the score used to pick the
    /// returned iterate.
    pub fn value(&self) -> f64 {
        0.5 * (self.value_plus + self.value_minus)
    }
}

/// Outcome of a minimization run.
#[derive(Debug, Clone)]
pub struct SpsaResult {
    /// Iterate with the best (lowest) paired-evaluation mean.
    pub theta: Vec<f64>,
    /// That iterate's paired-evaluation mean.
    pub value: f64,
    /// Every iterate in order, two objective values each.
    pub trajectory: Vec<SpsaIterate>,
    /// Total objective evaluations, always `2 * max_iter`.
    pub evaluations: usize,
}

#[derive(Debug, Error)]
pub enum SpsaError<E: std::error::Error + 'static> {
    #[error("objective evaluation failed: {0}")]
    Objective(#[source] E),
    #[error("objective returned non-finite value {value} at iteration {iteration}")]
    NonFinite { iteration: usize, value: f64 },
    #[error("invalid optimizer configuration: {detail}")]
    Config { detail: &'static str },
    #[error("cannot optimize over zero parameters")]
    EmptyTheta,
}

/// Minimizes `objective` starting from `theta0`.
///
/// The perturbation signs are drawn from a stream seeded by `config.seed`,
/// so runs are reproducible. Objective errors abort immediately, as does a
/// NaN or infinite value.
pub fn spsa_minimize<E: std::error::Error + 'static>(
    mut objective: impl FnMut(&[f64]) -> Result<f64, E>,
    theta0: &[f64],
    config: &SpsaConfig,
) -> Result<SpsaResult, SpsaError<E>> {
    config
        .validate()
        .map_err(|detail| SpsaError::Config { detail })?;
    if theta0.is_empty() {
        return Err(SpsaError::EmptyTheta);
    }
    let dim = theta0.len();
    let mut rng = derive_rng(config.seed, &[]);
    let mut theta = theta0.to_vec();
    let mut trajectory = Vec::with_capacity(config.max_iter);
    let mut best: Option<(f64, Vec<f64>)> = None;

    for k in 0..config.max_iter {
        let ck = config.gain_c(k);
        let ak = config.gain_a(k);
        let delta: Vec<f64> = (0..dim)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();

        let probe = |sign: f64| -> Vec<f64> {
            theta
                .iter()
                .zip(&delta)
                .map(|(&t, &d)| t + sign * ck * d)
                .collect()
        };
        let value_plus = objective(&probe(1.0)).map_err(SpsaError::Objective)?;
        if !value_plus.is_finite() {
            return Err(SpsaError::NonFinite {
                iteration: k,
                value: value_plus,
            });
        }
        let value_minus = objective(&probe(-1.0)).map_err(SpsaError::Objective)?;
        if !value_minus.is_finite() {
            return Err(SpsaError::NonFinite {
                iteration: k,
                value: value_minus,
            });
        }

        let iterate = SpsaIterate {
            theta: theta.clone(),
            value_plus,
            value_minus,
        };
        if best.as_ref().is_none_or(|(v, _)| iterate.value() < *v) {
            best = Some((iterate.value(), iterate.theta.clone()));
        }
        trajectory.push(iterate);

        let slope = (value_plus - value_minus) / (2.0 * ck);
        for (t, &d) in theta.iter_mut().zip(&delta) {
            // With +/-1 entries, dividing by delta[i] is multiplying by it.
            *t -= ak * slope * d;
        }
    }

    let (value, theta) = best.expect("max_iter >= 1 guarantees an iterate");
    Ok(SpsaResult {
        theta,
        value,
        trajectory,
        evaluations: 2 * config.max_iter,
    })
}
