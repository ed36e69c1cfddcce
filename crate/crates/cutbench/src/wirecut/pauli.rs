//! Exact Pauli-basis wire cutting.
//!
//! A cut wire's state is resolved by measuring the upstream stub in the Z,
//! X, and Y bases and preparing the downstream stub in the four states
//! |0>, |1>, |+>, |+i>. Expanding each basis term over its outcomes gives
//! 14 signed primitives per cut; summing every combination of primitives,
//! weighted by its coefficients and a global (1/2) per cut, rebuilds the
//! uncut distribution exactly. Estimation error enters only through shot
//! noise on the fragment runs, so the executor comes in an exact and a
//! sampled flavor.

use std::collections::BTreeMap;

use itertools::Itertools;
use rayon::prelude::*;

use crate::circuit::PrepState;
use crate::rng;
use crate::sim::{exact_distribution_with, sample_with, Distribution, NoiseModel, SimOptions};

use super::join::{join_terms, TermMeta};
use super::{FragmentSet, InSetting, MeasBasis, OutSetting, QuasiDistribution, WirecutError};

/// One signed primitive: measure the upstream stub in `basis`, keep runs
/// whose boundary outcome equals `outcome`, prepare the downstream stub in
/// `prep`, and weight the joined statistics by `coeff`.
#[derive(Clone, Copy, Debug)]
pub struct PauliTerm {
    pub basis: MeasBasis,
    pub outcome: u8,
    pub prep: PrepState,
    pub coeff: f64,
}

const CUT_TERMS: [PauliTerm; 14] = {
    const fn t(basis: MeasBasis, outcome: u8, prep: PrepState, coeff: f64) -> PauliTerm {
        PauliTerm {
            basis,
            outcome,
            prep,
            coeff,
        }
    }
    [
        t(MeasBasis::Z, 0, PrepState::Zero, 2.0),
        t(MeasBasis::Z, 1, PrepState::One, 2.0),
        t(MeasBasis::X, 0, PrepState::Plus, 2.0),
        t(MeasBasis::X, 0, PrepState::Zero, -1.0),
        t(MeasBasis::X, 0, PrepState::One, -1.0),
        t(MeasBasis::X, 1, PrepState::Plus, -2.0),
        t(MeasBasis::X, 1, PrepState::Zero, 1.0),
        t(MeasBasis::X, 1, PrepState::One, 1.0),
        t(MeasBasis::Y, 0, PrepState::IState, 2.0),
        t(MeasBasis::Y, 0, PrepState::Zero, -1.0),
        t(MeasBasis::Y, 0, PrepState::One, -1.0),
        t(MeasBasis::Y, 1, PrepState::IState, -2.0),
        t(MeasBasis::Y, 1, PrepState::Zero, 1.0),
        t(MeasBasis::Y, 1, PrepState::One, 1.0),
    ]
};

/// The per-cut primitives and the global prefactor for a `k`-cut circuit.
/// Every cut severs a single two-level wire, so each gets the same 14-term
/// table and the prefactor is (1/2)^k.
#[derive(Clone, Copy, Debug)]
pub struct PauliTermTable {
    pub num_cuts: usize,
    pub prefactor: f64,
}

impl PauliTermTable {
    pub fn for_cuts(num_cuts: usize) -> PauliTermTable {
        PauliTermTable {
            num_cuts,
            prefactor: 0.5f64.powi(num_cuts as i32),
        }
    }

    pub fn terms_for_cut(&self, _cut: usize) -> &'static [PauliTerm; 14] {
        &CUT_TERMS
    }
}

/// What a fragment run fixes: one basis per out-boundary and one state per
/// in-boundary, both aligned with the fragment's boundary lists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PauliRunConfig {
    pub bases: Vec<MeasBasis>,
    pub preps: Vec<PrepState>,
}

impl PauliRunConfig {
    fn settings(&self) -> (Vec<OutSetting>, Vec<InSetting>) {
        (
            self.bases.iter().map(|&b| OutSetting::Basis(b)).collect(),
            self.preps.iter().map(|&p| InSetting::Prep(p)).collect(),
        )
    }
}

/// Every run configuration each fragment needs: the cartesian product of
/// three bases per out-boundary and four states per in-boundary, in a fixed
/// order. A fragment without boundaries still gets one (empty) entry.
pub fn enumerate_pauli_configs(frags: &FragmentSet) -> Vec<Vec<PauliRunConfig>> {
    frags
        .fragments
        .iter()
        .map(|f| {
            let basis_sets = vec![MeasBasis::ALL.to_vec(); f.out_boundaries.len()];
            let prep_sets = vec![PrepState::ALL.to_vec(); f.in_boundaries.len()];
            let bases: Vec<Vec<MeasBasis>> = if basis_sets.is_empty() {
                vec![Vec::new()]
            } else {
                basis_sets.into_iter().multi_cartesian_product().collect()
            };
            let preps: Vec<Vec<PrepState>> = if prep_sets.is_empty() {
                vec![Vec::new()]
            } else {
                prep_sets.into_iter().multi_cartesian_product().collect()
            };
            bases
                .iter()
                .cartesian_product(preps.iter())
                .map(|(b, p)| PauliRunConfig {
                    bases: b.clone(),
                    preps: p.clone(),
                })
                .collect()
        })
        .collect()
}

/// Total number of fragment runs the Pauli strategy needs.
pub fn pauli_config_count(frags: &FragmentSet) -> usize {
    enumerate_pauli_configs(frags).iter().map(Vec::len).sum()
}

/// Outcome statistics for every fragment run configuration.
pub type PauliConfigResults = Vec<BTreeMap<PauliRunConfig, Distribution>>;

fn fragment_sim_options() -> SimOptions {
    SimOptions {
        measure_all_missing: true,
        ..SimOptions::default()
    }
}

/// Runs every configuration through the exact simulator.
pub fn execute_pauli_configs_exact(
    frags: &FragmentSet,
) -> Result<PauliConfigResults, WirecutError> {
    let configs = enumerate_pauli_configs(frags);
    frags
        .fragments
        .iter()
        .zip(&configs)
        .map(|(f, cfgs)| {
            cfgs.iter()
                .map(|cfg| {
                    let (outs, ins) = cfg.settings();
                    let circuit = f.instantiate(&outs, &ins);
                    let dist = exact_distribution_with(&circuit, &fragment_sim_options())?;
                    Ok((cfg.clone(), dist))
                })
                .collect()
        })
        .collect()
}

/// Samples every configuration with its allotted shots, turning the counts
/// into empirical distributions. `shots_per_config` runs over fragments in
/// order, then configurations in enumeration order, and must match
/// [`pauli_config_count`].
pub fn execute_pauli_configs_sampled(
    frags: &FragmentSet,
    shots_per_config: &[u64],
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<PauliConfigResults, WirecutError> {
    let configs = enumerate_pauli_configs(frags);
    let expected: usize = configs.iter().map(Vec::len).sum();
    if shots_per_config.len() != expected {
        return Err(WirecutError::ShotPlanMismatch {
            expected,
            got: shots_per_config.len(),
        });
    }

    let flat: Vec<(usize, &PauliRunConfig, u64)> = {
        let mut v = Vec::with_capacity(expected);
        let mut i = 0;
        for (f, cfgs) in configs.iter().enumerate() {
            for cfg in cfgs {
                v.push((f, cfg, shots_per_config[i]));
                i += 1;
            }
        }
        v
    };
    let runs: Vec<(usize, PauliRunConfig, Distribution)> = flat
        .into_par_iter()
        .enumerate()
        .map(|(i, (f, cfg, shots))| {
            let (outs, ins) = cfg.settings();
            let circuit = frags.fragments[f].instantiate(&outs, &ins);
            let run_seed = rng::mix(seed, &[f as u64, i as u64]);
            let counts = sample_with(&circuit, shots, run_seed, noise, &fragment_sim_options())?;
            Ok((f, cfg.clone(), counts.to_distribution()?))
        })
        .collect::<Result<_, WirecutError>>()?;

    let mut results: PauliConfigResults = vec![BTreeMap::new(); frags.fragments.len()];
    for (f, cfg, dist) in runs {
        results[f].insert(cfg, dist);
    }
    Ok(results)
}

/// Joins per-configuration fragment statistics into the quasi-distribution
/// over the original circuit's outcomes. With exact statistics the result
/// matches the uncut distribution to numerical precision; with sampled
/// statistics the residual is shot noise amplified by the signed weights.
pub fn reconstruct_pauli(
    frags: &FragmentSet,
    results: &PauliConfigResults,
) -> Result<QuasiDistribution, WirecutError> {
    let table = PauliTermTable::for_cuts(frags.num_cuts());
    let per_cut: Vec<Vec<TermMeta>> = (0..table.num_cuts)
        .map(|c| {
            table
                .terms_for_cut(c)
                .iter()
                .map(|t| TermMeta {
                    coeff: t.coeff,
                    outcome: t.outcome,
                })
                .collect()
        })
        .collect();

    join_terms(
        frags,
        &per_cut,
        table.prefactor,
        &mut |f, choice| {
            let frag = &frags.fragments[f];
            PauliRunConfig {
                bases: frag
                    .out_boundaries
                    .iter()
                    .map(|b| CUT_TERMS[choice[frags.cut_index(b.cut_id)]].basis)
                    .collect(),
                preps: frag
                    .in_boundaries
                    .iter()
                    .map(|b| CUT_TERMS[choice[frags.cut_index(b.cut_id)]].prep)
                    .collect(),
            }
        },
        &mut |f, key| {
            Ok(results[f]
                .get(key)
                .expect("every enumerated configuration was executed")
                .clone())
        },
    )
}

/// Convenience wrapper: fragment statistics from the exact simulator, then
/// reconstruction.
pub fn pauli_cut_distribution(frags: &FragmentSet) -> Result<QuasiDistribution, WirecutError> {
    let results = execute_pauli_configs_exact(frags)?;
    reconstruct_pauli(frags, &results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{ghz_benchmark_circuit, ghz_cut_circuit, Circuit, Operation};
    use crate::sim::exact_distribution;
    use crate::wirecut::fragment;

    fn max_abs_diff(quasi: &QuasiDistribution, exact: &Distribution) -> f64 {
        let mut keys: Vec<&String> = quasi.weights().keys().collect();
        keys.extend(exact.probs().keys());
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| (quasi.get(k) - exact.get(k)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn term_table_rebuilds_an_arbitrary_state() {
        // The table is a resolution of the identity wire: for any state
        // rho, summing coeff * P(outcome | measuring rho in basis) * (prep
        // density matrix) over the 14 terms, times the 1/2 prefactor, must
        // give back rho itself.
        use crate::circuit::C64;
        let psi = [C64::new(0.8, 0.0), C64::new(0.36, 0.48)];
        let dm = |v: [C64; 2]| {
            [
                [v[0] * v[0].conj(), v[0] * v[1].conj()],
                [v[1] * v[0].conj(), v[1] * v[1].conj()],
            ]
        };
        let rho = dm(psi);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let eigvec = |basis: MeasBasis, outcome: u8| -> [C64; 2] {
            let sign = if outcome == 0 { 1.0 } else { -1.0 };
            match basis {
                MeasBasis::Z => {
                    if outcome == 0 {
                        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
                    } else {
                        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
                    }
                }
                MeasBasis::X => [C64::new(s, 0.0), C64::new(sign * s, 0.0)],
                MeasBasis::Y => [C64::new(s, 0.0), C64::new(0.0, sign * s)],
            }
        };
        let prep_vec = |p: PrepState| -> [C64; 2] {
            match p {
                PrepState::Zero => eigvec(MeasBasis::Z, 0),
                PrepState::One => eigvec(MeasBasis::Z, 1),
                PrepState::Plus => eigvec(MeasBasis::X, 0),
                PrepState::IState => eigvec(MeasBasis::Y, 0),
            }
        };

        let table = PauliTermTable::for_cuts(1);
        let mut rebuilt = [[C64::new(0.0, 0.0); 2]; 2];
        for term in table.terms_for_cut(0) {
            let e = eigvec(term.basis, term.outcome);
            let amp = e[0].conj() * psi[0] + e[1].conj() * psi[1];
            let prob = amp.norm_sqr();
            let sigma = dm(prep_vec(term.prep));
            for r in 0..2 {
                for c in 0..2 {
                    rebuilt[r][c] += table.prefactor * term.coeff * prob * sigma[r][c];
                }
            }
        }
        for r in 0..2 {
            for c in 0..2 {
                assert!(
                    (rebuilt[r][c] - rho[r][c]).norm() < 1e-12,
                    "entry ({r},{c}): {} vs {}",
                    rebuilt[r][c],
                    rho[r][c]
                );
            }
        }
    }

    #[test]
    fn config_enumeration_counts() {
        let frags = fragment(&ghz_cut_circuit(5, 7).unwrap(), None).unwrap();
        let configs = enumerate_pauli_configs(&frags);
        assert_eq!(configs[0].len(), 3);
        assert_eq!(configs[1].len(), 4);
        assert_eq!(pauli_config_count(&frags), 7);
    }

    #[test]
    fn exact_reconstruction_matches_uncut_ghz() {
        for n in [3, 4, 5] {
            let cut = ghz_cut_circuit(n, 21).unwrap();
            let uncut = ghz_benchmark_circuit(n, 21).unwrap();
            let frags = fragment(&cut, None).unwrap();
            let quasi = pauli_cut_distribution(&frags).unwrap();
            let exact = exact_distribution(&uncut).unwrap();
            assert!(max_abs_diff(&quasi, &exact) < 1e-9, "n = {n}");
            assert!((quasi.mass() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_reconstruction_handles_two_cuts() {
        let mut cut = Circuit::new(4, 4);
        cut.h(0).cx(0, 1);
        cut.push(Operation::Cut { cut_id: 0, qubit: 1 }).unwrap();
        cut.cx(1, 2).ry(2, 0.9);
        cut.push(Operation::Cut { cut_id: 1, qubit: 2 }).unwrap();
        cut.cx(2, 3).measure_all();

        let mut uncut = Circuit::new(4, 4);
        uncut.h(0).cx(0, 1).cx(1, 2).ry(2, 0.9).cx(2, 3).measure_all();

        let frags = fragment(&cut, None).unwrap();
        assert_eq!(frags.fragments.len(), 3);
        let quasi = pauli_cut_distribution(&frags).unwrap();
        let exact = exact_distribution(&uncut).unwrap();
        assert!(max_abs_diff(&quasi, &exact) < 1e-9);
    }

    #[test]
    fn reconstruction_of_uncut_circuit_is_the_plain_distribution() {
        let c = ghz_benchmark_circuit(4, 5).unwrap();
        let frags = fragment(&c, None).unwrap();
        let quasi = pauli_cut_distribution(&frags).unwrap();
        let exact = exact_distribution(&c).unwrap();
        assert!(max_abs_diff(&quasi, &exact) < 1e-12);
    }

    #[test]
    fn sampled_reconstruction_converges() {
        let cut = ghz_cut_circuit(4, 33).unwrap();
        let uncut = ghz_benchmark_circuit(4, 33).unwrap();
        let frags = fragment(&cut, None).unwrap();
        let shots = vec![200_000u64; pauli_config_count(&frags)];
        let results = execute_pauli_configs_sampled(&frags, &shots, 99, None).unwrap();
        let quasi = reconstruct_pauli(&frags, &results).unwrap();
        let exact = exact_distribution(&uncut).unwrap();
        assert!(max_abs_diff(&quasi, &exact) < 0.02);
        assert!((quasi.mass() - 1.0).abs() < 0.02);
    }

    #[test]
    fn sampled_execution_is_deterministic_and_checks_the_plan() {
        let frags = fragment(&ghz_cut_circuit(3, 1).unwrap(), None).unwrap();
        let shots = vec![500u64; pauli_config_count(&frags)];
        let a = execute_pauli_configs_sampled(&frags, &shots, 7, None).unwrap();
        let b = execute_pauli_configs_sampled(&frags, &shots, 7, None).unwrap();
        assert_eq!(
            reconstruct_pauli(&frags, &a).unwrap(),
            reconstruct_pauli(&frags, &b).unwrap()
        );
        let err = execute_pauli_configs_sampled(&frags, &[100], 7, None).unwrap_err();
        assert!(matches!(
            err,
            WirecutError::ShotPlanMismatch { expected: 7, got: 1 }
        ));
    }
}
