//! Randomized channel-based wire cutting.
//!
//! Each cut is replaced, per sample, by one of two channels: with
//! probability 3/5 a uniformly random single-qubit Clifford is applied
//! before the upstream measurement and undone after preparing the observed
//! outcome downstream; with probability 2/5 the wire is measured as-is and
//! the downstream stub is reinitialized to a uniformly random computational
//! state. Weighting those branches by +5 and -5 makes the average over
//! samples an unbiased estimate of the uncut distribution, because the
//! Clifford average of measure-and-reprepare equals the identity channel
//! plus two thirds of a depolarizing one. The estimator's spread per cut is
//! the factor 5, independent of how many primitives a basis expansion would
//! need.
//!
//! The rotation variant swaps the random Clifford for a rotation around a
//! random Pauli axis by a uniform angle. It keeps the protocol's shape but
//! not its algebra, so it converges to a biased answer; it is here as a
//! baseline.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rayon::prelude::*;

use crate::circuit::{Mat2, PauliAxis, PrepState};
use crate::rng::derive_rng;
use crate::sim::{
    exact_distribution_with, index_to_bitstring, run_trajectory, Distribution, NoiseModel,
    SimError, SimOptions,
};

use super::clifford::{clifford_element, clifford_group_1q, CLIFFORD_1Q_SIZE};
use super::join::{join_terms, TermMeta};
use super::{FragmentSet, InSetting, OutSetting, QuasiDistribution, WirecutError};

/// Which single-qubit ensemble the unitary branch draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutVariant {
    Clifford,
    Rotation,
}

impl CutVariant {
    pub fn name(self) -> &'static str {
        match self {
            CutVariant::Clifford => "clifford",
            CutVariant::Rotation => "rotation",
        }
    }
}

/// The channel drawn for one cut in one sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CutChannel {
    /// Apply the indexed Clifford upstream, undo it downstream.
    Clifford { element: usize },
    /// Measure as-is, reprepare the drawn state downstream.
    Depolarizing { reinit: PrepState },
    /// Rotation-variant counterpart of the Clifford branch.
    Rotation { axis: PauliAxis, theta: f64 },
}

/// Channels for every cut of one sample, with the sample's signed weight.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelChoice {
    /// One channel per cut, aligned with [`FragmentSet::cuts`].
    pub per_cut: Vec<CutChannel>,
    /// Product of +5 per unitary branch and -5 per depolarizing branch.
    pub weight: f64,
}

const UNITARY_BRANCH_PROB: f64 = 0.6;
const BRANCH_WEIGHT: f64 = 5.0;

/// Draws the channels for all `num_cuts` cuts of one sample.
pub fn sample_channel_choice(
    rng: &mut impl Rng,
    num_cuts: usize,
    variant: CutVariant,
) -> Result<ChannelChoice, WirecutError> {
    if num_cuts == 0 {
        return Err(WirecutError::NoCuts);
    }
    let mut per_cut = Vec::with_capacity(num_cuts);
    let mut weight = 1.0;
    for _ in 0..num_cuts {
        if rng.random::<f64>() < UNITARY_BRANCH_PROB {
            weight *= BRANCH_WEIGHT;
            per_cut.push(match variant {
                CutVariant::Clifford => CutChannel::Clifford {
                    element: rng.random_range(0..CLIFFORD_1Q_SIZE),
                },
                CutVariant::Rotation => CutChannel::Rotation {
                    axis: PauliAxis::ALL[rng.random_range(0..3)],
                    theta: rng.random::<f64>() * std::f64::consts::TAU,
                },
            });
        } else {
            weight *= -BRANCH_WEIGHT;
            per_cut.push(CutChannel::Depolarizing {
                reinit: if rng.random::<f64>() < 0.5 {
                    PrepState::Zero
                } else {
                    PrepState::One
                },
            });
        }
    }
    Ok(ChannelChoice { per_cut, weight })
}

fn out_setting_for(channel: &CutChannel) -> OutSetting {
    match channel {
        CutChannel::Clifford { element } => OutSetting::Unitary(
            *clifford_element(*element).expect("sampled index is in range"),
        ),
        CutChannel::Rotation { axis, theta } => {
            OutSetting::Unitary(Mat2::pauli_rotation(*axis, *theta))
        }
        CutChannel::Depolarizing { .. } => OutSetting::Computational,
    }
}

fn in_setting_for(channel: &CutChannel, upstream_outcome: u8) -> InSetting {
    let observed = if upstream_outcome == 0 {
        PrepState::Zero
    } else {
        PrepState::One
    };
    match channel {
        CutChannel::Clifford { element } => InSetting::PrepThenUnitary(
            observed,
            clifford_element(*element)
                .expect("sampled index is in range")
                .dagger(),
        ),
        CutChannel::Rotation { axis, theta } => {
            InSetting::PrepThenUnitary(observed, Mat2::pauli_rotation(*axis, -*theta))
        }
        CutChannel::Depolarizing { reinit } => InSetting::Prep(*reinit),
    }
}

/// Monte Carlo estimate of the uncut distribution from `num_samples`
/// single-shot stitched executions.
///
/// Each sample draws its channels, then runs the fragments in stitching
/// order: upstream boundary outcomes are read out of each trajectory and
/// fed into the downstream preparations. The sample contributes its signed
/// weight to the outcome it produced, and the estimate is the weighted
/// average. Sample `i` uses an independent stream derived from `seed`, so
/// the result does not depend on scheduling.
pub fn run_randomized_cut(
    frags: &FragmentSet,
    num_samples: u64,
    seed: u64,
    variant: CutVariant,
    noise: Option<&NoiseModel>,
) -> Result<QuasiDistribution, WirecutError> {
    if frags.num_cuts() == 0 {
        return Err(WirecutError::NoCuts);
    }
    if num_samples == 0 {
        return Err(WirecutError::NoSamples);
    }
    let outputs = frags.require_outputs()?;
    if let Some(nm) = noise {
        nm.validate().map_err(SimError::from)?;
    }
    // Force the one-time group construction out of the parallel region.
    clifford_group_1q();

    let k = frags.num_cuts();
    let n = frags.num_qubits;
    let acc: HashMap<u64, f64> = (0..num_samples)
        .into_par_iter()
        .try_fold(HashMap::new, |mut acc: HashMap<u64, f64>, i| -> Result<HashMap<u64, f64>, WirecutError> {
            let mut srng = derive_rng(seed, &[i]);
            let choice = sample_channel_choice(&mut srng, k, variant)?;
            let mut boundary_outcome = vec![0u8; k];
            let mut frag_bits = vec![0u64; frags.fragments.len()];
            for (fi, frag) in frags.fragments.iter().enumerate() {
                let outs: Vec<OutSetting> = frag
                    .out_boundaries
                    .iter()
                    .map(|b| out_setting_for(&choice.per_cut[frags.cut_index(b.cut_id)]))
                    .collect();
                let ins: Vec<InSetting> = frag
                    .in_boundaries
                    .iter()
                    .map(|b| {
                        let ci = frags.cut_index(b.cut_id);
                        in_setting_for(&choice.per_cut[ci], boundary_outcome[ci])
                    })
                    .collect();
                let circuit = frag.instantiate(&outs, &ins);
                let bits = run_trajectory(&circuit, &mut srng, noise)?;
                let nf = circuit.num_qubits();
                for b in &frag.out_boundaries {
                    boundary_outcome[frags.cut_index(b.cut_id)] =
                        (bits >> (nf - 1 - b.local_qubit) & 1) as u8;
                }
                frag_bits[fi] = bits;
            }
            let mut global = 0u64;
            for (q, bit) in outputs.iter().enumerate() {
                let nf = frags.fragments[bit.fragment].num_qubits();
                if frag_bits[bit.fragment] >> (nf - 1 - bit.local_qubit) & 1 == 1 {
                    global |= 1 << (n - 1 - q);
                }
            }
            *acc.entry(global).or_insert(0.0) += choice.weight;
            Ok(acc)
        })
        .try_reduce(HashMap::new, |mut a, b| {
            for (key, w) in b {
                *a.entry(key).or_insert(0.0) += w;
            }
            Ok(a)
        })?;

    // Weights are signed integers well inside f64's exact range, so the
    // sums above are order-independent and the division here is the only
    // rounding step.
    let weights: BTreeMap<String, f64> = acc
        .into_iter()
        .map(|(idx, w)| (index_to_bitstring(idx, n), w / num_samples as f64))
        .collect();
    QuasiDistribution::new(n, weights)
}

/// Fragment run configurations for the exact-channel expansion.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum ROut {
    Plain,
    Cl(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum RIn {
    Prep(PrepState),
    /// Prepare the upstream outcome, then undo the indexed Clifford.
    ClPrep(usize, u8),
}

type RConfig = (Vec<ROut>, Vec<RIn>);

/// Per-cut term index layout: 0..48 are (Clifford element, outcome) pairs
/// with coefficient 3/5 * 5 / 24 = 1/8; 48..52 are (reinit, outcome) pairs
/// with coefficient 2/5 * 5 * 1/2 * (-1) = -1.
const EXACT_TERMS_PER_CUT: usize = 2 * CLIFFORD_1Q_SIZE + 4;

fn exact_term_meta(t: usize) -> TermMeta {
    if t < 2 * CLIFFORD_1Q_SIZE {
        TermMeta {
            coeff: 1.0 / 8.0,
            outcome: (t % 2) as u8,
        }
    } else {
        TermMeta {
            coeff: -1.0,
            outcome: ((t - 2 * CLIFFORD_1Q_SIZE) % 2) as u8,
        }
    }
}

fn exact_term_reinit(t: usize) -> PrepState {
    if (t - 2 * CLIFFORD_1Q_SIZE) / 2 == 0 {
        PrepState::Zero
    } else {
        PrepState::One
    }
}

/// Deterministic evaluation of the Clifford-channel estimator's expected
/// value, by enumerating every branch of every cut instead of sampling.
/// Equals the uncut distribution to numerical precision, which is the
/// identity the Monte Carlo estimator's unbiasedness rests on.
pub fn randomized_exact_distribution(
    frags: &FragmentSet,
) -> Result<QuasiDistribution, WirecutError> {
    if frags.num_cuts() == 0 {
        return Err(WirecutError::NoCuts);
    }
    let k = frags.num_cuts();
    let per_cut: Vec<Vec<TermMeta>> = (0..k)
        .map(|_| (0..EXACT_TERMS_PER_CUT).map(exact_term_meta).collect())
        .collect();

    let mut memo: Vec<HashMap<RConfig, Distribution>> =
        vec![HashMap::new(); frags.fragments.len()];
    let options = SimOptions {
        measure_all_missing: true,
        ..SimOptions::default()
    };

    join_terms(
        frags,
        &per_cut,
        1.0,
        &mut |f, choice| -> RConfig {
            let frag = &frags.fragments[f];
            let outs = frag
                .out_boundaries
                .iter()
                .map(|b| {
                    let t = choice[frags.cut_index(b.cut_id)];
                    if t < 2 * CLIFFORD_1Q_SIZE {
                        ROut::Cl(t / 2)
                    } else {
                        ROut::Plain
                    }
                })
                .collect();
            let ins = frag
                .in_boundaries
                .iter()
                .map(|b| {
                    let t = choice[frags.cut_index(b.cut_id)];
                    if t < 2 * CLIFFORD_1Q_SIZE {
                        RIn::ClPrep(t / 2, (t % 2) as u8)
                    } else {
                        RIn::Prep(exact_term_reinit(t))
                    }
                })
                .collect();
            (outs, ins)
        },
        &mut |f, key: &RConfig| {
            if let Some(dist) = memo[f].get(key) {
                return Ok(dist.clone());
            }
            let frag = &frags.fragments[f];
            let outs: Vec<OutSetting> = key
                .0
                .iter()
                .map(|o| match o {
                    ROut::Plain => OutSetting::Computational,
                    ROut::Cl(el) => OutSetting::Unitary(
                        *clifford_element(*el).expect("enumerated index is in range"),
                    ),
                })
                .collect();
            let ins: Vec<InSetting> = key
                .1
                .iter()
                .map(|i| match i {
                    RIn::Prep(s) => InSetting::Prep(*s),
                    RIn::ClPrep(el, o) => InSetting::PrepThenUnitary(
                        if *o == 0 { PrepState::Zero } else { PrepState::One },
                        clifford_element(*el)
                            .expect("enumerated index is in range")
                            .dagger(),
                    ),
                })
                .collect();
            let circuit = frag.instantiate(&outs, &ins);
            let dist = exact_distribution_with(&circuit, &options)?;
            memo[f].insert(key.clone(), dist.clone());
            Ok(dist)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{ghz_benchmark_circuit, ghz_cut_circuit, Circuit, Operation};
    use crate::sim::exact_distribution;
    use crate::wirecut::fragment;

    #[test]
    fn channel_statistics_match_the_design() {
        let mut rng = derive_rng(11, &[]);
        let trials = 100_000;
        let mut positive = 0u64;
        let mut cliffords = 0u64;
        for _ in 0..trials {
            let choice = sample_channel_choice(&mut rng, 1, CutVariant::Clifford).unwrap();
            assert!(choice.weight == 5.0 || choice.weight == -5.0);
            if choice.weight > 0.0 {
                positive += 1;
                assert!(matches!(choice.per_cut[0], CutChannel::Clifford { .. }));
                cliffords += 1;
            } else {
                assert!(matches!(choice.per_cut[0], CutChannel::Depolarizing { .. }));
            }
        }
        let frac = positive as f64 / trials as f64;
        assert!((frac - 0.6).abs() < 0.01, "unitary branch rate {frac}");
        assert_eq!(positive, cliffords);
    }

    #[test]
    fn weights_scale_as_five_to_the_cuts() {
        let mut rng = derive_rng(3, &[]);
        for k in 1..=3 {
            let choice = sample_channel_choice(&mut rng, k, CutVariant::Clifford).unwrap();
            assert_eq!(choice.per_cut.len(), k);
            assert!((choice.weight.abs() - 5f64.powi(k as i32)).abs() < 1e-12);
        }
        assert!(matches!(
            sample_channel_choice(&mut rng, 0, CutVariant::Clifford),
            Err(WirecutError::NoCuts)
        ));
    }

    #[test]
    fn rotation_variant_draws_rotations() {
        let mut rng = derive_rng(5, &[]);
        let mut saw_rotation = false;
        for _ in 0..50 {
            let choice = sample_channel_choice(&mut rng, 1, CutVariant::Rotation).unwrap();
            match choice.per_cut[0] {
                CutChannel::Rotation { theta, .. } => {
                    assert!((0.0..std::f64::consts::TAU).contains(&theta));
                    saw_rotation = true;
                }
                CutChannel::Depolarizing { .. } => {}
                CutChannel::Clifford { .. } => panic!("clifford branch in rotation variant"),
            }
        }
        assert!(saw_rotation);
    }

    fn two_cut_pair() -> (Circuit, Circuit) {
        let mut cut = Circuit::new(4, 4);
        cut.h(0).cx(0, 1);
        cut.push(Operation::Cut { cut_id: 0, qubit: 1 }).unwrap();
        cut.cx(1, 2).ry(2, 0.9);
        cut.push(Operation::Cut { cut_id: 1, qubit: 2 }).unwrap();
        cut.cx(2, 3).measure_all();
        let mut uncut = Circuit::new(4, 4);
        uncut.h(0).cx(0, 1).cx(1, 2).ry(2, 0.9).cx(2, 3).measure_all();
        (cut, uncut)
    }

    #[test]
    fn exact_channel_expansion_matches_uncut_ghz() {
        for n in [3, 4, 5] {
            let frags = fragment(&ghz_cut_circuit(n, 17).unwrap(), None).unwrap();
            let quasi = randomized_exact_distribution(&frags).unwrap();
            let exact = exact_distribution(&ghz_benchmark_circuit(n, 17).unwrap()).unwrap();
            let worst = exact
                .probs()
                .keys()
                .chain(quasi.weights().keys())
                .map(|key| (quasi.get(key) - exact.get(key)).abs())
                .fold(0.0, f64::max);
            assert!(worst < 1e-9, "n = {n}, deviation {worst}");
            assert!((quasi.mass() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_channel_expansion_matches_uncut_with_two_cuts() {
        let (cut, uncut) = two_cut_pair();
        let frags = fragment(&cut, None).unwrap();
        let quasi = randomized_exact_distribution(&frags).unwrap();
        let exact = exact_distribution(&uncut).unwrap();
        let worst = exact
            .probs()
            .keys()
            .chain(quasi.weights().keys())
            .map(|key| (quasi.get(key) - exact.get(key)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-9, "deviation {worst}");
    }

    #[test]
    fn monte_carlo_estimate_converges_with_unit_mass() {
        let frags = fragment(&ghz_cut_circuit(4, 29).unwrap(), None).unwrap();
        let quasi =
            run_randomized_cut(&frags, 400_000, 123, CutVariant::Clifford, None).unwrap();
        let exact = exact_distribution(&ghz_benchmark_circuit(4, 29).unwrap()).unwrap();
        assert!((quasi.mass() - 1.0).abs() < 0.05);
        let worst = exact
            .probs()
            .keys()
            .chain(quasi.weights().keys())
            .map(|key| (quasi.get(key) - exact.get(key)).abs())
            .fold(0.0, f64::max);
        assert!(worst < 0.05, "deviation {worst}");
    }

    #[test]
    fn monte_carlo_estimate_is_deterministic() {
        let frags = fragment(&ghz_cut_circuit(3, 2).unwrap(), None).unwrap();
        let a = run_randomized_cut(&frags, 5_000, 77, CutVariant::Clifford, None).unwrap();
        let b = run_randomized_cut(&frags, 5_000, 77, CutVariant::Clifford, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rotation_variant_runs_but_is_biased() {
        let frags = fragment(&ghz_cut_circuit(3, 41).unwrap(), None).unwrap();
        let quasi =
            run_randomized_cut(&frags, 200_000, 9, CutVariant::Rotation, None).unwrap();
        // Mass still converges to 1; the shape does not.
        assert!((quasi.mass() - 1.0).abs() < 0.05);
        let exact = exact_distribution(&ghz_benchmark_circuit(3, 41).unwrap()).unwrap();
        let worst = exact
            .probs()
            .keys()
            .chain(quasi.weights().keys())
            .map(|key| (quasi.get(key) - exact.get(key)).abs())
            .fold(0.0, f64::max);
        assert!(worst > 0.02, "rotation variant should miss, got {worst}");
    }

    #[test]
    fn uncut_fragment_set_is_rejected() {
        let mut c = Circuit::new(2, 2);
        c.h(0).cx(0, 1).measure_all();
        let frags = fragment(&c, None).unwrap();
        assert!(matches!(
            run_randomized_cut(&frags, 100, 1, CutVariant::Clifford, None),
            Err(WirecutError::NoCuts)
        ));
        assert!(matches!(
            randomized_exact_distribution(&frags),
            Err(WirecutError::NoCuts)
        ));
    }
}
