//! Shared recombination logic for cut reconstructions.
//!
//! Both strategies express a cut as a signed sum over per-cut terms, where
//! each term fixes the upstream boundary outcome it conditions on and a
//! coefficient. Reconstruction walks every combination of terms, filters
//! each fragment's distribution to the required boundary outcomes,
//! marginalizes it onto the wires that feed the final answer, and combines
//! fragments by taking products.

use std::collections::{BTreeMap, HashMap};

use crate::sim::{index_to_bitstring, Distribution};

use super::{FragmentSet, QuasiDistribution, WirecutError};

/// Coefficient and required upstream outcome of one term in a cut's
/// decomposition.
#[derive(Clone, Copy, Debug)]
pub(crate) struct TermMeta {
    pub coeff: f64,
    pub outcome: u8,
}

/// Recombines fragment statistics over every combination of per-cut terms.
///
/// `config_for(f, choice)` names the run configuration fragment `f` needs
/// under the per-cut term choice, and `distribution_for` produces (or looks
/// up) that configuration's outcome distribution. Results are cached per
/// fragment and per the sub-choice restricted to the cuts actually touching
/// that fragment, so a term combination only pays for what changed.
pub(crate) fn join_terms<K: Ord + Clone>(
    frags: &FragmentSet,
    per_cut_terms: &[Vec<TermMeta>],
    prefactor: f64,
    config_for: &mut dyn FnMut(usize, &[usize]) -> K,
    distribution_for: &mut dyn FnMut(usize, &K) -> Result<Distribution, WirecutError>,
) -> Result<QuasiDistribution, WirecutError> {
    let outputs = frags.require_outputs()?;
    let k = frags.num_cuts();
    assert_eq!(per_cut_terms.len(), k, "one term list per cut");
    let num_frags = frags.fragments.len();

    // Per fragment: which cut indices touch it, the boundary wire for each,
    // and which global outputs it carries.
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); num_frags];
    let mut out_wire_of_cut: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_frags];
    for (ci, cut) in frags.cuts.iter().enumerate() {
        touching[cut.upstream.fragment].push(ci);
        touching[cut.downstream.fragment].push(ci);
        out_wire_of_cut[cut.upstream.fragment].push((ci, cut.upstream.local_qubit));
    }
    for t in &mut touching {
        t.sort_unstable();
        t.dedup();
    }
    let mut frag_outputs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_frags];
    for (q, bit) in outputs.iter().enumerate() {
        frag_outputs[bit.fragment].push((q, bit.local_qubit));
    }

    // Marginal cache: (fragment, term sub-choice) -> packed output bits ->
    // summed probability.
    type Marginal = Vec<(u64, f64)>;
    let mut marginals: Vec<HashMap<Vec<usize>, Marginal>> = vec![HashMap::new(); num_frags];

    let n = frags.num_qubits;
    let mut acc: HashMap<u64, f64> = HashMap::new();
    let radices: Vec<usize> = per_cut_terms.iter().map(|t| t.len()).collect();
    let mut choice = vec![0usize; k];
    loop {
        let mut coeff = prefactor;
        for (c, &t) in choice.iter().enumerate() {
            coeff *= per_cut_terms[c][t].coeff;
        }

        // Product over fragments of their filtered marginals.
        let mut partial: Vec<(u64, f64)> = vec![(0, coeff)];
        for f in 0..num_frags {
            let sub: Vec<usize> = touching[f].iter().map(|&c| choice[c]).collect();
            if !marginals[f].contains_key(&sub) {
                let key = config_for(f, &choice);
                let dist = distribution_for(f, &key)?;
                let marginal = filter_marginal(
                    &dist,
                    &out_wire_of_cut[f],
                    &choice,
                    per_cut_terms,
                    &frag_outputs[f],
                );
                marginals[f].insert(sub.clone(), marginal);
            }
            let marginal = &marginals[f][&sub];
            if marginal.is_empty() {
                partial.clear();
                break;
            }
            let mut next = Vec::with_capacity(partial.len() * marginal.len());
            for &(bits, w) in &partial {
                for &(mbits, p) in marginal {
                    next.push((bits | scatter(mbits, &frag_outputs[f], n), w * p));
                }
            }
            partial = next;
        }
        for (bits, w) in partial {
            *acc.entry(bits).or_insert(0.0) += w;
        }

        // Advance the odometer over term choices; done once it wraps.
        let mut pos = 0;
        loop {
            if pos == k {
                let weights: BTreeMap<String, f64> = acc
                    .into_iter()
                    .map(|(idx, w)| (index_to_bitstring(idx, n), w))
                    .collect();
                return QuasiDistribution::new(n, weights);
            }
            choice[pos] += 1;
            if choice[pos] < radices[pos] {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Keeps the entries whose boundary bits match each required outcome and
/// sums them over everything except the fragment's output wires, packing
/// those into an integer keyed by position in `outputs`.
fn filter_marginal(
    dist: &Distribution,
    out_wires: &[(usize, usize)],
    choice: &[usize],
    per_cut_terms: &[Vec<TermMeta>],
    outputs: &[(usize, usize)],
) -> Vec<(u64, f64)> {
    let mut acc: BTreeMap<u64, f64> = BTreeMap::new();
    'entry: for (key, &p) in dist.probs() {
        let bytes = key.as_bytes();
        for &(cut, local) in out_wires {
            let required = per_cut_terms[cut][choice[cut]].outcome;
            let got = bytes[local] - b'0';
            if got != required {
                continue 'entry;
            }
        }
        let mut packed = 0u64;
        for (j, &(_, local)) in outputs.iter().enumerate() {
            if bytes[local] == b'1' {
                packed |= 1 << j;
            }
        }
        *acc.entry(packed).or_insert(0.0) += p;
    }
    acc.into_iter().collect()
}

/// Spreads a fragment's packed output bits into their global positions.
fn scatter(packed: u64, outputs: &[(usize, usize)], n: usize) -> u64 {
    let mut bits = 0u64;
    for (j, &(q, _)) in outputs.iter().enumerate() {
        if packed >> j & 1 == 1 {
            bits |= 1 << (n - 1 - q);
        }
    }
    bits
}
