//! Distribution metrics and shot-budget arithmetic.

use crate::sim::{Distribution, OutcomeWeights};

use super::BenchError;

/// Hellinger distance (1/sqrt(2)) * || sqrt(P) - sqrt(Q) ||_2 between two
/// distributions over the same number of bits. Outcomes missing from one
/// side count as probability zero; the result lies in [0, 1].
pub fn hellinger(p: &Distribution, q: &Distribution) -> Result<f64, BenchError> {
    if p.bits() != q.bits() {
        return Err(BenchError::BitsMismatch {
            left: p.bits(),
            right: q.bits(),
        });
    }
    // Sum of (sqrt(p) - sqrt(q))^2 over the union of supports.
    let mut sum = 0.0;
    for (key, &pv) in p.probs() {
        let qv = q.get(key);
        sum += (pv.sqrt() - qv.sqrt()).powi(2);
    }
    for (key, &qv) in q.probs() {
        if p.get(key) == 0.0 {
            sum += qv;
        }
    }
    Ok((sum / 2.0).sqrt().min(1.0))
}

/// Splits `total` shots evenly over `num_runs` subcircuit runs: floor
/// division, with the remainder going one shot apiece to the lowest-indexed
/// runs. Every run gets at least one shot or the budget is rejected.
pub fn allocate_shots(total: u64, num_runs: usize) -> Result<Vec<u64>, BenchError> {
    if num_runs == 0 {
        return Err(BenchError::NoRuns);
    }
    if total < num_runs as u64 {
        return Err(BenchError::BudgetTooSmall {
            total,
            runs: num_runs,
        });
    }
    let base = total / num_runs as u64;
    let remainder = (total % num_runs as u64) as usize;
    Ok((0..num_runs)
        .map(|i| base + u64::from(i < remainder))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn dist(bits: usize, entries: &[(&str, f64)]) -> Distribution {
        let map: BTreeMap<String, f64> = entries
            .iter()
            .map(|&(k, v)| (k.to_string(), v))
            .collect();
        Distribution::from_probs(bits, map).unwrap()
    }

    #[test]
    fn hellinger_identity_and_disjoint() {
        let p = dist(2, &[("00", 0.25), ("01", 0.75)]);
        assert_eq!(hellinger(&p, &p).unwrap(), 0.0);
        let a = dist(1, &[("0", 1.0)]);
        let b = dist(1, &[("1", 1.0)]);
        assert_eq!(hellinger(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn hellinger_closed_form_case() {
        let p = dist(1, &[("0", 0.5), ("1", 0.5)]);
        let q = dist(1, &[("0", 1.0)]);
        let expected = (1.0 - 0.5f64.sqrt()).sqrt();
        assert!((hellinger(&p, &q).unwrap() - expected).abs() < 1e-12);
        // The textbook four-digit value for the same quantity.
        assert!((hellinger(&p, &q).unwrap() - 0.5412).abs() < 1e-4);
    }

    #[test]
    fn hellinger_is_symmetric() {
        let p = dist(2, &[("00", 0.1), ("01", 0.2), ("10", 0.3), ("11", 0.4)]);
        let q = dist(2, &[("00", 0.7), ("11", 0.3)]);
        assert_eq!(hellinger(&p, &q).unwrap(), hellinger(&q, &p).unwrap());
    }

    #[test]
    fn hellinger_rejects_mixed_widths() {
        let p = dist(1, &[("0", 1.0)]);
        let q = dist(2, &[("00", 1.0)]);
        assert!(matches!(
            hellinger(&p, &q),
            Err(BenchError::BitsMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn allocation_splits_evenly_with_remainder_low() {
        assert_eq!(allocate_shots(3000, 12).unwrap(), vec![250; 12]);
        assert_eq!(allocate_shots(100, 3).unwrap(), vec![34, 33, 33]);
        let plan = allocate_shots(10, 4).unwrap();
        assert_eq!(plan, vec![3, 3, 2, 2]);
        assert_eq!(plan.iter().sum::<u64>(), 10);
    }

    #[test]
    fn allocation_rejects_starved_runs() {
        assert!(matches!(
            allocate_shots(2, 3),
            Err(BenchError::BudgetTooSmall { total: 2, runs: 3 })
        ));
        assert!(matches!(allocate_shots(5, 0), Err(BenchError::NoRuns)));
    }
}
