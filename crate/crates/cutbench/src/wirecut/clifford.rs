//! The 24-element single-qubit Clifford group, indexed deterministically.

use std::sync::OnceLock;

use crate::circuit::Mat2;

use super::WirecutError;

pub const CLIFFORD_1Q_SIZE: usize = 24;

/// Distance below which two phase-aligned matrices count as the same
/// group element. Entries are products of exact H and S matrices, so any
/// genuine mismatch is at least 1/sqrt(2) minus rounding.
const DEDUP_TOL: f64 = 1e-9;

static GROUP: OnceLock<Vec<Mat2>> = OnceLock::new();

/// All 24 single-qubit Cliffords up to global phase, generated by breadth
/// first search over words in H and S. Index 0 is the identity and the
/// ordering is fixed across runs.
pub fn clifford_group_1q() -> &'static [Mat2] {
    GROUP.get_or_init(|| {
        let generators = [Mat2::h(), Mat2::s()];
        let mut elements = vec![canonical_phase(Mat2::identity())];
        let mut frontier = vec![elements[0]];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for m in &frontier {
                for g in &generators {
                    let candidate = canonical_phase(m.mul(g));
                    let known = elements
                        .iter()
                        .any(|e| e.phase_distance(&candidate) < DEDUP_TOL);
                    if !known {
                        elements.push(candidate);
                        next.push(candidate);
                    }
                }
            }
            frontier = next;
        }
        assert_eq!(elements.len(), CLIFFORD_1Q_SIZE, "H and S generate 24 elements");
        elements
    })
}

/// The group element at `index`, or an error when out of range.
pub fn clifford_element(index: usize) -> Result<&'static Mat2, WirecutError> {
    clifford_group_1q()
        .get(index)
        .ok_or(WirecutError::BadCliffordIndex {
            index,
            size: CLIFFORD_1Q_SIZE,
        })
}

/// Rescales a unitary so its first entry of substantial magnitude is real
/// and positive, fixing the global phase. Clifford entries have magnitude
/// 0, 1/sqrt(2), or 1, so "substantial" means anything above 1/2.
fn canonical_phase(m: Mat2) -> Mat2 {
    let entry = [m.0[0][0], m.0[0][1], m.0[1][0], m.0[1][1]]
        .into_iter()
        .find(|e| e.norm() > 0.5)
        .expect("a unitary row has an entry of magnitude >= 1/sqrt(2)");
    let phase = entry / entry.norm();
    Mat2(m.0.map(|row| row.map(|e| e / phase)))
}
