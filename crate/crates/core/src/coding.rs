//! Sequence arithmetic shared by the tree codings: a pairing bijection
//! `ω × ω → ω` with `n, m ≤ ⟨n, m⟩`, the even-index subsequence, and the
//! relevant pair of a nonempty sequence.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A bijection between pairs of naturals and naturals with
/// `n ≤ pair(n, m)` and `m ≤ pair(n, m)`.
pub trait Pairing {
    fn pair(&self, n: u64, m: u64) -> u64;
    fn unpair(&self, k: u64) -> (u64, u64);

    /// Least `k` with `unpair(k) = (n, m)`, `n, m ≥ floor`, and `n ≠ m`
    /// when `distinct`. The default scans upward from `floor`, which is a
    /// valid start because `n ≤ pair(n, m)`.
    fn least_index_beyond(&self, floor: u64, distinct: bool) -> u64 {
        (floor..)
            .find(|&k| {
                let (n, m) = self.unpair(k);
                n >= floor && m >= floor && (!distinct || n != m)
            })
            .expect("pairing is onto")
    }
}

/// Which conforming pairing a coding uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairingKind {
    /// `⟨n, m⟩ = (n + m)(n + m + 1)/2 + m`.
    #[default]
    Cantor,
    /// The same diagonals walked the other way: `(n + m)(n + m + 1)/2 + n`.
    SwappedCantor,
}

fn triangle(d: u64) -> u64 {
    d * (d + 1) / 2
}

/// Largest `d` with `d(d+1)/2 ≤ k`.
fn diagonal(k: u64) -> u64 {
    let k = k as u128;
    let mut d = (((8 * k + 1) as f64).sqrt() as u128).saturating_sub(1) / 2;
    while (d + 1) * (d + 2) / 2 <= k {
        d += 1;
    }
    while d * (d + 1) / 2 > k {
        d -= 1;
    }
    d as u64
}

impl Pairing for PairingKind {
    fn pair(&self, n: u64, m: u64) -> u64 {
        let base = triangle(n + m);
        match self {
            PairingKind::Cantor => base + m,
            PairingKind::SwappedCantor => base + n,
        }
    }

    fn unpair(&self, k: u64) -> (u64, u64) {
        let d = diagonal(k);
        let off = k - triangle(d);
        match self {
            PairingKind::Cantor => (d - off, off),
            PairingKind::SwappedCantor => (off, d - off),
        }
    }

    fn least_index_beyond(&self, floor: u64, distinct: bool) -> u64 {
        // Indices on diagonal d all precede those on d + 1, so the first
        // diagonal with a feasible point wins; on it the offset is minimal
        // when the coordinate carrying the offset is `floor`.
        let d = 2 * floor + distinct as u64;
        triangle(d) + floor
    }
}

pub fn pair_index(n: u64, m: u64) -> u64 {
    PairingKind::Cantor.pair(n, m)
}

pub fn unpair_index(k: u64) -> (u64, u64) {
    PairingKind::Cantor.unpair(k)
}

/// Read-only view of a natural-number sequence; lets the coding rules run
/// on dense vectors and on sparse very long sequences alike.
pub trait SeqView {
    fn seq_len(&self) -> u64;
    fn at(&self, i: u64) -> u32;
}

impl SeqView for [u32] {
    fn seq_len(&self) -> u64 {
        self.len() as u64
    }
    fn at(&self, i: u64) -> u32 {
        self[i as usize]
    }
}

impl SeqView for Vec<u32> {
    fn seq_len(&self) -> u64 {
        self.len() as u64
    }
    fn at(&self, i: u64) -> u32 {
        self[i as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodingError {
    #[error("relevant pair of the empty sequence is undefined")]
    EmptySequence,
}

/// `⟨s(2i) | 2i < |s|⟩`.
pub fn even_subsequence(s: &[u32]) -> Vec<u32> {
    s.iter().step_by(2).copied().collect()
}

/// `(s(n), s(m))` where `|s| = ⟨n, m⟩ + 1`.
pub fn relevant_pair(s: &[u32], pairing: PairingKind) -> Result<(u32, u32), CodingError> {
    relevant_pair_of(s, pairing)
}

pub fn relevant_pair_of<S: SeqView + ?Sized>(
    s: &S,
    pairing: PairingKind,
) -> Result<(u32, u32), CodingError> {
    let len = s.seq_len();
    if len == 0 {
        return Err(CodingError::EmptySequence);
    }
    let (n, m) = pairing.unpair(len - 1);
    Ok((s.at(n), s.at(m)))
}

/// Relevant pair of the even subsequence, read off `s` directly:
/// `s^E(i) = s(2i)` and `|s^E| = ⌈|s|/2⌉`.
pub fn even_relevant_pair<S: SeqView + ?Sized>(
    s: &S,
    pairing: PairingKind,
) -> Result<(u32, u32), CodingError> {
    let len = s.seq_len();
    if len == 0 {
        return Err(CodingError::EmptySequence);
    }
    let (n, m) = pairing.unpair(len.div_ceil(2) - 1);
    Ok((s.at(2 * n), s.at(2 * m)))
}

/// Least `L` such that a sequence of length `2L` extending a constrained
/// prefix of length `prefix + 1` has its even-subsequence relevant pair at
/// two free positions (`2n, 2m > prefix`), distinct when `distinct`.
/// `None` when the answer does not fit in a `u64`.
pub fn even_extension_half_length(prefix: u64, distinct: bool, pairing: PairingKind) -> Option<u64> {
    let floor = prefix / 2 + 1;
    // Guard the closed form against overflow before delegating.
    let d = 2 * floor as u128 + distinct as u128;
    if d * (d + 1) / 2 + floor as u128 + 1 > u64::MAX as u128 {
        return None;
    }
    Some(pairing.least_index_beyond(floor, distinct) + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn first_indices() {
        assert_eq!(pair_index(0, 0), 0);
        // Cantor anti-diagonals: 0 ↦ (0,0), 1 ↦ (1,0), 2 ↦ (0,1), 3 ↦ (2,0)
        let by_hand = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0)];
        for (k, &nm) in by_hand.iter().enumerate() {
            assert_eq!(unpair_index(k as u64), nm);
        }
    }

    #[test]
    fn even_subsequences() {
        assert_eq!(even_subsequence(&[]), Vec::<u32>::new());
        assert_eq!(even_subsequence(&[7, 3, 5]), vec![7, 5]);
        assert_eq!(even_subsequence(&[4, 9]), vec![4]);
    }

    #[test]
    fn relevant_pairs() {
        let c = PairingKind::Cantor;
        assert_eq!(relevant_pair(&[5], c), Ok((5, 5)));
        assert_eq!(relevant_pair(&[1, 2], c), Ok((2, 1)));
        assert_eq!(relevant_pair(&[1, 2, 3], c), Ok((1, 2)));
        assert_eq!(relevant_pair(&[], c), Err(CodingError::EmptySequence));
    }

    #[test]
    fn even_relevant_pair_matches_composition() {
        for pairing in [PairingKind::Cantor, PairingKind::SwappedCantor] {
            for len in 1..40u32 {
                let s: Vec<u32> = (0..len).map(|i| i * 7 % 11).collect();
                assert_eq!(
                    even_relevant_pair(&s, pairing).unwrap(),
                    relevant_pair(&even_subsequence(&s), pairing).unwrap()
                );
            }
        }
    }

    #[test]
    fn exhaustive_inverse_and_bound() {
        for pairing in [PairingKind::Cantor, PairingKind::SwappedCantor] {
            for n in 0..=50 {
                for m in 0..=50 {
                    let k = pairing.pair(n, m);
                    assert_eq!(pairing.unpair(k), (n, m));
                    assert!(n <= k && m <= k);
                }
            }
            for k in 0..2000 {
                let (n, m) = pairing.unpair(k);
                assert_eq!(pairing.pair(n, m), k);
            }
        }
    }

    #[test]
    fn relevant_pair_in_bounds() {
        for len in 1..=50u32 {
            let s: Vec<u32> = (0..len).collect();
            let (a, b) = relevant_pair(&s, PairingKind::Cantor).unwrap();
            assert!(a < len && b < len);
        }
    }

    #[test]
    fn closed_form_least_index_matches_scan() {
        struct Scan(PairingKind);
        impl Pairing for Scan {
            fn pair(&self, n: u64, m: u64) -> u64 {
                self.0.pair(n, m)
            }
            fn unpair(&self, k: u64) -> (u64, u64) {
                self.0.unpair(k)
            }
        }
        for pairing in [PairingKind::Cantor, PairingKind::SwappedCantor] {
            for floor in 0..40 {
                for distinct in [false, true] {
                    assert_eq!(
                        pairing.least_index_beyond(floor, distinct),
                        Scan(pairing).least_index_beyond(floor, distinct)
                    );
                }
            }
        }
    }

    #[test]
    fn extension_lengths_land_beyond_the_prefix() {
        for pairing in [PairingKind::Cantor, PairingKind::SwappedCantor] {
            for prefix in 0..=20u64 {
                for distinct in [false, true] {
                    let l = even_extension_half_length(prefix, distinct, pairing).unwrap();
                    let (n, m) = pairing.unpair(l - 1);
                    assert!(2 * n > prefix && 2 * m > prefix);
                    assert_eq!(n != m, distinct);
                    // nothing shorter works
                    for shorter in 1..l {
                        let (n, m) = pairing.unpair(shorter - 1);
                        assert!(!(2 * n > prefix && 2 * m > prefix && (!distinct || n != m)));
                    }
                }
            }
        }
        assert_eq!(even_extension_half_length(0, false, PairingKind::Cantor), Some(5));
        assert_eq!(even_extension_half_length(u64::MAX / 2, true, PairingKind::Cantor), None);
    }

    #[test]
    fn diagonal_of_large_indices() {
        let k = pair_index(3_000_000_000, 17);
        assert_eq!(unpair_index(k), (3_000_000_000, 17));
    }

    proptest! {
        #[test]
        fn unpair_pair_roundtrip(n in 0u64..1_000_000, m in 0u64..1_000_000) {
            prop_assert_eq!(unpair_index(pair_index(n, m)), (n, m));
            prop_assert_eq!(PairingKind::SwappedCantor.unpair(PairingKind::SwappedCantor.pair(n, m)), (n, m));
        }
    }
}
