//! Permutations of `0..2k` that are increasing on the evens and on the
//! odds. Extended by the identity beyond `2k` they are finitely supported
//! members of the closed group used for the sum construction.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::SumError;

/// True when `h` is a permutation of `0..h.len()`.
pub fn is_permutation(h: &[u32]) -> bool {
    let mut seen = vec![false; h.len()];
    h.iter().all(|&v| {
        let v = v as usize;
        v < seen.len() && !std::mem::replace(&mut seen[v], true)
    })
}

pub fn inverse(h: &[u32]) -> Vec<u32> {
    let mut inv = vec![0; h.len()];
    for (i, &v) in h.iter().enumerate() {
        inv[v as usize] = i as u32;
    }
    inv
}

/// `n ≤ m ⟺ h(n) ≤ h(m)` for all same-parity `n, m`.
pub fn is_parity_monotone(h: &[u32]) -> bool {
    (0..2).all(|parity| {
        h.iter()
            .skip(parity)
            .step_by(2)
            .zip(h.iter().skip(parity + 2).step_by(2))
            .all(|(a, b)| a < b)
    })
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct ParityPerm {
    images: Vec<u32>,
}

impl ParityPerm {
    /// The member whose evens land on `evens` (a `k`-subset of `0..2k`).
    pub fn from_even_image(k: usize, evens: &BTreeSet<u32>) -> Result<Self, SumError> {
        if evens.len() != k || evens.iter().any(|&v| v as usize >= 2 * k) {
            return Err(SumError::NotParityMonotone(format!("even image {evens:?} for k = {k}")));
        }
        let mut images = vec![0; 2 * k];
        for (i, &v) in evens.iter().enumerate() {
            images[2 * i] = v;
        }
        let odds = (0..2 * k as u32).filter(|v| !evens.contains(v));
        for (i, v) in odds.enumerate() {
            images[2 * i + 1] = v;
        }
        Ok(ParityPerm { images })
    }

    pub fn identity(k: usize) -> Self {
        ParityPerm { images: (0..2 * k as u32).collect() }
    }

    pub fn k(&self) -> usize {
        self.images.len() / 2
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// Identity beyond `2k`.
    pub fn apply(&self, n: u32) -> u32 {
        self.images.get(n as usize).copied().unwrap_or(n)
    }

    pub fn even_image(&self) -> BTreeSet<u32> {
        self.images.iter().step_by(2).copied().collect()
    }

    pub fn odd_image(&self) -> BTreeSet<u32> {
        self.images.iter().skip(1).step_by(2).copied().collect()
    }
}

impl TryFrom<Vec<u32>> for ParityPerm {
    type Error = SumError;

    fn try_from(images: Vec<u32>) -> Result<Self, SumError> {
        if !images.len().is_multiple_of(2) || !is_permutation(&images) || !is_parity_monotone(&images) {
            return Err(SumError::NotParityMonotone(format!("{images:?}")));
        }
        Ok(ParityPerm { images })
    }
}

impl From<ParityPerm> for Vec<u32> {
    fn from(g: ParityPerm) -> Vec<u32> {
        g.images
    }
}

impl fmt::Debug for ParityPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParityPerm{:?}", self.images)
    }
}

/// All `C(2k, k)` members for `k`, ordered lexicographically by the image
/// set of the evens.
pub fn enumerate_g(k: usize) -> Vec<ParityPerm> {
    let n = 2 * k as u32;
    let mut out = Vec::new();
    let mut chosen: Vec<u32> = Vec::with_capacity(k);
    fn rec(next: u32, n: u32, k: usize, chosen: &mut Vec<u32>, out: &mut Vec<ParityPerm>) {
        if chosen.len() == k {
            let evens = chosen.iter().copied().collect();
            out.push(ParityPerm::from_even_image(k, &evens).expect("k-subset"));
            return;
        }
        for v in next..n {
            if (n - v) as usize >= k - chosen.len() {
                chosen.push(v);
                rec(v + 1, n, k, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(0, n, k, &mut chosen, &mut out);
    out
}

/// Parity decomposition of a permutation `h` of `0..2k`: `g` is the member
/// with `g(evens) = h(evens)`, and `p`, `q` permute `0..k` so that
/// `h(2n) = g(2p(n))` and `h(2n+1) = g(2q(n)+1)`.
pub fn decompose_parity(h: &[u32]) -> Result<(ParityPerm, Vec<u32>, Vec<u32>), SumError> {
    if !h.len().is_multiple_of(2) || !is_permutation(h) {
        return Err(SumError::NotAPermutation(h.to_vec()));
    }
    let k = h.len() / 2;
    let evens: BTreeSet<u32> = h.iter().step_by(2).copied().collect();
    let g = ParityPerm::from_even_image(k, &evens)?;
    let odds: Vec<u32> = g.odd_image().into_iter().collect();
    let evens: Vec<u32> = evens.into_iter().collect();
    let rank = |set: &[u32], v: u32| set.binary_search(&v).expect("member") as u32;
    let p = (0..k).map(|n| rank(&evens, h[2 * n])).collect();
    let q = (0..k).map(|n| rank(&odds, h[2 * n + 1])).collect();
    Ok((g, p, q))
}
