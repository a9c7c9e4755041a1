//! Finite equivalence relations: reductions, classwise isomorphisms, the
//! Schröder–Bernstein chain construction on quotients, disjoint unions,
//! saturation and essential refinement.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("{0} is not a reduction")]
    NotReduction(&'static str),
    #[error("factoring of {map} is not injective: blocks {} and {} have the same image", .blocks.0, .blocks.1)]
    NonInjective { map: &'static str, blocks: (usize, usize) },
    #[error("set is not saturated: block {0} is only partly inside")]
    NotSaturated(usize),
    #[error("element outside the ground set: {0}")]
    NotInGround(String),
}

/// A partition of a finite ground set into nonempty blocks, kept sorted by
/// least element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPartition<T: Ord> {
    blocks: Vec<BTreeSet<T>>,
    index: BTreeMap<T, usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionDocument<T> {
    ground: Vec<T>,
    blocks: Vec<Vec<T>>,
}

impl<T: Ord + Clone + Debug> FinPartition<T> {
    pub fn new(
        ground: impl IntoIterator<Item = T>,
        blocks: impl IntoIterator<Item = impl IntoIterator<Item = T>>,
    ) -> Result<Self, QuotientError> {
        let ground: BTreeSet<T> = ground.into_iter().collect();
        let mut blocks: Vec<BTreeSet<T>> = blocks.into_iter().map(|b| b.into_iter().collect()).collect();
        if blocks.iter().any(BTreeSet::is_empty) {
            return Err(QuotientError::InvalidPartition("empty block".into()));
        }
        blocks.sort_by(|a, b| a.first().cmp(&b.first()));
        let mut index = BTreeMap::new();
        for (i, b) in blocks.iter().enumerate() {
            for x in b {
                if !ground.contains(x) {
                    return Err(QuotientError::InvalidPartition(format!("{x:?} is not in the ground set")));
                }
                if index.insert(x.clone(), i).is_some() {
                    return Err(QuotientError::InvalidPartition(format!("{x:?} lies in two blocks")));
                }
            }
        }
        if let Some(x) = ground.iter().find(|x| !index.contains_key(*x)) {
            return Err(QuotientError::InvalidPartition(format!("{x:?} lies in no block")));
        }
        Ok(FinPartition { blocks, index })
    }

    /// Every element in its own block.
    pub fn discrete(ground: impl IntoIterator<Item = T>) -> Self {
        let ground: Vec<T> = ground.into_iter().collect();
        FinPartition::new(ground.clone(), ground.into_iter().map(|x| [x])).expect("singletons partition")
    }

    pub fn ground(&self) -> impl Iterator<Item = &T> {
        self.index.keys()
    }

    pub fn ground_len(&self) -> usize {
        self.index.len()
    }

    pub fn blocks(&self) -> &[BTreeSet<T>] {
        &self.blocks
    }

    pub fn block_of(&self, x: &T) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.index.contains_key(x)
    }

    pub fn related(&self, x: &T, y: &T) -> bool {
        matches!((self.block_of(x), self.block_of(y)), (Some(a), Some(b)) if a == b)
    }
}

impl<T: Ord + Clone + Debug + Serialize> FinPartition<T> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PartitionDocument {
            ground: self.ground().cloned().collect(),
            blocks: self.blocks.iter().map(|b| b.iter().cloned().collect()).collect(),
        })
        .expect("serializable")
    }
}

impl<T: Ord + Clone + Debug + for<'de> Deserialize<'de>> FinPartition<T> {
    pub fn from_json(bytes: &[u8]) -> Result<Self, QuotientError> {
        let doc: PartitionDocument<T> =
            serde_json::from_slice(bytes).map_err(|e| QuotientError::InvalidPartition(e.to_string()))?;
        FinPartition::new(doc.ground, doc.blocks)
    }
}

/// A total function between ground sets.
pub type ReductionMap<A, B> = BTreeMap<A, B>;

/// Block-level map induced by `f`, if `f` is total, lands in `g`, and
/// sends each `e`-block into a single `g`-block.
pub fn factor<A, B>(f: &ReductionMap<A, B>, e: &FinPartition<A>, g: &FinPartition<B>) -> Option<Vec<usize>>
where
    A: Ord + Clone + Debug,
    B: Ord + Clone + Debug,
{
    e.blocks
        .iter()
        .map(|block| {
            let mut targets = block.iter().map(|x| f.get(x).and_then(|y| g.block_of(y)));
            let first = targets.next()??;
            targets.all(|t| t == Some(first)).then_some(first)
        })
        .collect()
}

fn first_collision(h: &[usize]) -> Option<(usize, usize)> {
    let mut seen = BTreeMap::new();
    for (i, &t) in h.iter().enumerate() {
        if let Some(&j) = seen.get(&t) {
            return Some((j, i));
        }
        seen.insert(t, i);
    }
    None
}

/// `x E y ⟺ f(x) F f(y)` for all `x, y`; false when `f` is not total.
pub fn check_reduction<A, B>(f: &ReductionMap<A, B>, e: &FinPartition<A>, g: &FinPartition<B>) -> bool
where
    A: Ord + Clone + Debug,
    B: Ord + Clone + Debug,
{
    factor(f, e, g).is_some_and(|h| first_collision(&h).is_none())
}

/// Both maps are reductions and their factorings are mutually inverse
/// bijections between the quotients.
pub fn check_classwise_iso<A, B>(
    phi: &ReductionMap<A, B>,
    psi: &ReductionMap<B, A>,
    e: &FinPartition<A>,
    g: &FinPartition<B>,
) -> bool
where
    A: Ord + Clone + Debug,
    B: Ord + Clone + Debug,
{
    let (Some(ph), Some(ps)) = (factor(phi, e, g), factor(psi, g, e)) else {
        return false;
    };
    ph.len() == ps.len()
        && (0..ph.len()).all(|a| ps[ph[a]] == a)
        && (0..ps.len()).all(|b| ph[ps[b]] == b)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SbResult<A: Ord, B: Ord> {
    /// `e`-block index to `g`-block index.
    pub bijection: Vec<usize>,
    pub phi: ReductionMap<A, B>,
    pub psi: ReductionMap<B, A>,
}

/// Schröder–Bernstein on the quotients. Each `e`-block is traced back
/// through `ψ̂` and `φ̂`; a block whose chain starts at a `g`-block outside
/// the image of `φ̂` is sent along `ψ̂⁻¹`, every other block along `φ̂`.
/// The liftings pick the least element of each target block.
pub fn sb_bijection<A, B>(
    e: &FinPartition<A>,
    g: &FinPartition<B>,
    phi: &ReductionMap<A, B>,
    psi: &ReductionMap<B, A>,
) -> Result<SbResult<A, B>, QuotientError>
where
    A: Ord + Clone + Debug,
    B: Ord + Clone + Debug,
{
    let ph = factor(phi, e, g).ok_or(QuotientError::NotReduction("phi"))?;
    let ps = factor(psi, g, e).ok_or(QuotientError::NotReduction("psi"))?;
    if let Some(blocks) = first_collision(&ph) {
        return Err(QuotientError::NonInjective { map: "phi", blocks });
    }
    if let Some(blocks) = first_collision(&ps) {
        return Err(QuotientError::NonInjective { map: "psi", blocks });
    }
    let mut ph_inv = vec![None; g.blocks.len()];
    for (a, &b) in ph.iter().enumerate() {
        ph_inv[b] = Some(a);
    }
    let mut ps_inv = vec![None; e.blocks.len()];
    for (b, &a) in ps.iter().enumerate() {
        ps_inv[a] = Some(b);
    }

    let bijection = (0..e.blocks.len())
        .map(|a0| {
            let mut a = a0;
            // Each step back visits a new block unless the chain is a
            // cycle, so the walk ends within |e| steps.
            for _ in 0..=e.blocks.len() {
                let Some(b) = ps_inv[a] else { return ph[a0] };
                let Some(prev) = ph_inv[b] else {
                    return ps_inv[a0].expect("chain passed through a ψ̂-image");
                };
                a = prev;
            }
            ph[a0]
        })
        .collect::<Vec<_>>();
    if let Some(blocks) = first_collision(&bijection) {
        return Err(QuotientError::NonInjective { map: "chain map", blocks });
    }
    if bijection.len() != g.blocks.len() {
        return Err(QuotientError::NotReduction("chain map"));
    }
    let mut inverse = vec![0; g.blocks.len()];
    for (a, &b) in bijection.iter().enumerate() {
        inverse[b] = a;
    }
    let phi = e
        .index
        .iter()
        .map(|(x, &a)| (x.clone(), least(&g.blocks[bijection[a]])))
        .collect();
    let psi = g
        .index
        .iter()
        .map(|(y, &b)| (y.clone(), least(&e.blocks[inverse[b]])))
        .collect();
    Ok(SbResult { bijection, phi, psi })
}

fn least<T: Ord + Clone>(s: &BTreeSet<T>) -> T {
    s.first().cloned().expect("nonempty block")
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tagged<A, B> {
    Left(A),
    Right(B),
}

pub fn disjoint_union<A, B>(e: &FinPartition<A>, g: &FinPartition<B>) -> FinPartition<Tagged<A, B>>
where
    A: Ord + Clone + Debug,
    B: Ord + Clone + Debug,
{
    let left = e.blocks.iter().map(|b| b.iter().cloned().map(Tagged::Left).collect::<Vec<_>>());
    let right = g.blocks.iter().map(|b| b.iter().cloned().map(Tagged::Right).collect::<Vec<_>>());
    let blocks: Vec<Vec<Tagged<A, B>>> = left.chain(right).collect();
    let ground: Vec<Tagged<A, B>> = blocks.iter().flatten().cloned().collect();
    FinPartition::new(ground, blocks).expect("tagged blocks stay disjoint")
}

/// Union of the blocks meeting `a`.
pub fn saturate<T: Ord + Clone + Debug>(a: &BTreeSet<T>, e: &FinPartition<T>) -> Result<BTreeSet<T>, QuotientError> {
    let mut out = BTreeSet::new();
    for x in a {
        let b = e.block_of(x).ok_or_else(|| QuotientError::NotInGround(format!("{x:?}")))?;
        out.extend(e.blocks[b].iter().cloned());
    }
    Ok(out)
}

/// Keeps the blocks inside `xf` and merges everything outside it into one
/// block. `xf` must be saturated.
pub fn essentially_refine<T: Ord + Clone + Debug>(
    e: &FinPartition<T>,
    xf: &BTreeSet<T>,
) -> Result<FinPartition<T>, QuotientError> {
    let mut inside = Vec::new();
    let mut rest = BTreeSet::new();
    for (i, b) in e.blocks.iter().enumerate() {
        match b.iter().filter(|x| xf.contains(*x)).count() {
            0 => rest.extend(b.iter().cloned()),
            n if n == b.len() => inside.push(b.clone()),
            _ => return Err(QuotientError::NotSaturated(i)),
        }
    }
    if let Some(x) = xf.iter().find(|x| !e.contains(x)) {
        return Err(QuotientError::NotInGround(format!("{x:?}")));
    }
    if !rest.is_empty() {
        inside.push(rest);
    }
    FinPartition::new(e.ground().cloned().collect::<Vec<_>>(), inside)
}

/// Two partitions of `u32` labels with reductions each way.
pub type SbInstance = (FinPartition<u32>, FinPartition<u32>, ReductionMap<u32, u32>, ReductionMap<u32, u32>);

/// A random instance with `n ≤ max_blocks` blocks on each side (sizes 1 to
/// 3) and reductions whose factorings are bijections.
pub fn random_instance(
    rng: &mut impl Rng,
    max_blocks: usize,
) -> SbInstance {
    let n = rng.gen_range(1..=max_blocks);
    let partition = |rng: &mut dyn rand::RngCore| {
        let sizes: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let total: u32 = sizes.iter().sum();
        let mut labels: Vec<u32> = (0..total).collect();
        labels.shuffle(rng);
        let mut blocks = Vec::new();
        let mut at = 0;
        for s in sizes {
            blocks.push(labels[at as usize..(at + s) as usize].to_vec());
            at += s;
        }
        FinPartition::new(0..total, blocks).expect("shuffled blocks partition")
    };
    let e = partition(rng);
    let g = partition(rng);
    let random_map = |from: &FinPartition<u32>, to: &FinPartition<u32>, rng: &mut dyn rand::RngCore| {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let mut map = ReductionMap::new();
        for (a, block) in from.blocks.iter().enumerate() {
            let target: Vec<u32> = to.blocks[perm[a]].iter().copied().collect();
            for &x in block {
                map.insert(x, *target.choose(rng).expect("nonempty"));
            }
        }
        map
    };
    let phi = random_map(&e, &g, rng);
    let psi = random_map(&g, &e, rng);
    (e, g, phi, psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn part(blocks: &[&[u32]]) -> FinPartition<u32> {
        let ground: Vec<u32> = blocks.iter().flat_map(|b| b.iter().copied()).collect();
        FinPartition::new(ground, blocks.iter().map(|b| b.to_vec())).unwrap()
    }

    fn map(pairs: &[(u32, u32)]) -> ReductionMap<u32, u32> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn partition_validation() {
        assert!(FinPartition::new([0, 1], [vec![0]]).is_err());
        assert!(FinPartition::new([0, 1], [vec![0, 1], vec![1]]).is_err());
        assert!(FinPartition::new([0], [vec![0], vec![]]).is_err());
        assert!(FinPartition::new([0], [vec![0, 5]]).is_err());
        let p = part(&[&[3, 1], &[0]]);
        assert_eq!(p.blocks()[0], BTreeSet::from([0]));
        assert!(p.related(&1, &3) && !p.related(&0, &1));
        let back = FinPartition::<u32>::from_json(p.to_json().to_string().as_bytes()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn reductions() {
        let e = part(&[&[0, 1], &[2]]);
        let id = map(&[(0, 0), (1, 1), (2, 2)]);
        assert!(check_reduction(&id, &e, &e));
        let constant = map(&[(0, 0), (1, 0), (2, 0)]);
        assert!(!check_reduction(&constant, &e, &e));
        assert!(!check_reduction(&map(&[(0, 0), (1, 1)]), &e, &e));
        // collapsing each block to a point
        let points = FinPartition::discrete([7, 8]);
        assert!(check_reduction(&map(&[(0, 7), (1, 7), (2, 8)]), &e, &points));
        assert!(!check_reduction(&map(&[(0, 7), (1, 8), (2, 8)]), &e, &points));
    }

    #[test]
    fn classwise_isomorphisms() {
        let e = part(&[&[0], &[1]]);
        let id = map(&[(0, 0), (1, 1)]);
        assert!(check_classwise_iso(&id, &id, &e, &e));
        let swap = map(&[(0, 1), (1, 0)]);
        // injective factorings that are not mutually inverse
        assert!(!check_classwise_iso(&id, &swap, &e, &e));
        assert!(check_classwise_iso(&swap, &swap, &e, &e));
    }

    #[test]
    fn schroeder_bernstein_examples() {
        let e = part(&[&[0, 1], &[2]]);
        let id = map(&[(0, 0), (1, 1), (2, 2)]);
        let r = sb_bijection(&e, &e, &id, &id).unwrap();
        assert_eq!(r.bijection, vec![0, 1]);
        assert!(check_classwise_iso(&r.phi, &r.psi, &e, &e));

        let g = part(&[&[10], &[11, 12]]);
        let phi = map(&[(0, 11), (1, 12), (2, 10)]);
        let psi = map(&[(10, 0), (11, 2), (12, 2)]);
        let r = sb_bijection(&e, &g, &phi, &psi).unwrap();
        assert_eq!(r.bijection, vec![1, 0]);
        assert!(check_classwise_iso(&r.phi, &r.psi, &e, &g));
        assert_eq!(r.phi[&0], 11);
    }

    #[test]
    fn schroeder_bernstein_errors() {
        let e = part(&[&[0], &[1]]);
        let g = part(&[&[5, 6]]);
        let phi = map(&[(0, 5), (1, 6)]);
        let psi = map(&[(5, 0), (6, 0)]);
        assert_eq!(
            sb_bijection(&e, &g, &phi, &psi).unwrap_err(),
            QuotientError::NonInjective { map: "phi", blocks: (0, 1) }
        );
        let psi_split = map(&[(5, 0), (6, 1)]);
        assert_eq!(
            sb_bijection(&e, &g, &phi, &psi_split).unwrap_err(),
            QuotientError::NotReduction("psi")
        );
    }

    #[test]
    fn random_instances_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (e, g, phi, psi) = random_instance(&mut rng, 20);
            let r = sb_bijection(&e, &g, &phi, &psi).unwrap();
            assert!(check_classwise_iso(&r.phi, &r.psi, &e, &g));
        }
    }

    #[test]
    fn unions() {
        let e = part(&[&[0], &[1, 2]]);
        let g = part(&[&[0], &[1], &[2]]);
        let u = disjoint_union(&e, &g);
        assert_eq!(u.blocks().len(), 5);
        let empty: FinPartition<u32> = FinPartition::new([], Vec::<Vec<u32>>::new()).unwrap();
        assert_eq!(disjoint_union(&e, &empty).blocks().len(), 2);
        let swapped = disjoint_union(&g, &e);
        let untag = |t: &Tagged<u32, u32>| match t {
            Tagged::Left(x) => Tagged::Right(*x),
            Tagged::Right(x) => Tagged::Left(*x),
        };
        let relabeled: BTreeSet<BTreeSet<_>> =
            swapped.blocks().iter().map(|b| b.iter().map(untag).collect()).collect();
        let direct: BTreeSet<BTreeSet<_>> = u.blocks().iter().cloned().collect();
        assert_eq!(relabeled, direct);
    }

    #[test]
    fn saturation() {
        let e = part(&[&[0, 1], &[2], &[3, 4]]);
        assert!(saturate(&BTreeSet::new(), &e).unwrap().is_empty());
        assert_eq!(saturate(&BTreeSet::from([3]), &e).unwrap(), BTreeSet::from([3, 4]));
        let once = saturate(&BTreeSet::from([1, 2]), &e).unwrap();
        assert_eq!(saturate(&once, &e).unwrap(), once);
        assert!(saturate(&BTreeSet::from([9]), &e).is_err());
    }

    #[test]
    fn essential_refinement() {
        let e = part(&[&[0, 1], &[2], &[3, 4]]);
        let all: BTreeSet<u32> = (0..5).collect();
        assert_eq!(essentially_refine(&e, &all).unwrap(), e);
        assert_eq!(essentially_refine(&e, &BTreeSet::new()).unwrap().blocks().len(), 1);
        assert_eq!(essentially_refine(&e, &BTreeSet::from([2])).unwrap().blocks().len(), 2);
        assert_eq!(
            essentially_refine(&e, &BTreeSet::from([0])).unwrap_err(),
            QuotientError::NotSaturated(0)
        );
    }
}
