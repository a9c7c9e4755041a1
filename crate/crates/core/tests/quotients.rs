//! Reductions, saturation and the quotient-level bijection.

use std::collections::{BTreeMap, BTreeSet};

use iforge::quotients::{
    check_classwise_iso, check_reduction, essentially_refine, random_instance, saturate, sb_bijection, FinPartition,
    ReductionMap,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Every partition of `0..n`, by restricted growth strings.
fn partitions(n: u32) -> Vec<FinPartition<u32>> {
    fn grow(prefix: &mut Vec<u32>, n: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() as u32 == n {
            out.push(prefix.clone());
            return;
        }
        let top = prefix.iter().max().map_or(0, |m| m + 1);
        for c in 0..=top {
            prefix.push(c);
            grow(prefix, n, out);
            prefix.pop();
        }
    }
    let mut strings = Vec::new();
    grow(&mut Vec::new(), n, &mut strings);
    strings
        .into_iter()
        .map(|rgs| {
            let mut blocks: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
            for (x, &b) in rgs.iter().enumerate() {
                blocks.entry(b).or_default().push(x as u32);
            }
            FinPartition::new(0..n, blocks.into_values()).unwrap()
        })
        .collect()
}

fn maps(n: u32, m: u32) -> Vec<ReductionMap<u32, u32>> {
    (0..m.pow(n))
        .map(|mut code| {
            (0..n)
                .map(|x| {
                    let v = code % m;
                    code /= m;
                    (x, v)
                })
                .collect()
        })
        .collect()
}

#[test]
fn partition_counts_are_bell_numbers() {
    let counts: Vec<usize> = (1..=4).map(|n| partitions(n).len()).collect();
    assert_eq!(counts, vec![1, 2, 5, 15]);
}

#[test]
fn reductions_compose() {
    // all partitions of 0..3 and all maps between them
    let ps = partitions(3);
    let fs = maps(3, 3);
    let mut composed = 0;
    for e in &ps {
        for g in &ps {
            let reductions: Vec<&ReductionMap<u32, u32>> = fs.iter().filter(|f| check_reduction(f, e, g)).collect();
            for k in &ps {
                for f in &reductions {
                    for h in fs.iter().filter(|h| check_reduction(h, g, k)) {
                        let hf: ReductionMap<u32, u32> = f.iter().map(|(&a, b)| (a, h[b])).collect();
                        assert!(check_reduction(&hf, e, k));
                        composed += 1;
                    }
                }
            }
        }
    }
    assert!(composed > 1000);
}

#[test]
fn seeded_bijections_are_classwise_isomorphisms() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let (e, g, phi, psi) = random_instance(&mut rng, 20);
        let r = sb_bijection(&e, &g, &phi, &psi).unwrap();
        assert!(check_classwise_iso(&r.phi, &r.psi, &e, &g));
        let mut seen = r.bijection.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..g.blocks().len()).collect::<Vec<_>>());
    }
}

fn arb_partition() -> impl Strategy<Value = FinPartition<u32>> {
    (1u32..=7).prop_flat_map(|n| {
        proptest::collection::vec(0..n, n as usize).prop_map(move |colour| {
            let mut blocks: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
            for (x, &c) in colour.iter().enumerate() {
                blocks.entry(c).or_default().push(x as u32);
            }
            FinPartition::new(0..n, blocks.into_values()).unwrap()
        })
    })
}

fn arb_subsets() -> impl Strategy<Value = (FinPartition<u32>, BTreeSet<u32>, BTreeSet<u32>)> {
    arb_partition().prop_flat_map(|e| {
        let n = e.ground_len() as u32;
        let small = proptest::collection::btree_set(0..n, 0..=n as usize);
        let extra = proptest::collection::btree_set(0..n, 0..=n as usize);
        (Just(e), small, extra).prop_map(|(e, a, extra)| {
            let b = a.union(&extra).copied().collect();
            (e, a, b)
        })
    })
}

proptest! {
    #[test]
    fn saturation_is_a_closure_operator((e, a, b) in arb_subsets()) {
        let sa = saturate(&a, &e).unwrap();
        let sb = saturate(&b, &e).unwrap();
        prop_assert!(a.is_subset(&sa));
        prop_assert!(sa.is_subset(&sb));
        prop_assert_eq!(saturate(&sa, &e).unwrap(), sa);
    }

    #[test]
    fn essential_refinement_coarsens((e, a, _) in arb_subsets()) {
        let xf = saturate(&a, &e).unwrap();
        let r = essentially_refine(&e, &xf).unwrap();
        for block in e.blocks() {
            let i = r.block_of(block.iter().next().unwrap()).unwrap();
            prop_assert!(block.iter().all(|x| r.block_of(x) == Some(i)));
        }
        let outside: BTreeSet<u32> = e.ground().filter(|x| !xf.contains(x)).copied().collect();
        let one_block = outside.iter().next().is_none_or(|x| {
            let b = &e.blocks()[e.block_of(x).unwrap()];
            *b == outside
        });
        prop_assert_eq!(r.blocks() == e.blocks(), outside.len() <= 1 || one_block);
    }
}
