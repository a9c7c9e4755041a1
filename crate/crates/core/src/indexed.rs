//! Dense index view of a [`Structure`] plus colour refinement.

use std::collections::HashMap;

use crate::bitset::BitSet;
use crate::structures::{Label, Relation, Structure};

pub(crate) struct Indexed {
    pub labels: Vec<Label>,
    pub rels: Vec<Relation>,
    /// `out[r][v]`: targets of `v` in relation `r`.
    pub out: Vec<Vec<BitSet>>,
    pub inn: Vec<Vec<BitSet>>,
    pub out_list: Vec<Vec<Vec<usize>>>,
    pub in_list: Vec<Vec<Vec<usize>>>,
    pub looped: Vec<Vec<bool>>,
}

impl Indexed {
    pub fn new(s: &Structure) -> Self {
        let labels: Vec<Label> = s.domain().iter().copied().collect();
        let n = labels.len();
        let pos: HashMap<Label, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let rels: Vec<Relation> = s.signature().collect();
        let mut out = Vec::with_capacity(rels.len());
        let mut inn = Vec::with_capacity(rels.len());
        let mut out_list = Vec::with_capacity(rels.len());
        let mut in_list = Vec::with_capacity(rels.len());
        let mut looped = Vec::with_capacity(rels.len());
        for &r in &rels {
            let mut o = vec![BitSet::new(n); n];
            let mut i = vec![BitSet::new(n); n];
            let mut ol = vec![Vec::new(); n];
            let mut il = vec![Vec::new(); n];
            let mut lp = vec![false; n];
            for &(a, b) in s.relation(r).expect("signature relation") {
                let (a, b) = (pos[&a], pos[&b]);
                if a == b {
                    lp[a] = true;
                    continue;
                }
                o[a].insert(b);
                i[b].insert(a);
                ol[a].push(b);
                il[b].push(a);
            }
            out.push(o);
            inn.push(i);
            out_list.push(ol);
            in_list.push(il);
            looped.push(lp);
        }
        Indexed { labels, rels, out, inn, out_list, in_list, looped }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Colour of each vertex before refinement: its loop pattern.
    pub fn loop_colors(&self) -> Vec<u32> {
        (0..self.len())
            .map(|v| {
                self.looped
                    .iter()
                    .enumerate()
                    .map(|(r, lp)| (lp[v] as u32) << r)
                    .sum()
            })
            .collect()
    }
}

/// Refines the colourings of several structures jointly until stable, so
/// equal colours across structures denote equal refined types. Colours are
/// ranks of signatures and therefore independent of vertex labels.
pub(crate) fn refine(structs: &[&Indexed], colors: &mut [Vec<u32>]) {
    let mut classes = count_classes(colors);
    loop {
        let mut sigs: Vec<Vec<Vec<u32>>> = Vec::with_capacity(structs.len());
        for (s, col) in structs.iter().zip(colors.iter()) {
            let per: Vec<Vec<u32>> = (0..s.len())
                .map(|v| {
                    let mut sig = vec![col[v]];
                    for r in 0..s.rels.len() {
                        for list in [&s.out_list[r][v], &s.in_list[r][v]] {
                            let mut cs: Vec<u32> = list.iter().map(|&u| col[u]).collect();
                            cs.sort_unstable();
                            sig.push(cs.len() as u32);
                            sig.extend(cs);
                        }
                    }
                    sig
                })
                .collect();
            sigs.push(per);
        }
        let mut all: Vec<&Vec<u32>> = sigs.iter().flatten().collect();
        all.sort();
        all.dedup();
        let rank: HashMap<&Vec<u32>, u32> =
            all.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
        for (col, per) in colors.iter_mut().zip(sigs.iter()) {
            for (c, sig) in col.iter_mut().zip(per) {
                *c = rank[sig];
            }
        }
        let next = count_classes(colors);
        if next == classes {
            return;
        }
        classes = next;
    }
}

fn count_classes(colors: &[Vec<u32>]) -> usize {
    let mut all: Vec<u32> = colors.iter().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}
