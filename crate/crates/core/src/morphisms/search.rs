use std::collections::BTreeMap;

use crate::bitset::{ones, words_for, BitSet};
use crate::indexed::{refine, Indexed};
use crate::structures::Structure;

use super::{MorphKind, MorphismError, MorphismWitness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(MorphismWitness),
    Absent,
    /// The node-expansion budget ran out before the search was decided.
    BudgetExhausted { expanded: u64 },
}

/// Exhaustive search for the lexicographically least witness of kind `k`.
pub fn search(
    a: &Structure,
    b: &Structure,
    k: MorphKind,
) -> Result<Option<MorphismWitness>, MorphismError> {
    match search_with_budget(a, b, k, None)? {
        SearchOutcome::Found(w) => Ok(Some(w)),
        SearchOutcome::Absent => Ok(None),
        SearchOutcome::BudgetExhausted { .. } => unreachable!("unbounded search"),
    }
}

/// As [`search`], giving up after `budget` candidate assignments.
///
/// Variables are the source labels in ascending order and candidates are
/// tried in ascending target order, so the first complete assignment found
/// is the least one. Every pruning rule below only discards assignments
/// that cannot extend to a witness.
pub fn search_with_budget(
    a: &Structure,
    b: &Structure,
    k: MorphKind,
    budget: Option<u64>,
) -> Result<SearchOutcome, MorphismError> {
    if !a.same_signature(b) {
        return Err(MorphismError::SignatureMismatch);
    }
    let ia = Indexed::new(a);
    let ib = Indexed::new(b);
    let (na, nb) = (ia.len(), ib.len());

    if (k.injective() && na > nb) || (k.surjective() && na < nb) {
        return Ok(SearchOutcome::Absent);
    }
    if k == MorphKind::Isomorphism {
        let same_sizes = a
            .relations()
            .zip(b.relations())
            .all(|((_, x), (_, y))| x.len() == y.len());
        if !same_sizes {
            return Ok(SearchOutcome::Absent);
        }
    }

    let Some(domains) = initial_domains(&ia, &ib, k) else {
        return Ok(SearchOutcome::Absent);
    };

    let words = words_for(nb);
    let flatten = |ix: &Indexed, rows: &[Vec<BitSet>], r: usize| -> Vec<u64> {
        // Flattened rows with self-loops folded back in, so that mapping two
        // source points onto the same target point is checked correctly.
        let mut flat = vec![0u64; ix.len() * words];
        for v in 0..ix.len() {
            flat[v * words..(v + 1) * words].copy_from_slice(rows[r][v].words());
            if ix.looped[r][v] {
                flat[v * words + v / 64] |= 1 << (v % 64);
            }
        }
        flat
    };
    let b_out: Vec<Vec<u64>> = (0..ib.rels.len()).map(|r| flatten(&ib, &ib.out, r)).collect();
    let b_in: Vec<Vec<u64>> = (0..ib.rels.len()).map(|r| flatten(&ib, &ib.inn, r)).collect();

    let mut ctx = Ctx {
        a: &ia,
        kind: k,
        nb,
        words,
        b_out,
        b_in,
        budget,
        expanded: 0,
        assign: vec![0; na],
        hits: vec![0; nb],
        distinct_hits: 0,
    };
    let mut flat = Vec::with_capacity(na * words);
    for d in &domains {
        flat.extend_from_slice(d.words());
    }
    match ctx.dfs(0, &flat) {
        Err(Exhausted) => Ok(SearchOutcome::BudgetExhausted { expanded: ctx.expanded }),
        Ok(false) => Ok(SearchOutcome::Absent),
        Ok(true) => {
            let map: BTreeMap<_, _> = ctx
                .assign
                .iter()
                .enumerate()
                .map(|(i, &v)| (ia.labels[i], ib.labels[v]))
                .collect();
            Ok(SearchOutcome::Found(MorphismWitness::new(k, map)))
        }
    }
}

fn initial_domains(ia: &Indexed, ib: &Indexed, k: MorphKind) -> Option<Vec<BitSet>> {
    let (na, nb) = (ia.len(), ib.len());
    let colors = if k == MorphKind::Isomorphism {
        let mut c = vec![ia.loop_colors(), ib.loop_colors()];
        refine(&[ia, ib], &mut c);
        let mut ha = c[0].clone();
        let mut hb = c[1].clone();
        ha.sort_unstable();
        hb.sort_unstable();
        if ha != hb {
            return None;
        }
        Some(c)
    } else {
        None
    };
    let rels = ia.rels.len();
    let mut out = Vec::with_capacity(na);
    for x in 0..na {
        let mut d = BitSet::new(nb);
        for y in 0..nb {
            let loops_ok = (0..rels).all(|r| {
                let (la, lb) = (ia.looped[r][x], ib.looped[r][y]);
                if k.reflects() {
                    la == lb
                } else {
                    !la || lb
                }
            });
            if !loops_ok {
                continue;
            }
            if let Some(c) = &colors {
                if c[0][x] != c[1][y] {
                    continue;
                }
            }
            if k == MorphKind::Embedding {
                let degrees_ok = (0..rels).all(|r| {
                    ia.out_list[r][x].len() <= ib.out_list[r][y].len()
                        && ia.in_list[r][x].len() <= ib.in_list[r][y].len()
                });
                if !degrees_ok {
                    continue;
                }
            }
            d.insert(y);
        }
        if d.count() == 0 {
            return None;
        }
        out.push(d);
    }
    Some(out)
}

struct Exhausted;

struct Ctx<'a> {
    a: &'a Indexed,
    kind: MorphKind,
    nb: usize,
    words: usize,
    b_out: Vec<Vec<u64>>,
    b_in: Vec<Vec<u64>>,
    budget: Option<u64>,
    expanded: u64,
    assign: Vec<usize>,
    hits: Vec<u32>,
    distinct_hits: usize,
}

impl Ctx<'_> {
    /// `doms` holds the domains of variables `i..` back to back.
    fn dfs(&mut self, i: usize, doms: &[u64]) -> Result<bool, Exhausted> {
        let na = self.a.len();
        let w = self.words;
        if i == na {
            return Ok(!self.kind.surjective() || self.distinct_hits == self.nb);
        }
        let rest = na - i - 1;
        let candidates: Vec<usize> = ones(&doms[..w]).collect();
        for y in candidates {
            self.expanded += 1;
            if self.budget.is_some_and(|cap| self.expanded > cap) {
                return Err(Exhausted);
            }
            let mut next = doms[w..].to_vec();
            if !self.forward(i, y, &mut next) {
                continue;
            }
            self.hits[y] += 1;
            if self.hits[y] == 1 {
                self.distinct_hits += 1;
            }
            if self.kind.surjective() && !self.coverable(rest, &next) {
                self.unhit(y);
                continue;
            }
            self.assign[i] = y;
            if self.dfs(i + 1, &next)? {
                return Ok(true);
            }
            self.unhit(y);
        }
        Ok(false)
    }

    fn unhit(&mut self, y: usize) {
        self.hits[y] -= 1;
        if self.hits[y] == 0 {
            self.distinct_hits -= 1;
        }
    }

    /// Restricts the domains of later variables after `i ↦ y`. Returns
    /// false if one becomes empty.
    fn forward(&self, i: usize, y: usize, next: &mut [u64]) -> bool {
        let w = self.words;
        let reflects = self.kind.reflects();
        for (off, j) in (i + 1..self.a.len()).enumerate() {
            let row = &mut next[off * w..(off + 1) * w];
            for r in 0..self.a.rels.len() {
                for (a_rows, b_rows) in [(&self.a.out, &self.b_out[r]), (&self.a.inn, &self.b_in[r])] {
                    let related = a_rows[r][i].contains(j);
                    let brow = &b_rows[y * w..(y + 1) * w];
                    if related {
                        row.iter_mut().zip(brow).for_each(|(d, m)| *d &= m);
                    } else if reflects {
                        row.iter_mut().zip(brow).for_each(|(d, m)| *d &= !m);
                    }
                }
            }
            if self.kind.injective() {
                row[y / 64] &= !(1 << (y % 64));
            }
            if row.iter().all(|&x| x == 0) {
                return false;
            }
        }
        true
    }

    /// Every target point not yet hit must still be reachable.
    fn coverable(&self, rest: usize, next: &[u64]) -> bool {
        let missing = self.nb - self.distinct_hits;
        if missing > rest {
            return false;
        }
        if missing == 0 {
            return true;
        }
        let w = self.words;
        let mut union = vec![0u64; w];
        for row in next.chunks(w) {
            union.iter_mut().zip(row).for_each(|(u, r)| *u |= r);
        }
        (0..self.nb).all(|y| self.hits[y] > 0 || union[y / 64] & (1 << (y % 64)) != 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphisms::verify;
    use crate::structures::{Label, Relation};
    use proptest::prelude::*;

    fn p(n: Label) -> Structure {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Structure::graph(n, &edges).unwrap()
    }

    #[test]
    fn p2_into_p3() {
        let w = search(&p(2), &p(3), MorphKind::Embedding).unwrap().unwrap();
        assert_eq!(w.map, [(0, 0), (1, 1)].into_iter().collect());
    }

    #[test]
    fn triangle_does_not_embed_in_path() {
        let k3 = Structure::graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(search(&k3, &p(3), MorphKind::Embedding).unwrap(), None);
    }

    #[test]
    fn identity_is_least_isomorphism() {
        let k3 = Structure::graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        for s in [p(4), k3] {
            let w = search(&s, &s, MorphKind::Isomorphism).unwrap().unwrap();
            assert_eq!(w, MorphismWitness::identity(&s, MorphKind::Isomorphism));
        }
    }

    #[test]
    fn budget_is_reported() {
        let k5 = Structure::graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        let k4 = Structure::graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let out = search_with_budget(&k5, &k4, MorphKind::WeakHomomorphism, Some(10)).unwrap();
        assert!(matches!(out, SearchOutcome::BudgetExhausted { .. }));
        let out = search_with_budget(&k5, &k4, MorphKind::WeakHomomorphism, None).unwrap();
        assert_eq!(out, SearchOutcome::Absent);
    }

    #[test]
    fn empty_source() {
        let e = Structure::empty(&[Relation::Edge]);
        assert!(search(&e, &p(2), MorphKind::Embedding).unwrap().is_some());
        assert!(search(&e, &p(2), MorphKind::Epimorphism).unwrap().is_none());
        assert!(search(&e, &e, MorphKind::Isomorphism).unwrap().is_some());
    }

    /// Reference: walks every map in lexicographic order.
    fn naive(a: &Structure, b: &Structure, k: MorphKind) -> Option<MorphismWitness> {
        let da: Vec<Label> = a.domain().iter().copied().collect();
        let db: Vec<Label> = b.domain().iter().copied().collect();
        if db.is_empty() {
            let w = MorphismWitness::new(k, BTreeMap::new());
            return (da.is_empty() && verify(a, b, &w).unwrap()).then_some(w);
        }
        let mut idx = vec![0usize; da.len()];
        loop {
            let w = MorphismWitness::new(k, da.iter().zip(&idx).map(|(&x, &i)| (x, db[i])).collect());
            if verify(a, b, &w).unwrap() {
                return Some(w);
            }
            let mut pos = da.len();
            loop {
                if pos == 0 {
                    return None;
                }
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < db.len() {
                    break;
                }
                idx[pos] = 0;
            }
        }
    }

    fn arb_structure() -> impl Strategy<Value = Structure> {
        (0u32..=4, proptest::collection::vec((0u32..4, 0u32..4, any::<bool>()), 0..10)).prop_map(
            |(n, pairs)| {
                let mut edge = Vec::new();
                let mut order = Vec::new();
                for (a, b, which) in pairs {
                    if a < n && b < n {
                        if which {
                            edge.push((a, b));
                        } else {
                            order.push((a, b));
                        }
                    }
                }
                Structure::new(0..n, [(Relation::Edge, edge), (Relation::Order, order)]).unwrap()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn agrees_with_naive_enumeration(a in arb_structure(), b in arb_structure()) {
            for k in MorphKind::ALL {
                let got = search(&a, &b, k).unwrap();
                if let Some(w) = &got {
                    prop_assert!(verify(&a, &b, w).unwrap());
                }
                prop_assert_eq!(got, naive(&a, &b, k), "kind {}", k);
            }
        }

        #[test]
        fn isomorphisms_verify_as_every_kind(a in arb_structure()) {
            let w = search(&a, &a, MorphKind::Isomorphism).unwrap().unwrap();
            for k in MorphKind::ALL {
                prop_assert!(verify(&a, &a, &w.with_kind(k)).unwrap());
            }
        }

        #[test]
        fn composition_stays_in_kind(a in arb_structure(), b in arb_structure(), c in arb_structure()) {
            for k in MorphKind::ALL {
                if let (Some(f), Some(g)) = (search(&a, &b, k).unwrap(), search(&b, &c, k).unwrap()) {
                    prop_assert!(verify(&a, &c, &f.then(&g).unwrap()).unwrap(), "kind {}", k);
                }
            }
        }
    }
}
