use crate::indexed::{refine, Indexed};

use super::{Label, Relation, Structure};

type Encoding = Vec<(Relation, Vec<(Label, Label)>)>;

/// Relabels `s` onto `0..n` so that isomorphic inputs give identical output.
///
/// Individualisation-refinement without automorphism pruning: every leaf of
/// the search tree is visited and the least encoding wins. Exponential on
/// highly symmetric inputs, which is acceptable at the sizes used here.
pub fn canonical_form(s: &Structure) -> Structure {
    let ix = Indexed::new(s);
    let mut best: Option<(Encoding, Vec<u32>)> = None;
    search(&ix, ix.loop_colors(), &mut best);
    let perm = match best {
        Some((_, perm)) => perm,
        None => Vec::new(),
    };
    let pos: std::collections::HashMap<Label, Label> = ix
        .labels
        .iter()
        .zip(perm.iter())
        .map(|(&l, &p)| (l, p))
        .collect();
    let mut out = s.map_labels(|l| pos[&l]);
    out.kind_hint = s.kind_hint;
    out
}

fn search(ix: &Indexed, mut colors: Vec<u32>, best: &mut Option<(Encoding, Vec<u32>)>) {
    let mut wrap = [colors];
    refine(&[ix], &mut wrap);
    let [c] = wrap;
    colors = c;
    let n = ix.len();
    let mut counts = vec![0usize; n.max(1)];
    for &c in &colors {
        counts[c as usize] += 1;
    }
    match (0..n).find(|&c| counts[c] > 1) {
        None => {
            let enc = encode(ix, &colors);
            if best.as_ref().is_none_or(|(b, _)| enc < *b) {
                *best = Some((enc, colors));
            }
        }
        Some(cell) => {
            for v in (0..n).filter(|&v| colors[v] as usize == cell) {
                let ind: Vec<u32> = colors
                    .iter()
                    .enumerate()
                    .map(|(u, &c)| 2 * c + (u != v) as u32)
                    .collect();
                search(ix, ind, best);
            }
        }
    }
}

fn encode(ix: &Indexed, perm: &[u32]) -> Encoding {
    ix.rels
        .iter()
        .enumerate()
        .map(|(r, &rel)| {
            let mut pairs: Vec<(Label, Label)> = Vec::new();
            for a in 0..ix.len() {
                if ix.looped[r][a] {
                    pairs.push((perm[a], perm[a]));
                }
                for &b in &ix.out_list[r][a] {
                    pairs.push((perm[a], perm[b]));
                }
            }
            pairs.sort_unstable();
            (rel, pairs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabels_onto_initial_segment() {
        let p2 = Structure::new([5, 9], [(Relation::Edge, vec![(5, 9), (9, 5)])]).unwrap();
        let c = canonical_form(&p2);
        assert_eq!(c, Structure::graph(2, &[(0, 1)]).unwrap());
    }

    #[test]
    fn idempotent_and_invariant() {
        let k3 = Structure::graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let moved = Structure::new(
            [4, 7, 11],
            [(Relation::Edge, vec![(4, 7), (7, 4), (7, 11), (11, 7), (4, 11), (11, 4)])],
        )
        .unwrap();
        assert_eq!(canonical_form(&k3), canonical_form(&moved));
        let c = canonical_form(&k3);
        assert_eq!(canonical_form(&c), c);
    }

    #[test]
    fn separates_non_isomorphic() {
        let p3 = Structure::graph(3, &[(0, 1), (1, 2)]).unwrap();
        let k3 = Structure::graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_ne!(canonical_form(&p3), canonical_form(&k3));
    }

    #[test]
    fn empty_structure() {
        let e = Structure::empty(&[Relation::Edge]);
        assert_eq!(canonical_form(&e), e);
    }
}
