use std::collections::{BTreeMap, HashMap};

use crate::coding::{even_relevant_pair, relevant_pair, PairingKind, SeqView};
use crate::structures::{validate, Label, Relation, Structure, StructureClass};

use super::{CodeKind, TreeCode, TreeError, TreeNode, TruncSpec};

/// Equivalence class of a node under the `order` relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKey {
    Terminal,
    Root,
    Pair(u32, u32),
}

/// Class of a sequence node (terminals are always [`ClassKey::Terminal`]).
pub fn class_key<S: SeqView + ?Sized>(s: &S, pairing: PairingKind) -> ClassKey {
    match even_relevant_pair(s, pairing) {
        Ok((a, b)) => ClassKey::Pair(a, b),
        Err(_) => ClassKey::Root,
    }
}

/// T-coding rule: does `s` get its terminal?
pub fn t_terminal<S: SeqView + ?Sized>(
    edge: impl Fn(u32, u32) -> bool,
    s: &S,
    pairing: PairingKind,
) -> bool {
    if s.seq_len().is_multiple_of(2) {
        return true;
    }
    let (a, b) = even_relevant_pair(s, pairing).expect("odd length is nonempty");
    edge(a, b)
}

/// R-coding rule: number of terminals of `s` (0, 1 or 2).
pub fn r_terminals(edge: impl Fn(u32, u32) -> bool, s: &[u32], pairing: PairingKind) -> u8 {
    if s.is_empty() {
        return 0;
    }
    if s.contains(&0) {
        return 2;
    }
    let (a, b) = relevant_pair(s, pairing).expect("nonempty");
    edge(a - 1, b - 1) as u8
}

fn check_graph(x: &Structure, needed: u32, spec: &TruncSpec) -> Result<(), TreeError> {
    spec.check()?;
    let diags = validate(x, StructureClass::Graph);
    if !diags.is_empty() {
        return Err(TreeError::NotAGraph(diags));
    }
    if !x.is_initial_segment() {
        return Err(TreeError::NotInitialSegment);
    }
    if needed > spec.alphabet {
        return Err(TreeError::ExceedsAlphabet {
            vertices: x.len(),
            needed,
            alphabet: spec.alphabet,
        });
    }
    Ok(())
}

/// T-code of `x`. Requires `x` to be a graph on `0..n` with `n ≤ alphabet`.
pub fn build_t(x: &Structure, spec: TruncSpec) -> Result<TreeCode, TreeError> {
    check_graph(x, x.len() as u32, &spec)?;
    let edge = |a: u32, b: u32| x.holds(Relation::Edge, a, b);
    Ok(assemble(x, spec, CodeKind::T, |s| t_terminal(edge, s, spec.pairing) as u8))
}

/// R-code of `x`. Requires `x` to be a graph on `0..n` with
/// `n + 1 ≤ alphabet`.
pub fn build_r(x: &Structure, spec: TruncSpec) -> Result<TreeCode, TreeError> {
    check_graph(x, x.len() as u32 + 1, &spec)?;
    let edge = |a: u32, b: u32| x.holds(Relation::Edge, a, b);
    Ok(assemble(x, spec, CodeKind::R, |s| r_terminals(edge, s, spec.pairing)))
}

pub(super) fn all_sequences(spec: &TruncSpec) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..spec.max_len {
        let mut next = Vec::with_capacity(layer.len() * spec.alphabet as usize);
        for s in &layer {
            for v in 0..spec.alphabet {
                let mut t = s.clone();
                t.push(v);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn assemble(
    x: &Structure,
    spec: TruncSpec,
    kind: CodeKind,
    terminals: impl Fn(&[u32]) -> u8,
) -> TreeCode {
    let mut nodes: Vec<TreeNode> = Vec::new();
    for s in all_sequences(&spec) {
        for slot in 0..terminals(&s) {
            nodes.push(TreeNode::Term { parent: s.clone(), slot });
        }
        nodes.push(TreeNode::Seq(s));
    }
    nodes.sort_by(|a, b| a.numbering_key().cmp(&b.numbering_key()));

    let labels: HashMap<TreeNode, Label> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i as Label))
        .collect();

    let mut tree = Vec::new();
    let mut classes: BTreeMap<ClassKey, Vec<Label>> = BTreeMap::new();
    for (i, node) in nodes.iter().enumerate() {
        let i = i as Label;
        let (seq, upto) = match node {
            TreeNode::Seq(s) => (s, s.len()),
            TreeNode::Term { parent, .. } => (parent, parent.len() + 1),
        };
        for k in 0..upto {
            tree.push((labels[&TreeNode::Seq(seq[..k].to_vec())], i));
        }
        let key = match node {
            TreeNode::Term { .. } => ClassKey::Terminal,
            TreeNode::Seq(s) => class_key(s, spec.pairing),
        };
        classes.entry(key).or_default().push(i);
    }
    let order = classes
        .values()
        .flat_map(|c| c.iter().flat_map(move |&a| c.iter().map(move |&b| (a, b))));

    let structure = Structure::new(
        0..nodes.len() as Label,
        [(Relation::Order, order.collect::<Vec<_>>()), (Relation::Tree, tree)],
    )
    .expect("labels are in range")
    .with_hint(StructureClass::OrderedSetTree);

    TreeCode {
        structure,
        provenance: nodes
            .into_iter()
            .enumerate()
            .map(|(i, n)| (i as Label, n))
            .collect(),
        labels,
        kind,
        spec,
        source: x.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::StructureClass;

    fn one_vertex() -> Structure {
        Structure::graph(1, &[]).unwrap()
    }

    fn seq(s: &[u32]) -> TreeNode {
        TreeNode::Seq(s.to_vec())
    }

    fn term(s: &[u32], slot: u8) -> TreeNode {
        TreeNode::Term { parent: s.to_vec(), slot }
    }

    #[test]
    fn t_code_of_one_vertex() {
        let code = build_t(&one_vertex(), TruncSpec::new(2, 1)).unwrap();
        assert_eq!(code.len(), 5);
        let terms: Vec<_> = code.nodes().filter(|(_, n)| n.is_term()).map(|(_, n)| n.clone()).collect();
        assert_eq!(terms, vec![term(&[], 0), term(&[0, 0], 0)]);
        assert!(validate(code.structure(), StructureClass::OrderedSetTree).is_empty());

        let l = |n: &TreeNode| code.label(n).unwrap();
        let order = code.structure().relation(Relation::Order).unwrap();
        assert!(order.contains(&(l(&seq(&[0])), l(&seq(&[0, 0])))));
        assert!(order.contains(&(l(&term(&[], 0)), l(&term(&[0, 0], 0)))));
        assert!(!order.contains(&(l(&seq(&[])), l(&seq(&[0])))));
        // three classes: 2×2 + 1 + 2×2 pairs
        assert_eq!(order.len(), 9);
    }

    #[test]
    fn t_code_of_empty_graph() {
        let code = build_t(&Structure::graph(0, &[]).unwrap(), TruncSpec::new(1, 1)).unwrap();
        // ∅ with its terminal, ⟨0⟩ without (no edges)
        assert_eq!(code.len(), 3);
        assert_eq!(code.terminals_of(&[0]), 0);
    }

    #[test]
    fn r_code_of_one_vertex() {
        let code = build_r(&one_vertex(), TruncSpec::new(2, 2)).unwrap();
        assert_eq!(code.len(), 15);
        for s in [&[0][..], &[0, 0], &[0, 1], &[1, 0]] {
            assert_eq!(code.terminals_of(s), 2, "{s:?}");
        }
        for s in [&[][..], &[1], &[1, 1]] {
            assert_eq!(code.terminals_of(s), 0, "{s:?}");
        }
        assert!(validate(code.structure(), StructureClass::OrderedSetTree).is_empty());
    }

    #[test]
    fn r_code_single_terminals_start_at_length_two() {
        let x = Structure::graph(2, &[(0, 1)]).unwrap();
        let code = build_r(&x, TruncSpec::new(2, 3)).unwrap();
        assert_eq!(code.terminals_of(&[1]), 0);
        assert_eq!(code.terminals_of(&[2]), 0);
        // rp(⟨1,2⟩) = (2,1) codes the edge (1,0)
        assert_eq!(code.terminals_of(&[1, 2]), 1);
        assert_eq!(code.terminals_of(&[2, 1]), 1);
        assert_eq!(code.terminals_of(&[1, 1]), 0);
    }

    #[test]
    fn preconditions() {
        let k2 = Structure::graph(2, &[(0, 1)]).unwrap();
        assert!(matches!(
            build_t(&k2, TruncSpec::new(2, 1)),
            Err(TreeError::ExceedsAlphabet { .. })
        ));
        assert!(matches!(
            build_r(&k2, TruncSpec::new(2, 2)),
            Err(TreeError::ExceedsAlphabet { needed: 3, .. })
        ));
        assert!(matches!(build_t(&k2, TruncSpec::new(0, 2)), Err(TreeError::InvalidSpec(_))));
        let shifted = Structure::new([1, 2], [(Relation::Edge, vec![])]).unwrap();
        assert_eq!(build_t(&shifted, TruncSpec::new(1, 3)).unwrap_err(), TreeError::NotInitialSegment);
        let directed = Structure::new(0..2, [(Relation::Edge, vec![(0, 1)])]).unwrap();
        assert!(matches!(build_t(&directed, TruncSpec::new(1, 2)), Err(TreeError::NotAGraph(_))));
    }
}
