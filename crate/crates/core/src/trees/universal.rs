//! Embedding of a T-code into the even-length part of another T-code.
//!
//! Image sequences grow roughly quadratically per level (lengths about
//! 16, 400, 163216 and 2.7e10 at depths 1 to 4), so they are stored
//! sparsely, and the target is represented by the fragment of the target
//! code induced on the image nodes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::coding::{even_extension_half_length, even_relevant_pair, SeqView};
use crate::morphisms::{verify, MorphKind, MorphismWitness};
use crate::structures::{validate, Label, Relation, Structure, StructureClass};

use super::build::{build_t, class_key, t_terminal, ClassKey};
use super::{TreeCode, TreeError, TreeNode, TruncSpec};

/// A sequence of naturals stored as its length plus nonzero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseSeq {
    len: u64,
    nonzero: BTreeMap<u64, u32>,
}

impl SparseSeq {
    pub fn from_dense(s: &[u32]) -> Self {
        SparseSeq {
            len: s.len() as u64,
            nonzero: s
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(i, &v)| (i as u64, v))
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Option<Vec<u32>> {
        let len = usize::try_from(self.len).ok()?;
        let mut v = vec![0; len];
        for (&i, &x) in &self.nonzero {
            v[i as usize] = x;
        }
        Some(v)
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn nonzero(&self) -> &BTreeMap<u64, u32> {
        &self.nonzero
    }

    /// Pads with zeros (or truncates) to `len`.
    pub fn resize(&mut self, len: u64) {
        self.nonzero.retain(|&i, _| i < len);
        self.len = len;
    }

    pub fn set(&mut self, i: u64, v: u32) {
        assert!(i < self.len, "index {i} beyond length {}", self.len);
        if v == 0 {
            self.nonzero.remove(&i);
        } else {
            self.nonzero.insert(i, v);
        }
    }

    /// `self ⊆ other` as sequences (not necessarily proper).
    pub fn is_prefix_of(&self, other: &SparseSeq) -> bool {
        self.len <= other.len
            && self.nonzero.iter().all(|(&i, &v)| other.at(i) == v)
            && other.nonzero.range(..self.len).all(|(&i, &v)| self.at(i) == v)
    }

    fn max_entry(&self) -> u32 {
        self.nonzero.values().copied().max().unwrap_or(0)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "len": self.len,
            "nonzero": self.nonzero.iter().map(|(i, v)| [*i, *v as u64]).collect::<Vec<_>>(),
        })
    }
}

impl SeqView for SparseSeq {
    fn seq_len(&self) -> u64 {
        self.len
    }
    fn at(&self, i: u64) -> u32 {
        assert!(i < self.len, "index {i} beyond length {}", self.len);
        self.nonzero.get(&i).copied().unwrap_or(0)
    }
}

impl fmt::Display for SparseSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.nonzero.iter().map(|(i, v)| format!("{i}:{v}")).collect();
        write!(f, "len {} {{{}}}", self.len, entries.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FragmentNode {
    Seq(SparseSeq),
    Term(SparseSeq),
}

impl FragmentNode {
    fn seq(&self) -> &SparseSeq {
        match self {
            FragmentNode::Seq(s) | FragmentNode::Term(s) => s,
        }
    }

    fn depth(&self) -> u64 {
        match self {
            FragmentNode::Seq(s) => s.len,
            FragmentNode::Term(s) => s.len + 1,
        }
    }

    /// Node in a fully built code, when the sequence is short enough to
    /// materialize.
    pub fn to_tree_node(&self) -> Option<TreeNode> {
        Some(match self {
            FragmentNode::Seq(s) => TreeNode::Seq(s.to_dense()?),
            FragmentNode::Term(s) => TreeNode::Term { parent: s.to_dense()?, slot: 0 },
        })
    }

    pub fn to_json(&self) -> Value {
        match self {
            FragmentNode::Seq(s) => json!({ "seq": s.to_json() }),
            FragmentNode::Term(s) => json!({ "term": s.to_json() }),
        }
    }
}

/// Induced substructure of a T-code on a chosen set of nodes.
#[derive(Clone, Debug)]
pub struct CodeFragment {
    structure: Structure,
    provenance: BTreeMap<Label, FragmentNode>,
    host: TruncSpec,
}

impl CodeFragment {
    /// Builds the induced fragment of `build_t(y, host)` on `nodes`,
    /// checking that each node belongs to that code.
    pub fn induced(
        y: &Structure,
        host: TruncSpec,
        nodes: impl IntoIterator<Item = FragmentNode>,
    ) -> Result<CodeFragment, TreeError> {
        host.check()?;
        let edge = |a: u32, b: u32| y.holds(Relation::Edge, a, b);
        let mut nodes: Vec<FragmentNode> = nodes.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        for n in &nodes {
            let s = n.seq();
            let member = s.len <= host.max_len
                && s.max_entry() < host.alphabet
                && match n {
                    FragmentNode::Seq(_) => true,
                    FragmentNode::Term(_) => t_terminal(edge, s, host.pairing),
                };
            if !member {
                return Err(TreeError::MissingImage(format!("{n:?}")));
            }
        }
        nodes.sort_by_key(|n| (n.depth(), matches!(n, FragmentNode::Term(_)), n.seq().clone()));

        let key = |n: &FragmentNode| match n {
            FragmentNode::Term(_) => ClassKey::Terminal,
            FragmentNode::Seq(s) => class_key(s, host.pairing),
        };
        let below = |u: &FragmentNode, v: &FragmentNode| match (u, v) {
            (FragmentNode::Term(_), _) => false,
            (FragmentNode::Seq(a), FragmentNode::Seq(b)) => a.len < b.len && a.is_prefix_of(b),
            (FragmentNode::Seq(a), FragmentNode::Term(b)) => a.is_prefix_of(b),
        };
        let mut tree = Vec::new();
        let mut order = Vec::new();
        for (i, u) in nodes.iter().enumerate() {
            for (j, v) in nodes.iter().enumerate() {
                if below(u, v) {
                    tree.push((i as Label, j as Label));
                }
                if key(u) == key(v) {
                    order.push((i as Label, j as Label));
                }
            }
        }
        let structure = Structure::new(
            0..nodes.len() as Label,
            [(Relation::Order, order), (Relation::Tree, tree)],
        )
        .expect("labels are in range")
        .with_hint(StructureClass::OrderedSetTree);
        Ok(CodeFragment {
            structure,
            provenance: nodes.into_iter().enumerate().map(|(i, n)| (i as Label, n)).collect(),
            host,
        })
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn host(&self) -> TruncSpec {
        self.host
    }

    pub fn node(&self, l: Label) -> Option<&FragmentNode> {
        self.provenance.get(&l)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (Label, &FragmentNode)> {
        self.provenance.iter().map(|(&l, n)| (l, n))
    }

    pub fn provenance_json(&self) -> Value {
        Value::Object(
            self.provenance
                .iter()
                .map(|(l, n)| (l.to_string(), n.to_json()))
                .collect(),
        )
    }
}

#[derive(Clone, Debug)]
pub struct UniversalEmbedding {
    /// Source T-code labels to fragment labels.
    pub witness: MorphismWitness,
    pub source: TreeCode,
    pub target: CodeFragment,
    /// Least truncation of the target code containing every image.
    pub target_spec: TruncSpec,
}

impl UniversalEmbedding {
    /// Checks the witness as an embedding into the fragment. Since the
    /// fragment is induced, this is the same as embedding into the whole
    /// target code.
    pub fn verify(&self) -> Result<bool, TreeError> {
        Ok(verify(self.source.structure(), self.target.structure(), &self.witness)?)
    }

    /// Witness re-expressed against the fully built target code, when its
    /// sequences are short enough to materialize.
    pub fn against(&self, full: &TreeCode) -> Option<MorphismWitness> {
        let map = self
            .witness
            .map
            .iter()
            .map(|(&a, &b)| {
                let node = self.target.node(b)?.to_tree_node()?;
                Some((a, full.label(&node)?))
            })
            .collect::<Option<_>>()?;
        Some(MorphismWitness::new(MorphKind::Embedding, map))
    }
}

/// Embeds `build_t(x, spec)` into `build_t(y, target_spec)`.
///
/// `∅` goes to `∅`. A child `s⌢c` of a node with image `u` goes to the
/// shortest even-length extension `v` of `u` with `v(|u|) = c` whose
/// even-subsequence relevant pair sits at fresh positions, where it is set
/// to the relevant pair of `s⌢c`; every other new entry is 0. Terminals go
/// to the terminal of the image, which exists since images have even
/// length.
pub fn embed_universal_t(
    x: &Structure,
    y: &Structure,
    spec: TruncSpec,
) -> Result<UniversalEmbedding, TreeError> {
    let source = build_t(x, spec)?;
    let diags = validate(y, StructureClass::Graph);
    if !diags.is_empty() {
        return Err(TreeError::NotAGraph(diags));
    }
    if !y.is_initial_segment() {
        return Err(TreeError::NotInitialSegment);
    }

    let mut images: BTreeMap<Vec<u32>, SparseSeq> = BTreeMap::new();
    images.insert(Vec::new(), SparseSeq::default());
    // Labels are numbered by depth, so parents come first.
    for (_, node) in source.nodes() {
        let TreeNode::Seq(s) = node else { continue };
        let Some((&c, parent)) = s.split_last() else { continue };
        let u = &images[parent];
        let p = u.len;
        let (a, b) = even_relevant_pair(s, spec.pairing).expect("nonempty");
        let half = even_extension_half_length(p, a != b, spec.pairing)
            .ok_or_else(|| TreeError::MissingImage(format!("{node}: extension length overflows")))?;
        let (n, m) = crate::coding::Pairing::unpair(&spec.pairing, half - 1);
        let mut v = u.clone();
        v.resize(2 * half);
        v.set(p, c);
        v.set(2 * n, a);
        v.set(2 * m, b);
        debug_assert_eq!(even_relevant_pair(&v, spec.pairing), Ok((a, b)));
        images.insert(s.clone(), v);
    }

    let image_of = |node: &TreeNode| match node {
        TreeNode::Seq(s) => FragmentNode::Seq(images[s].clone()),
        TreeNode::Term { parent, .. } => FragmentNode::Term(images[parent].clone()),
    };
    let max_len = images.values().map(|v| v.len).max().unwrap_or(0).max(1);
    let max_entry = images.values().map(SparseSeq::max_entry).max().unwrap_or(0);
    let target_spec = TruncSpec {
        max_len,
        alphabet: (max_entry + 1).max(y.len() as u32).max(1),
        pairing: spec.pairing,
    };
    let target = CodeFragment::induced(y, target_spec, source.nodes().map(|(_, n)| image_of(n)))?;

    let index: BTreeMap<&FragmentNode, Label> = target.provenance.iter().map(|(&l, n)| (n, l)).collect();
    let map = source
        .nodes()
        .map(|(l, n)| (l, index[&image_of(n)]))
        .collect();
    Ok(UniversalEmbedding {
        witness: MorphismWitness::new(MorphKind::Embedding, map),
        source,
        target,
        target_spec,
    })
}
