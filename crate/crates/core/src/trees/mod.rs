//! Truncated set-theoretic tree codings of graphs.
//!
//! Both codings live on finite sequences over `0..alphabet` of length at
//! most `max_len`, ordered by strict extension, plus terminal leaves hung
//! under some sequences. They differ only in which sequences get
//! terminals:
//!
//! * T-coding: one terminal when `|s|` is even, or when `|s|` is odd and the
//!   relevant pair of the even subsequence is an edge.
//! * R-coding: two terminals when `s ≠ ∅` contains a `0`; otherwise one
//!   terminal when the relevant pair `(a, b)` of `s` has `(a-1, b-1)` as an
//!   edge. Value `v + 1` codes vertex `v`; `0` is a wildcard.
//!
//! Both carry the same `order` relation: terminals form one class, `∅` is
//! alone, and nonempty sequences are grouped by the relevant pair of their
//! even subsequence.

mod build;
mod epi;
mod lift;
mod universal;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::coding::PairingKind;
use crate::morphisms::MorphismError;
use crate::structures::{Diagnostic, Label, Structure};

pub use build::{build_r, build_t, class_key, r_terminals, t_terminal, ClassKey};
pub use epi::{weak_epi_r, WeakEpi};
pub use lift::{extract_iso_t, lift_iso};
pub use universal::{embed_universal_t, CodeFragment, FragmentNode, SparseSeq, UniversalEmbedding};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodeKind {
    T,
    R,
}

/// Truncation parameters: sequences of length `≤ max_len` over
/// `0..alphabet`, coded with `pairing`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncSpec {
    pub max_len: u64,
    pub alphabet: u32,
    #[serde(default)]
    pub pairing: PairingKind,
}

impl TruncSpec {
    pub fn new(max_len: u64, alphabet: u32) -> Self {
        TruncSpec { max_len, alphabet, pairing: PairingKind::Cantor }
    }

    pub fn with_pairing(self, pairing: PairingKind) -> Self {
        TruncSpec { pairing, ..self }
    }

    fn check(&self) -> Result<(), TreeError> {
        if self.max_len < 1 || self.alphabet < 1 {
            return Err(TreeError::InvalidSpec(*self));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeNode {
    Seq(Vec<u32>),
    Term { parent: Vec<u32>, slot: u8 },
}

impl TreeNode {
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Seq(s) => s.len(),
            TreeNode::Term { parent, .. } => parent.len() + 1,
        }
    }

    pub fn is_term(&self) -> bool {
        matches!(self, TreeNode::Term { .. })
    }

    /// `{"seq": [...]}` or `{"term": [...parent, slot]}`.
    pub fn to_json(&self) -> Value {
        match self {
            TreeNode::Seq(s) => json!({ "seq": s }),
            TreeNode::Term { parent, slot } => {
                let mut v = parent.clone();
                v.push(*slot as u32);
                json!({ "term": v })
            }
        }
    }

    /// Ordering used to number nodes: by depth, sequences before
    /// terminals, then lexicographically.
    fn numbering_key(&self) -> (usize, bool, &[u32], u8) {
        match self {
            TreeNode::Seq(s) => (s.len(), false, s, 0),
            TreeNode::Term { parent, slot } => (parent.len() + 1, true, parent, *slot),
        }
    }
}

impl fmt::Display for TreeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq = |s: &[u32]| {
            s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
        };
        match self {
            TreeNode::Seq(s) => write!(f, "⟨{}⟩", seq(s)),
            TreeNode::Term { parent, slot } => write!(f, "term(⟨{}⟩,{slot})", seq(parent)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TreeError {
    #[error("invalid truncation {0:?}: max_len and alphabet must be at least 1")]
    InvalidSpec(TruncSpec),
    #[error("input is not a graph: {}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    NotAGraph(Vec<Diagnostic>),
    #[error("graph domain must be 0..n")]
    NotInitialSegment,
    #[error("graph on {vertices} vertices needs alphabet {needed}, have {alphabet}")]
    ExceedsAlphabet { vertices: usize, needed: u32, alphabet: u32 },
    #[error("{what} does not verify as {expected}")]
    InvalidWitness { what: &'static str, expected: &'static str },
    #[error("codes are incompatible: {0}")]
    Incompatible(&'static str),
    #[error("image of singleton {from} is {to}, not a singleton")]
    NotSingleton { from: TreeNode, to: String },
    #[error("node {0} has no image in the target code")]
    MissingImage(String),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
}

/// A built T- or R-code with the provenance of each label.
#[derive(Clone, Debug)]
pub struct TreeCode {
    structure: Structure,
    provenance: BTreeMap<Label, TreeNode>,
    labels: HashMap<TreeNode, Label>,
    kind: CodeKind,
    spec: TruncSpec,
    source: Structure,
}

impl TreeCode {
    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn spec(&self) -> TruncSpec {
        self.spec
    }

    /// The graph this code was built from.
    pub fn source(&self) -> &Structure {
        &self.source
    }

    pub fn node(&self, l: Label) -> Option<&TreeNode> {
        self.provenance.get(&l)
    }

    pub fn label(&self, node: &TreeNode) -> Option<Label> {
        self.labels.get(node).copied()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (Label, &TreeNode)> {
        self.provenance.iter().map(|(&l, n)| (l, n))
    }

    pub fn len(&self) -> usize {
        self.provenance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.provenance.is_empty()
    }

    /// Number of terminal children of the sequence `s`.
    pub fn terminals_of(&self, s: &[u32]) -> usize {
        (0..2u8)
            .filter(|&slot| {
                self.labels
                    .contains_key(&TreeNode::Term { parent: s.to_vec(), slot })
            })
            .count()
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
