//! Finite relational structures over arbitrary natural-number labels.
//!
//! A [`Structure`] is a finite label set together with named binary
//! relations. The set of relation names present on a structure is its
//! signature; an empty relation is still part of the signature.

mod canonical;
pub(crate) mod io;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use canonical::canonical_form;
pub use io::{export_dot, load_structure, save_structure, ParseError};
pub use validate::{validate, Diagnostic};

pub type Label = u32;
pub type Pair = (Label, Label);

/// Relation symbols. `edge` is the graph relation, `order` the extra
/// transitive relation of ordered structures, and `tree` the strict
/// extension order of set-theoretic trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Edge,
    Order,
    Tree,
}

impl Relation {
    pub const ALL: [Relation; 3] = [Relation::Edge, Relation::Order, Relation::Tree];

    pub fn name(self) -> &'static str {
        match self {
            Relation::Edge => "edge",
            Relation::Order => "order",
            Relation::Tree => "tree",
        }
    }

    pub fn from_name(name: &str) -> Option<Relation> {
        Relation::ALL.into_iter().find(|r| r.name() == name)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureClass {
    Graph,
    OrderedGraph,
    CombinatorialTree,
    OrderedCombinatorialTree,
    SetTree,
    OrderedSetTree,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("label {label} out of domain (relation {relation})")]
    LabelOutOfDomain { relation: Relation, label: Label },
    #[error("relation {0} is not part of the signature")]
    MissingRelation(Relation),
}

#[derive(Clone, Debug, Default)]
pub struct Structure {
    domain: BTreeSet<Label>,
    relations: BTreeMap<Relation, BTreeSet<Pair>>,
    kind_hint: Option<StructureClass>,
}

// Equality is on the labeled structure; the declared class is advisory.
impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && self.relations == other.relations
    }
}

impl Eq for Structure {}

impl std::hash::Hash for Structure {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.domain.hash(state);
        self.relations.hash(state);
    }
}

impl Structure {
    /// Builds a structure, rejecting pairs that mention labels outside
    /// the domain.
    pub fn new<D, R, P>(domain: D, relations: R) -> Result<Self, StructureError>
    where
        D: IntoIterator<Item = Label>,
        R: IntoIterator<Item = (Relation, P)>,
        P: IntoIterator<Item = Pair>,
    {
        let domain: BTreeSet<Label> = domain.into_iter().collect();
        let mut rels = BTreeMap::new();
        for (rel, pairs) in relations {
            let set: &mut BTreeSet<Pair> = rels.entry(rel).or_default();
            for (a, b) in pairs {
                for l in [a, b] {
                    if !domain.contains(&l) {
                        return Err(StructureError::LabelOutOfDomain {
                            relation: rel,
                            label: l,
                        });
                    }
                }
                set.insert((a, b));
            }
        }
        Ok(Structure {
            domain,
            relations: rels,
            kind_hint: None,
        })
    }

    /// An empty structure with the given (empty) relations in its signature.
    pub fn empty(signature: &[Relation]) -> Self {
        Structure {
            domain: BTreeSet::new(),
            relations: signature.iter().map(|&r| (r, BTreeSet::new())).collect(),
            kind_hint: None,
        }
    }

    /// Undirected graph on `0..n`; each listed edge is stored in both
    /// directions.
    pub fn graph(n: Label, edges: &[Pair]) -> Result<Self, StructureError> {
        let sym = edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]);
        Ok(Structure::new(0..n, [(Relation::Edge, sym)])?.with_hint(StructureClass::Graph))
    }

    /// Ordered graph on `0..n` with symmetric `edges` and the `order`
    /// pairs taken as given.
    pub fn ordered_graph(n: Label, edges: &[Pair], order: &[Pair]) -> Result<Self, StructureError> {
        let sym: Vec<Pair> = edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
        Ok(Structure::new(
            0..n,
            [(Relation::Edge, sym), (Relation::Order, order.to_vec())],
        )?
        .with_hint(StructureClass::OrderedGraph))
    }

    pub fn with_hint(mut self, class: StructureClass) -> Self {
        self.kind_hint = Some(class);
        self
    }

    pub fn kind_hint(&self) -> Option<StructureClass> {
        self.kind_hint
    }

    pub fn domain(&self) -> &BTreeSet<Label> {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn signature(&self) -> impl Iterator<Item = Relation> + '_ {
        self.relations.keys().copied()
    }

    pub fn same_signature(&self, other: &Structure) -> bool {
        self.relations.keys().eq(other.relations.keys())
    }

    pub fn relation(&self, rel: Relation) -> Option<&BTreeSet<Pair>> {
        self.relations.get(&rel)
    }

    pub fn relations(&self) -> impl Iterator<Item = (Relation, &BTreeSet<Pair>)> {
        self.relations.iter().map(|(&r, s)| (r, s))
    }

    pub fn holds(&self, rel: Relation, a: Label, b: Label) -> bool {
        self.relations
            .get(&rel)
            .is_some_and(|s| s.contains(&(a, b)))
    }

    /// True when `domain` is exactly `0..n`.
    pub fn is_initial_segment(&self) -> bool {
        self.domain
            .iter()
            .enumerate()
            .all(|(i, &l)| i as Label == l)
    }

    /// Induced substructure on `keep ∩ domain`, with original labels.
    pub fn induced(&self, keep: &BTreeSet<Label>) -> Structure {
        let domain: BTreeSet<Label> = self.domain.intersection(keep).copied().collect();
        let relations = self
            .relations
            .iter()
            .map(|(&r, pairs)| {
                let kept = pairs
                    .iter()
                    .filter(|(a, b)| domain.contains(a) && domain.contains(b))
                    .copied()
                    .collect();
                (r, kept)
            })
            .collect();
        Structure {
            domain,
            relations,
            kind_hint: self.kind_hint,
        }
    }

    /// Applies `f` to every label. `f` must be injective on the domain,
    /// which the caller guarantees; the result would otherwise merge points.
    pub(crate) fn map_labels(&self, f: impl Fn(Label) -> Label) -> Structure {
        Structure {
            domain: self.domain.iter().map(|&l| f(l)).collect(),
            relations: self
                .relations
                .iter()
                .map(|(&r, pairs)| (r, pairs.iter().map(|&(a, b)| (f(a), f(b))).collect()))
                .collect(),
            kind_hint: self.kind_hint,
        }
    }

    /// Adds pairs to a relation already in the signature.
    pub fn insert_pairs(
        &mut self,
        rel: Relation,
        pairs: impl IntoIterator<Item = Pair>,
    ) -> Result<(), StructureError> {
        let Some(set) = self.relations.get_mut(&rel) else {
            return Err(StructureError::MissingRelation(rel));
        };
        for (a, b) in pairs {
            for l in [a, b] {
                if !self.domain.contains(&l) {
                    return Err(StructureError::LabelOutOfDomain { relation: rel, label: l });
                }
            }
            set.insert((a, b));
        }
        Ok(())
    }

    /// Vertices `v` with `(v, v)` in the relation.
    pub fn self_related(&self, rel: Relation) -> BTreeSet<Label> {
        self.relation(rel)
            .map(|s| s.iter().filter(|(a, b)| a == b).map(|&(a, _)| a).collect())
            .unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_pair_outside_domain() {
        let err = Structure::new(0..2, [(Relation::Edge, vec![(0, 7)])]).unwrap_err();
        assert_eq!(
            err,
            StructureError::LabelOutOfDomain { relation: Relation::Edge, label: 7 }
        );
        assert!(err.to_string().contains("label 7 out of domain"));
    }

    #[test]
    fn graph_is_symmetric() {
        let g = Structure::graph(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(g.holds(Relation::Edge, 1, 0));
        assert!(g.holds(Relation::Edge, 2, 1));
        assert_eq!(g.relation(Relation::Edge).unwrap().len(), 4);
        assert!(g.is_initial_segment());
    }

    #[test]
    fn equality_ignores_hint() {
        let a = Structure::graph(2, &[(0, 1)]).unwrap();
        let b = Structure::new(0..2, [(Relation::Edge, vec![(0, 1), (1, 0)])]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn induced_keeps_labels() {
        let g = Structure::graph(3, &[(0, 1), (1, 2)]).unwrap();
        let sub = g.induced(&[1, 2].into_iter().collect());
        assert_eq!(sub.domain().iter().copied().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(sub.relation(Relation::Edge).unwrap().len(), 2);
        assert!(!sub.is_initial_segment());
    }
}
