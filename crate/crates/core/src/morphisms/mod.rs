//! Morphism kinds between structures of a shared signature, a verifier
//! for each kind, and an exhaustive backtracking search.
//!
//! `Homomorphism` here reflects relations as well as preserving them:
//! `(p, q)` is related iff `(f(p), f(q))` is, pointwise on the domain.
//! The forward-only notion is `WeakHomomorphism`. With this reading an
//! embedding is exactly an injective homomorphism.

mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::structures::{Label, Structure};

pub use search::{search, search_with_budget, SearchOutcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MorphKind {
    Isomorphism,
    Embedding,
    Homomorphism,
    WeakHomomorphism,
    Epimorphism,
    WeakEpimorphism,
}

impl MorphKind {
    pub const ALL: [MorphKind; 6] = [
        MorphKind::Isomorphism,
        MorphKind::Embedding,
        MorphKind::Homomorphism,
        MorphKind::WeakHomomorphism,
        MorphKind::Epimorphism,
        MorphKind::WeakEpimorphism,
    ];

    pub fn injective(self) -> bool {
        matches!(self, MorphKind::Isomorphism | MorphKind::Embedding)
    }

    pub fn surjective(self) -> bool {
        matches!(
            self,
            MorphKind::Isomorphism | MorphKind::Epimorphism | MorphKind::WeakEpimorphism
        )
    }

    /// Whether relations must also be reflected.
    pub fn reflects(self) -> bool {
        !matches!(self, MorphKind::WeakHomomorphism | MorphKind::WeakEpimorphism)
    }

    pub fn name(self) -> &'static str {
        match self {
            MorphKind::Isomorphism => "isomorphism",
            MorphKind::Embedding => "embedding",
            MorphKind::Homomorphism => "homomorphism",
            MorphKind::WeakHomomorphism => "weak-homomorphism",
            MorphKind::Epimorphism => "epimorphism",
            MorphKind::WeakEpimorphism => "weak-epimorphism",
        }
    }
}

impl fmt::Display for MorphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismWitness {
    pub kind: MorphKind,
    #[serde(with = "pairs")]
    pub map: BTreeMap<Label, Label>,
}

impl MorphismWitness {
    pub fn new(kind: MorphKind, map: BTreeMap<Label, Label>) -> Self {
        MorphismWitness { kind, map }
    }

    pub fn identity(s: &Structure, kind: MorphKind) -> Self {
        MorphismWitness {
            kind,
            map: s.domain().iter().map(|&l| (l, l)).collect(),
        }
    }

    pub fn apply(&self, l: Label) -> Option<Label> {
        self.map.get(&l).copied()
    }

    /// `other ∘ self`, keeping `self.kind`.
    pub fn then(&self, other: &MorphismWitness) -> Option<MorphismWitness> {
        let map = self
            .map
            .iter()
            .map(|(&a, &b)| other.apply(b).map(|c| (a, c)))
            .collect::<Option<_>>()?;
        Some(MorphismWitness { kind: self.kind, map })
    }

    pub fn with_kind(&self, kind: MorphKind) -> MorphismWitness {
        MorphismWitness { kind, map: self.map.clone() }
    }

    /// The map as a tuple over ascending domain labels; witnesses are
    /// ordered lexicographically by this tuple.
    pub fn tuple(&self) -> Vec<Label> {
        self.map.values().copied().collect()
    }
}

mod pairs {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<Label, Label>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter().map(|(&a, &b)| [a, b]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Label, Label>, D::Error> {
        let v: Vec<[Label; 2]> = Vec::deserialize(d)?;
        let mut m = BTreeMap::new();
        for [a, b] in v {
            if m.insert(a, b).is_some() {
                return Err(serde::de::Error::custom(format!("label {a} mapped twice")));
            }
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("structures do not share a signature")]
    SignatureMismatch,
    #[error("map is not defined on label {0}")]
    NotTotal(Label),
    #[error("map is defined on {0}, which is outside the source domain")]
    ExtraneousLabel(Label),
    #[error("image {image} of {from} escapes the target domain")]
    ImageEscapes { from: Label, image: Label },
}

fn check_contract(a: &Structure, b: &Structure, w: &MorphismWitness) -> Result<(), MorphismError> {
    if !a.same_signature(b) {
        return Err(MorphismError::SignatureMismatch);
    }
    if let Some(&l) = a.domain().iter().find(|l| !w.map.contains_key(l)) {
        return Err(MorphismError::NotTotal(l));
    }
    if let Some(&l) = w.map.keys().find(|l| !a.domain().contains(l)) {
        return Err(MorphismError::ExtraneousLabel(l));
    }
    if let Some((&from, &image)) = w.map.iter().find(|(_, v)| !b.domain().contains(v)) {
        return Err(MorphismError::ImageEscapes { from, image });
    }
    Ok(())
}

/// Checks `w.map` against the definition of `w.kind`.
///
/// Contract violations (partial map, image outside `b`, signature
/// mismatch) are errors, distinct from a map that is simply not a
/// morphism of the requested kind.
pub fn verify(a: &Structure, b: &Structure, w: &MorphismWitness) -> Result<bool, MorphismError> {
    check_contract(a, b, w)?;
    let f = |l: Label| w.map[&l];
    let kind = w.kind;

    if kind.injective() {
        let image: BTreeSet<Label> = w.map.values().copied().collect();
        if image.len() != w.map.len() {
            return Ok(false);
        }
    }
    if kind.surjective() {
        let image: BTreeSet<Label> = w.map.values().copied().collect();
        if image.len() != b.len() {
            return Ok(false);
        }
    }
    for (rel, pairs) in a.relations() {
        let target = b.relation(rel).expect("shared signature");
        if pairs.iter().any(|&(p, q)| !target.contains(&(f(p), f(q)))) {
            return Ok(false);
        }
        if kind.reflects() {
            for &p in a.domain() {
                for &q in a.domain() {
                    if target.contains(&(f(p), f(q))) && !pairs.contains(&(p, q)) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::Relation;

    fn w(kind: MorphKind, pairs: &[(Label, Label)]) -> MorphismWitness {
        MorphismWitness::new(kind, pairs.iter().copied().collect())
    }

    #[test]
    fn identity_on_triangle() {
        let k3 = Structure::graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let id = MorphismWitness::identity(&k3, MorphKind::Isomorphism);
        assert!(verify(&k3, &k3, &id).unwrap());
    }

    #[test]
    fn folding_a_path_onto_an_edge() {
        let p = Structure::graph(3, &[(0, 1), (1, 2)]).unwrap();
        let e = Structure::graph(2, &[(0, 1)]).unwrap();
        let fold = w(MorphKind::WeakEpimorphism, &[(0, 0), (1, 1), (2, 0)]);
        assert!(verify(&p, &e, &fold).unwrap());
        // (0,2) is not an edge of the path but (f0, f2) = (0,0) is not an
        // edge either, so the fold also reflects pointwise.
        assert!(verify(&p, &e, &fold.with_kind(MorphKind::Epimorphism)).unwrap());
        assert!(!verify(&p, &e, &fold.with_kind(MorphKind::Embedding)).unwrap());
    }

    #[test]
    fn collapsing_an_edge_is_not_a_homomorphism() {
        let e = Structure::graph(2, &[(0, 1)]).unwrap();
        let point = Structure::graph(1, &[]).unwrap();
        let c = w(MorphKind::Homomorphism, &[(0, 0), (1, 0)]);
        assert!(!verify(&e, &point, &c).unwrap());
        assert!(!verify(&e, &point, &c.with_kind(MorphKind::WeakHomomorphism)).unwrap());
    }

    #[test]
    fn homomorphism_must_reflect() {
        let empty2 = Structure::graph(2, &[]).unwrap();
        let e = Structure::graph(2, &[(0, 1)]).unwrap();
        let id = w(MorphKind::WeakHomomorphism, &[(0, 0), (1, 1)]);
        assert!(verify(&empty2, &e, &id).unwrap());
        assert!(!verify(&empty2, &e, &id.with_kind(MorphKind::Homomorphism)).unwrap());
    }

    #[test]
    fn contract_errors() {
        let e = Structure::graph(2, &[(0, 1)]).unwrap();
        assert_eq!(
            verify(&e, &e, &w(MorphKind::Embedding, &[(0, 0)])),
            Err(MorphismError::NotTotal(1))
        );
        assert_eq!(
            verify(&e, &e, &w(MorphKind::Embedding, &[(0, 0), (1, 5)])),
            Err(MorphismError::ImageEscapes { from: 1, image: 5 })
        );
        let t = Structure::empty(&[Relation::Tree]);
        assert_eq!(
            verify(&t, &e, &w(MorphKind::Embedding, &[])),
            Err(MorphismError::SignatureMismatch)
        );
    }

    #[test]
    fn witness_json_shape() {
        let wit = w(MorphKind::Embedding, &[(0, 0), (1, 1)]);
        let s = serde_json::to_string(&wit).unwrap();
        assert_eq!(s, r#"{"kind":"embedding","map":[[0,0],[1,1]]}"#);
        let back: MorphismWitness = serde_json::from_str(&s).unwrap();
        assert_eq!(back, wit);
        assert!(serde_json::from_str::<MorphismWitness>(r#"{"kind":"embedding","map":[[0,0],[0,1]]}"#).is_err());
    }
}
