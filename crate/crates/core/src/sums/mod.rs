//! Even/odd sums of structures, the parity-monotone permutations acting on
//! them, and the finite W-space built from a witness kit.

mod parity;
mod wspace;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::morphisms::{verify, MorphKind, MorphismError, MorphismWitness};
use crate::structures::{Label, Relation, Structure, StructureError};

pub use parity::{decompose_parity, enumerate_g, inverse, is_parity_monotone, is_permutation, ParityPerm};
pub use wspace::{assemble_w, audit_w, NClasses, PairAudit, Variant, WAudit, WEntry, WSpace, WitnessKit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SumError {
    #[error("root of {0} undefined")]
    RootUndefined(&'static str),
    #[error("root of {0} not unique")]
    RootNotUnique(&'static str),
    #[error("{0:?} is not a permutation of 0..2k")]
    NotAPermutation(Vec<u32>),
    #[error("not parity-monotone: {0}")]
    NotParityMonotone(String),
    #[error("map is not injective on the domain: {0} and {1} collide")]
    NotInjective(Label, Label),
    #[error("{0} does not verify as an embedding")]
    InvalidWitness(&'static str),
    #[error("invalid kit: {0}")]
    InvalidKit(String),
    #[error("classifier is not isomorphism-invariant: second-family members {0} and {1} are isomorphic but classified as {2} and {3}")]
    ClassifierNotInvariant(usize, usize, usize, usize),
    #[error("search budget exhausted")]
    Budget,
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

/// `x` copied onto the evens and `z` onto the odds, over the union of the
/// two signatures, with no pairs between the copies.
pub fn oplus(x: &Structure, z: &Structure) -> Structure {
    let sig: BTreeSet<Relation> = x.signature().chain(z.signature()).collect();
    let even = |l: Label| 2 * l;
    let odd = |l: Label| 2 * l + 1;
    let domain = x.domain().iter().map(|&l| even(l)).chain(z.domain().iter().map(|&l| odd(l)));
    let relations = sig.into_iter().map(|r| {
        let xs = x.relation(r).into_iter().flatten().map(|&(a, b)| (even(a), even(b)));
        let zs = z.relation(r).into_iter().flatten().map(|&(a, b)| (odd(a), odd(b)));
        (r, xs.chain(zs).collect::<Vec<_>>())
    });
    Structure::new(domain, relations).expect("copied pairs stay in the copied domain")
}

/// The vertex strictly below every other one in the order.
pub fn root_of_strict(x: &Structure) -> Option<Label> {
    let order = x.relation(Relation::Order)?;
    x.domain()
        .iter()
        .copied()
        .find(|&r| x.domain().iter().all(|&v| v == r || order.contains(&(r, v))))
}

/// The unique element whose only order pair is with itself.
pub fn root_of_reflexive(z: &Structure) -> Result<Label, SumError> {
    let order = z.relation(Relation::Order).ok_or(SumError::RootUndefined("z"))?;
    let mut lonely = z.domain().iter().copied().filter(|&v| {
        order.contains(&(v, v)) && order.iter().all(|&(a, b)| (a != v && b != v) || a == b)
    });
    let r = lonely.next().ok_or(SumError::RootUndefined("z"))?;
    if lonely.next().is_some() {
        return Err(SumError::RootNotUnique("z"));
    }
    Ok(r)
}

/// [`oplus`] plus an undirected edge between the roots of the two parts.
pub fn oplus_rooted(x: &Structure, z: &Structure) -> Result<Structure, SumError> {
    let rx = root_of_strict(x).ok_or(SumError::RootUndefined("x"))?;
    let rz = root_of_reflexive(z)?;
    let mut s = oplus(x, z);
    let (a, b) = (2 * rx, 2 * rz + 1);
    if s.relation(Relation::Edge).is_none() {
        s = Structure::new(
            s.domain().iter().copied(),
            s.relations()
                .map(|(r, p)| (r, p.iter().copied().collect::<Vec<_>>()))
                .chain([(Relation::Edge, Vec::new())]),
        )?;
    }
    s.insert_pairs(Relation::Edge, [(a, b), (b, a)])?;
    Ok(s)
}

/// Relabels `a` along `g` (identity beyond `g.len()`).
pub fn logic_action(g: &[u32], a: &Structure) -> Result<Structure, SumError> {
    let f = |l: Label| g.get(l as usize).copied().unwrap_or(l);
    let mut seen: BTreeMap<Label, Label> = BTreeMap::new();
    for &l in a.domain() {
        if let Some(&other) = seen.get(&f(l)) {
            return Err(SumError::NotInjective(other, l));
        }
        seen.insert(f(l), l);
    }
    Ok(a.map_labels(f))
}

/// Glues `e1: x1 → x2` and `e2: z1 → z2` into a map between the sums.
/// Both must verify; the result is an isomorphism when both are, and an
/// embedding otherwise.
pub fn glue_embeddings(
    (x1, x2, e1): (&Structure, &Structure, &MorphismWitness),
    (z1, z2, e2): (&Structure, &Structure, &MorphismWitness),
) -> Result<MorphismWitness, SumError> {
    for (what, a, b, e) in [("e1", x1, x2, e1), ("e2", z1, z2, e2)] {
        if !e.kind.injective() || !verify(a, b, e)? {
            return Err(SumError::InvalidWitness(what));
        }
    }
    let kind = if e1.kind == MorphKind::Isomorphism && e2.kind == MorphKind::Isomorphism {
        MorphKind::Isomorphism
    } else {
        MorphKind::Embedding
    };
    let map = e1
        .map
        .iter()
        .map(|(&a, &b)| (2 * a, 2 * b))
        .chain(e2.map.iter().map(|(&a, &b)| (2 * a + 1, 2 * b + 1)))
        .collect();
    Ok(MorphismWitness::new(kind, map))
}

/// Splits by order self-relatedness: `(irreflexive part, reflexive part)`,
/// both induced and keeping the original labels.
pub fn split_parts(a: &Structure) -> (Structure, Structure) {
    let refl = a.self_related(Relation::Order);
    let irr: BTreeSet<Label> = a.domain().difference(&refl).copied().collect();
    (a.induced(&irr), a.induced(&refl))
}
