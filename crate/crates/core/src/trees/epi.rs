use std::collections::BTreeMap;

use crate::morphisms::{verify, MorphKind, MorphismWitness};

use super::build::build_r;
use super::{TreeCode, TreeError, TreeNode, TruncSpec};

#[derive(Clone, Debug)]
pub struct WeakEpi {
    /// Labels of `source` (the R-code of `y`) to labels of `target` (the
    /// R-code of `x`).
    pub witness: MorphismWitness,
    pub source: TreeCode,
    pub target: TreeCode,
    /// The value map `g` on `0..=|y|`.
    pub g: Vec<u32>,
}

impl WeakEpi {
    pub fn verify(&self) -> Result<bool, TreeError> {
        Ok(verify(self.source.structure(), self.target.structure(), &self.witness)?)
    }
}

/// From an embedding `f: x ↪ y`, a weak epimorphism from the R-code of `y`
/// onto the R-code of `x`.
///
/// `target` is `build_r(x, spec)` and `source` is `build_r(y, spec′)`
/// where `spec′` has alphabet `|y| + 1`. The value map is `g(0) = 0`,
/// `g(n + 1) = m + 1` when `f(m) = n`, otherwise `0`; it acts entrywise.
pub fn weak_epi_r(
    x: &crate::structures::Structure,
    y: &crate::structures::Structure,
    f: &MorphismWitness,
    spec: TruncSpec,
) -> Result<WeakEpi, TreeError> {
    if !verify(x, y, &f.with_kind(MorphKind::Embedding))? {
        return Err(TreeError::InvalidWitness { what: "f", expected: "graph embedding" });
    }
    let target = build_r(x, spec)?;
    let source = build_r(y, TruncSpec { alphabet: y.len() as u32 + 1, ..spec })?;

    let mut g = vec![0u32; y.len() + 1];
    for (&m, &n) in &f.map {
        g[n as usize + 1] = m + 1;
    }
    let lift = |s: &[u32]| s.iter().map(|&v| g[v as usize]).collect::<Vec<_>>();

    let mut map = BTreeMap::new();
    for (l, node) in source.nodes() {
        let to = match node {
            TreeNode::Seq(t) => TreeNode::Seq(lift(t)),
            TreeNode::Term { parent, slot } => {
                // A single terminal (positive parent) always lands in
                // slot 0, which exists whether or not g(t) has a 0.
                TreeNode::Term { parent: lift(parent), slot: *slot }
            }
        };
        let m = target.label(&to).ok_or_else(|| TreeError::MissingImage(to.to_string()))?;
        map.insert(l, m);
    }
    Ok(WeakEpi {
        witness: MorphismWitness::new(MorphKind::WeakEpimorphism, map),
        source,
        target,
        g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::Structure;

    #[test]
    fn identity_case() {
        let v = Structure::graph(1, &[]).unwrap();
        let id = MorphismWitness::identity(&v, MorphKind::Embedding);
        let e = weak_epi_r(&v, &v, &id, TruncSpec::new(2, 2)).unwrap();
        assert_eq!(e.g, vec![0, 1]);
        assert_eq!(e.witness.map, MorphismWitness::identity(e.target.structure(), MorphKind::Isomorphism).map);
        assert!(e.verify().unwrap());
    }

    #[test]
    fn vertex_into_edge() {
        let v = Structure::graph(1, &[]).unwrap();
        let k2 = Structure::graph(2, &[(0, 1)]).unwrap();
        let f = MorphismWitness::new(MorphKind::Embedding, [(0, 0)].into());
        let e = weak_epi_r(&v, &k2, &f, TruncSpec::new(2, 2)).unwrap();
        assert_eq!(e.g, vec![0, 1, 0]);
        let from = e.source.label(&TreeNode::Seq(vec![2])).unwrap();
        let to = e.target.label(&TreeNode::Seq(vec![0])).unwrap();
        assert_eq!(e.witness.apply(from), Some(to));
        assert!(e.verify().unwrap());
    }

    #[test]
    fn every_target_sequence_has_a_shifted_preimage() {
        let p3 = Structure::graph(3, &[(0, 1), (1, 2)]).unwrap();
        let k2 = Structure::graph(2, &[(0, 1)]).unwrap();
        let f = MorphismWitness::new(MorphKind::Embedding, [(0, 1), (1, 2)].into());
        let e = weak_epi_r(&k2, &p3, &f, TruncSpec::new(2, 3)).unwrap();
        for (_, node) in e.target.nodes() {
            let TreeNode::Seq(s) = node else { continue };
            let t: Vec<u32> = s
                .iter()
                .map(|&v| if v == 0 { 0 } else { f.apply(v - 1).unwrap() + 1 })
                .collect();
            let l = e.source.label(&TreeNode::Seq(t.clone())).unwrap();
            assert_eq!(e.target.node(e.witness.apply(l).unwrap()), Some(node), "{t:?}");
        }
        assert!(e.verify().unwrap());
    }

    #[test]
    fn rejects_non_embeddings() {
        let k2 = Structure::graph(2, &[(0, 1)]).unwrap();
        let e2 = Structure::graph(2, &[]).unwrap();
        let id = MorphismWitness::identity(&k2, MorphKind::Embedding);
        assert!(matches!(
            weak_epi_r(&k2, &e2, &id, TruncSpec::new(2, 3)),
            Err(TreeError::InvalidWitness { .. })
        ));
    }
}
