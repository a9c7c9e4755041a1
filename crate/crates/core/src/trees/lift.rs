use std::collections::BTreeMap;

use crate::morphisms::{verify, MorphKind, MorphismWitness};
use crate::structures::Label;

use super::{CodeKind, TreeCode, TreeError, TreeNode};

fn require(ok: bool, what: &'static str, expected: &'static str) -> Result<(), TreeError> {
    if ok {
        Ok(())
    } else {
        Err(TreeError::InvalidWitness { what, expected })
    }
}

/// Lifts a graph isomorphism `sigma: src.source → dst.source` to the
/// codes. Values outside the source graph's domain are fixed; R-codes use
/// the shift `0 ↦ 0`, `v + 1 ↦ sigma(v) + 1`.
pub fn lift_iso(
    src: &TreeCode,
    dst: &TreeCode,
    sigma: &MorphismWitness,
) -> Result<MorphismWitness, TreeError> {
    if src.kind != dst.kind {
        return Err(TreeError::Incompatible("different coding kinds"));
    }
    if src.spec != dst.spec {
        return Err(TreeError::Incompatible("different truncations"));
    }
    let iso = sigma.with_kind(MorphKind::Isomorphism);
    require(verify(&src.source, &dst.source, &iso)?, "sigma", "graph isomorphism")?;

    let value = |v: u32| -> u32 {
        match src.kind {
            CodeKind::T => sigma.apply(v).unwrap_or(v),
            CodeKind::R if v == 0 => 0,
            CodeKind::R => sigma.apply(v - 1).map_or(v, |w| w + 1),
        }
    };
    let image = |s: &[u32]| s.iter().map(|&v| value(v)).collect::<Vec<_>>();

    let mut map = BTreeMap::new();
    for (l, node) in src.nodes() {
        let to = match node {
            TreeNode::Seq(s) => TreeNode::Seq(image(s)),
            TreeNode::Term { parent, slot } => TreeNode::Term { parent: image(parent), slot: *slot },
        };
        let m = dst.label(&to).ok_or_else(|| TreeError::MissingImage(to.to_string()))?;
        map.insert(l, m);
    }
    Ok(MorphismWitness::new(MorphKind::Isomorphism, map))
}

/// Reads a candidate graph isomorphism off an isomorphism of T-codes:
/// `sigma(n) = m` when `tau` sends `⟨n⟩` to `⟨m⟩`. The result is not
/// checked; `m` may even fall outside the target graph when the alphabet
/// is larger than it.
pub fn extract_iso_t(
    src: &TreeCode,
    dst: &TreeCode,
    tau: &MorphismWitness,
) -> Result<MorphismWitness, TreeError> {
    if src.kind != CodeKind::T || dst.kind != CodeKind::T {
        return Err(TreeError::Incompatible("extraction needs T-codes"));
    }
    let iso = tau.with_kind(MorphKind::Isomorphism);
    require(verify(&src.structure, &dst.structure, &iso)?, "tau", "tree isomorphism")?;

    let mut map = BTreeMap::new();
    for &n in src.source.domain() {
        let from = TreeNode::Seq(vec![n]);
        let l = src.label(&from).ok_or_else(|| TreeError::MissingImage(from.to_string()))?;
        let to = tau.apply(l).and_then(|m| dst.node(m)).expect("verified total");
        match to {
            TreeNode::Seq(t) if t.len() == 1 => {
                map.insert(n, t[0] as Label);
            }
            other => {
                return Err(TreeError::NotSingleton { from, to: other.to_string() });
            }
        }
    }
    Ok(MorphismWitness::new(MorphKind::Isomorphism, map))
}
