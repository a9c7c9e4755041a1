//! Sums, the parity group, gluing and W-space audits.

use std::collections::BTreeSet;

use iforge::corpus::strictly_ordered_graphs;
use iforge::morphisms::{search, verify, MorphKind};
use iforge::structures::{Relation, Structure};
use iforge::sums::{
    assemble_w, audit_w, enumerate_g, glue_embeddings, logic_action, oplus, split_parts, Variant, WitnessKit,
};
use proptest::prelude::*;

#[test]
fn odd_images_determine_members() {
    for k in 1..=4 {
        let g = enumerate_g(k);
        let odd: BTreeSet<_> = g.iter().map(|h| h.odd_image()).collect();
        assert_eq!(odd.len(), g.len());
        // listed by their even images, in lexicographic order
        let evens: Vec<Vec<u32>> = g.iter().map(|h| h.even_image().into_iter().collect()).collect();
        let mut sorted = evens.clone();
        sorted.sort();
        assert_eq!(evens, sorted);
    }
}

#[test]
fn frozen_group_of_order_six() {
    let g: Vec<Vec<u32>> = enumerate_g(2).iter().map(|h| h.images().to_vec()).collect();
    assert_eq!(
        g,
        vec![
            vec![0, 2, 1, 3],
            vec![0, 1, 2, 3],
            vec![0, 1, 3, 2],
            vec![1, 0, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 0, 3, 1],
        ]
    );
}

fn reflexive(s: &Structure) -> Structure {
    let order: Vec<(u32, u32)> = s
        .relation(Relation::Order)
        .unwrap()
        .iter()
        .copied()
        .chain(s.domain().iter().map(|&v| (v, v)))
        .collect();
    let edges: Vec<(u32, u32)> = s.relation(Relation::Edge).unwrap().iter().copied().collect();
    Structure::new(s.domain().iter().copied(), [(Relation::Edge, edges), (Relation::Order, order)]).unwrap()
}

#[test]
fn kit_with_several_classes_passes_its_audit() {
    // x-family: strictly ordered graphs on at most two vertices; z-family:
    // their reflexive closures on exactly two vertices, classified by
    // edge count.
    let prime = strictly_ordered_graphs(2);
    let mut second: Vec<Structure> = Vec::new();
    for z in prime.iter().filter(|s| s.len() == 2).map(reflexive) {
        if !second.contains(&z) {
            second.push(z);
        }
    }
    let classify = second
        .iter()
        .map(|z| if z.relation(Relation::Edge).unwrap().is_empty() { 0 } else { prime.len() - 1 })
        .collect();
    let kit = WitnessKit::new(prime, second, classify, None).unwrap();
    for k in 1..=2 {
        let w = assemble_w(&kit, k, &Variant::Full).unwrap();
        let audit = audit_w(&w).unwrap();
        assert!(audit.collisions.is_empty());
        assert!(audit.f_failures().is_empty());
        assert!(audit.part_failures().is_empty());
        assert!(audit.s_backward_failures().is_empty());
        assert!(audit.s_forward_failures().is_empty());
    }
}

fn arb_ordered() -> impl Strategy<Value = Structure> {
    let all = strictly_ordered_graphs(3);
    proptest::sample::select(all)
}

proptest! {
    #[test]
    fn glued_embeddings_verify(x1 in arb_ordered(), x2 in arb_ordered(), z1 in arb_ordered(), z2 in arb_ordered()) {
        let (z1, z2) = (reflexive(&z1), reflexive(&z2));
        if let (Some(e1), Some(e2)) = (
            search(&x1, &x2, MorphKind::Embedding).unwrap(),
            search(&z1, &z2, MorphKind::Embedding).unwrap(),
        ) {
            let w = glue_embeddings((&x1, &x2, &e1), (&z1, &z2, &e2)).unwrap();
            prop_assert!(verify(&oplus(&x1, &z1), &oplus(&x2, &z2), &w).unwrap());
        }
    }

    #[test]
    fn members_act_as_relabelings(x in arb_ordered(), z in arb_ordered(), pick in 0usize..20) {
        let z = reflexive(&z);
        let s = oplus(&x, &z);
        let g = enumerate_g(3);
        let h = &g[pick % g.len()];
        let moved = logic_action(h.images(), &s).unwrap();
        let (irr, refl) = split_parts(&moved);
        // parity is preserved for labels inside 0..6, so each part of the
        // moved sum is the moved part
        let (pi, pr) = split_parts(&s);
        prop_assert_eq!(irr, logic_action(h.images(), &pi).unwrap());
        prop_assert_eq!(refl, logic_action(h.images(), &pr).unwrap());
    }
}
