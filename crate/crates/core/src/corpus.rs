//! Exhaustive small corpora of labeled structures.

use crate::structures::{Label, Pair, Relation, Structure, StructureClass};

fn unordered_pairs(n: Label) -> Vec<Pair> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// All labeled graphs on `0..n`, by edge bitmask over the pairs
/// `(a, b)`, `a < b`, in lexicographic order.
pub fn graphs_on(n: Label) -> Vec<Structure> {
    let pairs = unordered_pairs(n);
    (0u32..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<Pair> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            Structure::graph(n, &edges).expect("edges within 0..n")
        })
        .collect()
}

/// All labeled graphs on one to three vertices (11 structures).
pub fn g3() -> Vec<Structure> {
    (1..=3).flat_map(graphs_on).collect()
}

/// All labeled graphs on four vertices (64 structures).
pub fn g4() -> Vec<Structure> {
    graphs_on(4)
}

/// All strict partial orders on `0..n`, as relation sets.
pub fn strict_orders(n: Label) -> Vec<Vec<Pair>> {
    let candidates: Vec<Pair> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    (0u64..1 << candidates.len())
        .filter_map(|mask| {
            let rel: Vec<Pair> = candidates
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let has = |p: Pair| rel.contains(&p);
            let antisymmetric = rel.iter().all(|&(a, b)| !has((b, a)));
            let transitive = rel
                .iter()
                .all(|&(a, b)| rel.iter().filter(|&&(c, _)| c == b).all(|&(_, d)| has((a, d))));
            (antisymmetric && transitive).then_some(rel)
        })
        .collect()
}

/// Ordered graphs on one to `max_n` vertices whose order is a strict
/// partial order: every edge set paired with every such order.
pub fn strictly_ordered_graphs(max_n: Label) -> Vec<Structure> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let orders = strict_orders(n);
        for g in graphs_on(n) {
            let edges: Vec<Pair> = g.relation(Relation::Edge).expect("graph").iter().copied().collect();
            for order in &orders {
                out.push(
                    Structure::new(0..n, [(Relation::Edge, edges.clone()), (Relation::Order, order.clone())])
                        .expect("pairs within 0..n")
                        .with_hint(StructureClass::OrderedGraph),
                );
            }
        }
    }
    out
}

/// `x` with isolated vertices added up to `n`.
pub fn pad_graph(x: &Structure, n: Label) -> Structure {
    let edges: Vec<Pair> = x.relation(Relation::Edge).into_iter().flatten().copied().collect();
    let top = x.domain().iter().map(|&l| l + 1).max().unwrap_or(0).max(n);
    Structure::new(0..top, [(Relation::Edge, edges)])
        .expect("edges within the old domain")
        .with_hint(StructureClass::Graph)
}
