use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Label, Relation, Structure, StructureClass};

/// A violated class axiom together with a witness tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub axiom: &'static str,
    pub witness: Vec<Label>,
    pub message: String,
}

impl Diagnostic {
    fn new(axiom: &'static str, witness: Vec<Label>, message: String) -> Self {
        Diagnostic { axiom, witness, message }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Checks `s` against the axioms of `class`. An empty result means valid.
pub fn validate(s: &Structure, class: StructureClass) -> Vec<Diagnostic> {
    use StructureClass::*;
    let mut out = Vec::new();
    match class {
        Graph => graph_axioms(s, &mut out),
        OrderedGraph => {
            graph_axioms(s, &mut out);
            transitive(s, Relation::Order, &mut out);
        }
        CombinatorialTree => {
            graph_axioms(s, &mut out);
            if out.is_empty() {
                tree_shape(s, &mut out);
            }
        }
        OrderedCombinatorialTree => {
            graph_axioms(s, &mut out);
            if out.is_empty() {
                tree_shape(s, &mut out);
            }
            transitive(s, Relation::Order, &mut out);
        }
        SetTree => set_tree(s, &mut out),
        OrderedSetTree => {
            set_tree(s, &mut out);
            transitive(s, Relation::Order, &mut out);
        }
    }
    out
}

fn require<'a>(
    s: &'a Structure,
    rel: Relation,
    out: &mut Vec<Diagnostic>,
) -> Option<&'a BTreeSet<(Label, Label)>> {
    let r = s.relation(rel);
    if r.is_none() {
        out.push(Diagnostic::new(
            "signature",
            vec![],
            format!("missing relation: {rel}"),
        ));
    }
    r
}

fn graph_axioms(s: &Structure, out: &mut Vec<Diagnostic>) {
    let Some(edge) = require(s, Relation::Edge, out) else {
        return;
    };
    for &(a, b) in edge {
        if a == b {
            out.push(Diagnostic::new("irreflexive", vec![a], format!("loop: {a}-{a}")));
        } else if !edge.contains(&(b, a)) {
            out.push(Diagnostic::new(
                "symmetric",
                vec![a, b],
                format!("not symmetric: ({a},{b}) without ({b},{a})"),
            ));
        }
    }
}

fn transitive(s: &Structure, rel: Relation, out: &mut Vec<Diagnostic>) {
    let Some(r) = require(s, rel, out) else {
        return;
    };
    if let Some((a, b, c)) = transitivity_gap(r) {
        out.push(Diagnostic::new(
            "transitive",
            vec![a, b, c],
            format!("{rel} not transitive: ({a},{b}),({b},{c}) without ({a},{c})"),
        ));
    }
}

fn transitivity_gap(r: &BTreeSet<(Label, Label)>) -> Option<(Label, Label, Label)> {
    let succ = successors(r);
    for &(a, b) in r {
        for &c in succ.get(&b).into_iter().flatten() {
            if !r.contains(&(a, c)) {
                return Some((a, b, c));
            }
        }
    }
    None
}

fn successors(r: &BTreeSet<(Label, Label)>) -> BTreeMap<Label, Vec<Label>> {
    let mut m: BTreeMap<Label, Vec<Label>> = BTreeMap::new();
    for &(a, b) in r {
        m.entry(a).or_default().push(b);
    }
    m
}

/// Connected and acyclic, for a relation already known to be a graph.
fn tree_shape(s: &Structure, out: &mut Vec<Diagnostic>) {
    let adj = successors(s.relation(Relation::Edge).expect("checked by graph_axioms"));
    let mut parent: BTreeMap<Label, Label> = BTreeMap::new();
    let mut seen: BTreeSet<Label> = BTreeSet::new();
    let mut components = 0;
    for &root in s.domain() {
        if seen.contains(&root) {
            continue;
        }
        components += 1;
        if components == 2 {
            out.push(Diagnostic::new(
                "connected",
                vec![*s.domain().first().unwrap(), root],
                format!("not connected: no path {} to {root}", s.domain().first().unwrap()),
            ));
        }
        // Iterative DFS keeping a parent pointer; a visited neighbour other
        // than the parent closes a cycle.
        let mut stack = vec![(root, root)];
        while let Some((v, from)) = stack.pop() {
            if !seen.insert(v) {
                continue;
            }
            if v != from {
                parent.insert(v, from);
            }
            for &w in adj.get(&v).into_iter().flatten().rev() {
                if w == from && parent.get(&v) == Some(&w) {
                    continue;
                }
                if seen.contains(&w) {
                    if out.iter().all(|d| d.axiom != "acyclic") {
                        let cycle = cycle_through(&parent, v, w);
                        let text = cycle
                            .iter()
                            .map(|l| l.to_string())
                            .collect::<Vec<_>>()
                            .join("-");
                        out.push(Diagnostic::new("acyclic", cycle, format!("cycle: {text}")));
                    }
                    continue;
                }
                stack.push((w, v));
            }
        }
    }
}

/// Cycle closed by the non-tree edge `v-w`, where `w` is an ancestor of `v`
/// in the DFS forest. Written starting and ending at `w`.
fn cycle_through(parent: &BTreeMap<Label, Label>, v: Label, w: Label) -> Vec<Label> {
    let mut path = vec![v];
    let mut cur = v;
    while cur != w {
        match parent.get(&cur) {
            Some(&p) => {
                path.push(p);
                cur = p;
            }
            None => break,
        }
    }
    path.reverse();
    path.push(w);
    path
}

fn set_tree(s: &Structure, out: &mut Vec<Diagnostic>) {
    let Some(tree) = require(s, Relation::Tree, out) else {
        return;
    };
    for &(a, b) in tree {
        if a == b {
            out.push(Diagnostic::new(
                "irreflexive",
                vec![a],
                format!("tree not irreflexive: ({a},{a})"),
            ));
            return;
        }
    }
    if let Some((a, b, c)) = transitivity_gap(tree) {
        out.push(Diagnostic::new(
            "transitive",
            vec![a, b, c],
            format!("tree not transitive: ({a},{b}),({b},{c}) without ({a},{c})"),
        ));
        return;
    }
    let mut preds: BTreeMap<Label, Vec<Label>> = BTreeMap::new();
    for &(a, b) in tree {
        preds.entry(b).or_default().push(a);
    }
    for (&v, ps) in &preds {
        for (i, &p) in ps.iter().enumerate() {
            for &q in &ps[i + 1..] {
                if !tree.contains(&(p, q)) && !tree.contains(&(q, p)) {
                    out.push(Diagnostic::new(
                        "chain",
                        vec![v, p, q],
                        format!("predecessors of {v} not a chain: {p} and {q} incomparable"),
                    ));
                    return;
                }
            }
        }
    }
    let minimal: Vec<Label> = s
        .domain()
        .iter()
        .copied()
        .filter(|v| !preds.contains_key(v))
        .collect();
    if !s.is_empty() && minimal.len() != 1 {
        out.push(Diagnostic::new(
            "root",
            minimal.clone(),
            format!("expected a single minimal node, found {minimal:?}"),
        ));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use StructureClass::*;

    #[test]
    fn triangle_is_not_a_tree() {
        let k3 = Structure::graph(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let d = validate(&k3, CombinatorialTree);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].to_string(), "cycle: 0-1-2-0");
        assert!(validate(&k3, Graph).is_empty());
    }

    #[test]
    fn path_is_a_tree() {
        let p = Structure::graph(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(validate(&p, CombinatorialTree).is_empty());
    }

    #[test]
    fn forest_is_not_connected() {
        let f = Structure::graph(4, &[(0, 1), (2, 3)]).unwrap();
        let d = validate(&f, CombinatorialTree);
        assert_eq!(d[0].axiom, "connected");
    }

    #[test]
    fn order_must_be_transitive() {
        let g = Structure::ordered_graph(3, &[], &[(0, 1), (1, 2)]).unwrap();
        let d = validate(&g, OrderedGraph);
        assert_eq!(d.len(), 1);
        assert!(d[0].to_string().contains("not transitive"));
        assert_eq!(d[0].witness, vec![0, 1, 2]);
    }

    #[test]
    fn asymmetric_edge_and_loop() {
        let s = Structure::new(0..2, [(Relation::Edge, vec![(0, 1), (1, 1)])]).unwrap();
        let axioms: Vec<_> = validate(&s, Graph).into_iter().map(|d| d.axiom).collect();
        assert_eq!(axioms, vec!["symmetric", "irreflexive"]);
    }

    #[test]
    fn missing_relation_is_a_diagnostic() {
        let g = Structure::graph(2, &[(0, 1)]).unwrap();
        let d = validate(&g, OrderedGraph);
        assert_eq!(d[0].message, "missing relation: order");
        assert_eq!(validate(&g, SetTree)[0].message, "missing relation: tree");
    }

    #[test]
    fn set_tree_axioms() {
        // 0 < 1 < 2, 0 < 3
        let t = Structure::new(
            0..4,
            [(Relation::Tree, vec![(0, 1), (0, 2), (1, 2), (0, 3)])],
        )
        .unwrap();
        assert!(validate(&t, SetTree).is_empty());

        let two_roots = Structure::new(0..3, [(Relation::Tree, vec![(0, 2)])]).unwrap();
        assert_eq!(validate(&two_roots, SetTree)[0].axiom, "root");

        // 2 has incomparable predecessors 0 and 1
        let diamond = Structure::new(
            0..4,
            [(Relation::Tree, vec![(3, 0), (3, 1), (3, 2), (0, 2), (1, 2)])],
        )
        .unwrap();
        assert_eq!(validate(&diamond, SetTree)[0].axiom, "chain");
    }

    #[test]
    fn empty_structure_is_vacuously_valid() {
        let e = Structure::empty(&[Relation::Edge]);
        assert!(validate(&e, CombinatorialTree).is_empty());
        assert!(validate(&Structure::empty(&[Relation::Tree]), SetTree).is_empty());
    }
}
