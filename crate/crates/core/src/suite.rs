//! The acceptance suite: property checks over exhaustive small corpora,
//! each decided by the morphism oracle and cross-checked against a naive
//! enumeration where one is feasible.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coding::{
    even_extension_half_length, even_relevant_pair, pair_index, relevant_pair, unpair_index, Pairing,
    PairingKind,
};
use crate::corpus::{g3, pad_graph, strictly_ordered_graphs};
use crate::morphisms::{search_with_budget, verify, MorphKind, MorphismWitness, SearchOutcome};
use crate::quotients::{check_classwise_iso, random_instance, sb_bijection};
use crate::structures::{Label, Relation, Structure};
use crate::sums::{
    assemble_w, audit_w, decompose_parity, enumerate_g, is_parity_monotone, NClasses, Variant, WitnessKit,
};
use crate::trees::{build_r, build_t, embed_universal_t, extract_iso_t, lift_iso, weak_epi_r, TruncSpec};

/// Seed for the randomized quotient instances when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Truncation depth for T-codes.
    pub t_max_len: u64,
    /// Truncation depth for R-codes.
    pub r_max_len: u64,
    /// Cap on oracle node expansions per search.
    pub budget: Option<u64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: DEFAULT_SEED, t_max_len: 4, r_max_len: 2, budget: None }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub name: &'static str,
    pub module: &'static str,
}

pub const CRITERIA: [Criterion; 9] = [
    Criterion { id: 1, name: "morphisms-vs-naive", module: "morphisms" },
    Criterion { id: 2, name: "t-coding-iso", module: "trees" },
    Criterion { id: 3, name: "universal-embedding", module: "trees" },
    Criterion { id: 4, name: "r-coding", module: "trees" },
    Criterion { id: 5, name: "w-space", module: "sums" },
    Criterion { id: 6, name: "parity-group", module: "sums" },
    Criterion { id: 7, name: "schroeder-bernstein", module: "quotients" },
    Criterion { id: 8, name: "coding-arithmetic", module: "coding" },
    Criterion { id: 9, name: "pairing-swap", module: "trees" },
];

/// Criteria whose name or module equals `filter` (all when `None`).
pub fn select(filter: Option<&str>) -> Vec<Criterion> {
    CRITERIA
        .iter()
        .filter(|c| filter.is_none_or(|f| f == c.name || f == c.module))
        .copied()
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub module: &'static str,
    pub passed: bool,
    pub instances: u64,
    pub elapsed_ms: u64,
    pub summary: String,
    pub notes: Vec<String>,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "[{}] {} {}: {} ({} instances, {:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.summary,
            self.instances,
            self.elapsed_ms as f64 / 1000.0
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub criteria: Vec<CriterionReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.criteria {
            let _ = writeln!(out, "{}", c.line());
            for n in &c.notes {
                let _ = writeln!(out, "    {n}");
            }
        }
        out
    }
}

pub fn run_suite(filter: Option<&str>, cfg: &SuiteConfig) -> SuiteReport {
    let mut criteria: Vec<CriterionReport> = select(filter).par_iter().map(|c| run_criterion(c.id, cfg)).collect();
    criteria.sort_by_key(|c| c.name);
    SuiteReport { config: cfg.clone(), criteria }
}

pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> CriterionReport {
    let c = CRITERIA.iter().find(|c| c.id == id).expect("known criterion");
    let start = Instant::now();
    let outcome = match id {
        1 => morphisms_vs_naive(cfg),
        2 => t_coding_iso(cfg),
        3 => universal_embedding(cfg),
        4 => r_coding(cfg),
        5 => w_space(cfg),
        6 => parity_group(),
        7 => schroeder_bernstein(cfg),
        8 => coding_arithmetic(),
        9 => pairing_swap(cfg),
        _ => unreachable!(),
    };
    CriterionReport {
        id,
        name: c.name,
        module: c.module,
        passed: outcome.passed(),
        instances: outcome.instances,
        elapsed_ms: start.elapsed().as_millis() as u64,
        summary: outcome.summary,
        notes: outcome.notes,
    }
}

struct Outcome {
    instances: u64,
    failures: u64,
    summary: String,
    notes: Vec<String>,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.instances > 0 && self.failures == 0
    }
}

/// Counts checks and keeps the first few failure descriptions.
#[derive(Default)]
struct Tally {
    checks: u64,
    failures: u64,
    examples: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < 5 {
                self.examples.push(describe());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failures += other.failures;
        for e in other.examples {
            if self.examples.len() < 5 {
                self.examples.push(e);
            }
        }
    }

    fn ratio(&self) -> String {
        format!("{}/{}", self.checks - self.failures, self.checks)
    }
}

fn describe(g: &Structure) -> String {
    let edges: Vec<String> = g
        .relation(Relation::Edge)
        .into_iter()
        .flatten()
        .filter(|(a, b)| a < b)
        .map(|(a, b)| format!("{a}-{b}"))
        .collect();
    format!("[{} vertices; {}]", g.len(), if edges.is_empty() { "no edges".into() } else { edges.join(" ") })
}

/// Oracle call under the configured budget; an exhausted budget is an
/// error rather than an answer.
fn oracle(a: &Structure, b: &Structure, kind: MorphKind, cfg: &SuiteConfig) -> Result<Option<MorphismWitness>, String> {
    match search_with_budget(a, b, kind, cfg.budget).map_err(|e| e.to_string())? {
        SearchOutcome::Found(w) => Ok(Some(w)),
        SearchOutcome::Absent => Ok(None),
        SearchOutcome::BudgetExhausted { expanded } => Err(format!("budget exhausted after {expanded} expansions")),
    }
}

/// Every map `dom(a) → dom(b)` that verifies as `kind`, in lexicographic
/// order of the value tuple over ascending source labels.
pub fn naive_all(a: &Structure, b: &Structure, kind: MorphKind) -> Vec<MorphismWitness> {
    let src: Vec<Label> = a.domain().iter().copied().collect();
    let dst: Vec<Label> = b.domain().iter().copied().collect();
    if !a.same_signature(b) || (dst.is_empty() && !src.is_empty()) {
        return Vec::new();
    }
    let mut digits = vec![0usize; src.len()];
    let mut out = Vec::new();
    loop {
        let map = src.iter().zip(&digits).map(|(&s, &d)| (s, dst[d])).collect();
        let w = MorphismWitness::new(kind, map);
        if verify(a, b, &w) == Ok(true) {
            out.push(w);
        }
        // odometer with the last source label fastest
        let mut i = src.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < dst.len() {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Least witness by exhaustive enumeration.
pub fn naive_first(a: &Structure, b: &Structure, kind: MorphKind) -> Option<MorphismWitness> {
    naive_all(a, b, kind).into_iter().next()
}

fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()
}

fn morphisms_vs_naive(cfg: &SuiteConfig) -> Outcome {
    let graphs = g3();
    let cases: Vec<(usize, usize, MorphKind)> = ordered_pairs(graphs.len())
        .into_iter()
        .flat_map(|(i, j)| MorphKind::ALL.into_iter().map(move |k| (i, j, k)))
        .collect();
    let tally = cases
        .par_iter()
        .map(|&(i, j, k)| {
            let (a, b) = (&graphs[i], &graphs[j]);
            let mut t = Tally::default();
            let found = oracle(a, b, k, cfg);
            let expected = naive_first(a, b, k);
            t.check(found.as_ref() == Ok(&expected), || {
                format!("{k} {} -> {}: search {found:?}, naive {expected:?}", describe(a), describe(b))
            });
            t
        })
        .reduce(Tally::default, |mut a, b| {
            a.merge(b);
            a
        });
    Outcome {
        instances: tally.checks,
        failures: tally.failures,
        summary: format!("search equals the naive least witness on {} cases", tally.ratio()),
        notes: tally.examples,
    }
}

/// Per-pair verdicts, kept for the pairing comparison.
struct TransferRun {
    tree_iso: Vec<bool>,
    outcome: Outcome,
}

fn t_transfer(cfg: &SuiteConfig, pairing: PairingKind) -> TransferRun {
    let graphs = g3();
    let spec = TruncSpec::new(cfg.t_max_len, 3).with_pairing(pairing);
    let codes: Vec<_> = graphs.par_iter().map(|g| build_t(g, spec).expect("G3 fits alphabet 3")).collect();
    let pairs = ordered_pairs(graphs.len());

    struct PairRun {
        tree_iso: bool,
        iff: Tally,
        padded: Tally,
        lifts: Tally,
        extracts: Tally,
    }
    let runs: Vec<PairRun> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (&graphs[i], &graphs[j]);
            let (cx, cy) = (&codes[i], &codes[j]);
            let who = || format!("{} vs {}", describe(x), describe(y));
            let mut iff = Tally::default();
            let mut padded = Tally::default();
            let mut lifts = Tally::default();
            let mut extracts = Tally::default();

            let graph_iso = oracle(x, y, MorphKind::Isomorphism, cfg);
            let tree_iso = oracle(cx.structure(), cy.structure(), MorphKind::Isomorphism, cfg);
            match (&graph_iso, &tree_iso) {
                (Ok(g), Ok(t)) => {
                    iff.check(g.is_some() == t.is_some(), || {
                        format!("{}: graph-iso {}, tree-iso {}", who(), g.is_some(), t.is_some())
                    });
                    let pg = oracle(&pad_graph(x, 3), &pad_graph(y, 3), MorphKind::Isomorphism, cfg);
                    padded.check(pg.as_ref().is_ok_and(|p| p.is_some() == t.is_some()), who);
                }
                (g, t) => iff.check(false, || format!("{}: oracle error {g:?} {t:?}", who())),
            }

            for sigma in naive_all(x, y, MorphKind::Isomorphism) {
                let ok = lift_iso(cx, cy, &sigma)
                    .map(|w| verify(cx.structure(), cy.structure(), &w) == Ok(true))
                    .unwrap_or(false);
                lifts.check(ok, || format!("lift of {:?} for {}", sigma.map, who()));
            }
            if let Ok(Some(tau)) = &tree_iso {
                let extracted = extract_iso_t(cx, cy, tau);
                let ok = match &extracted {
                    Ok(s) => verify(x, y, s) == Ok(true),
                    Err(_) => false,
                };
                extracts.check(ok, || match extracted {
                    Ok(s) => format!("extracted {:?} for {} does not verify", s.map, who()),
                    Err(e) => format!("extraction for {}: {e}", who()),
                });
            }
            PairRun { tree_iso: matches!(tree_iso, Ok(Some(_))), iff, padded, lifts, extracts }
        })
        .collect();

    let mut iff = Tally::default();
    let mut padded = Tally::default();
    let mut lifts = Tally::default();
    let mut extracts = Tally::default();
    let mut tree_iso = Vec::new();
    for r in runs {
        tree_iso.push(r.tree_iso);
        iff.merge(r.iff);
        padded.merge(r.padded);
        lifts.merge(r.lifts);
        extracts.merge(r.extracts);
    }
    let mut notes: Vec<String> = Vec::new();
    notes.extend(iff.examples.iter().map(|e| format!("biconditional: {e}")));
    notes.extend(lifts.examples.iter().map(|e| format!("lift: {e}")));
    notes.extend(extracts.examples.iter().map(|e| format!("extract: {e}")));
    notes.push(format!(
        "graphs padded with isolated vertices to the alphabet: biconditional holds on {} pairs",
        padded.ratio()
    ));
    TransferRun {
        tree_iso,
        outcome: Outcome {
            instances: iff.checks + lifts.checks + extracts.checks,
            failures: iff.failures + lifts.failures + extracts.failures,
            summary: format!(
                "biconditional {} pairs, lifts {}, extractions {} (spec {}x{})",
                iff.ratio(),
                lifts.ratio(),
                extracts.ratio(),
                spec.max_len,
                spec.alphabet
            ),
            notes,
        },
    }
}

fn t_coding_iso(cfg: &SuiteConfig) -> Outcome {
    t_transfer(cfg, PairingKind::Cantor).outcome
}

struct EmbeddingRun {
    verified: Vec<bool>,
    outcome: Outcome,
}

fn universal_run(cfg: &SuiteConfig, pairing: PairingKind) -> EmbeddingRun {
    let graphs = g3();
    let spec = TruncSpec::new(cfg.t_max_len, 3).with_pairing(pairing);
    let results: Vec<(bool, Tally, u64)> = ordered_pairs(graphs.len())
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (&graphs[i], &graphs[j]);
            let mut t = Tally::default();
            let (ok, longest) = match embed_universal_t(x, y, spec) {
                Ok(e) => (e.verify() == Ok(true), e.target_spec.max_len),
                Err(err) => {
                    t.check(false, || format!("{} -> {}: {err}", describe(x), describe(y)));
                    (false, 0)
                }
            };
            if t.checks == 0 {
                t.check(ok, || format!("{} -> {}: witness does not verify", describe(x), describe(y)));
            }
            (ok, t, longest)
        })
        .collect();

    // Small instances re-checked against the fully built target code.
    let small: Vec<(usize, usize, TruncSpec)> = ordered_pairs(graphs.len())
        .into_iter()
        .filter(|&(i, j)| graphs[i].len() <= 2 && graphs[j].len() <= 2)
        .map(|(i, j)| {
            let alphabet = if graphs[i].len() == 1 && graphs[j].len() == 1 { 1 } else { 2 };
            (i, j, TruncSpec::new(1, alphabet).with_pairing(pairing))
        })
        .collect();
    let full = small
        .par_iter()
        .map(|&(i, j, s)| {
            let (x, y) = (&graphs[i], &graphs[j]);
            let mut t = Tally::default();
            let ok = embed_universal_t(x, y, s).is_ok_and(|e| {
                build_t(y, e.target_spec).is_ok_and(|code| {
                    e.against(&code).is_some_and(|w| verify(e.source.structure(), code.structure(), &w) == Ok(true))
                })
            });
            t.check(ok, || format!("materialized {} -> {}", describe(x), describe(y)));
            t
        })
        .reduce(Tally::default, |mut a, b| {
            a.merge(b);
            a
        });

    let mut tally = Tally::default();
    let mut verified = Vec::new();
    let mut longest = 0;
    for (ok, t, l) in results {
        verified.push(ok);
        tally.merge(t);
        longest = longest.max(l);
    }
    let mut notes = tally.examples.clone();
    notes.extend(full.examples.iter().cloned());
    notes.push(format!("longest image sequence has length {longest}"));
    EmbeddingRun {
        verified,
        outcome: Outcome {
            instances: tally.checks + full.checks,
            failures: tally.failures + full.failures,
            summary: format!(
                "embeddings verified on {} pairs, materialized targets {}",
                tally.ratio(),
                full.ratio()
            ),
            notes,
        },
    }
}

fn universal_embedding(cfg: &SuiteConfig) -> Outcome {
    universal_run(cfg, PairingKind::Cantor).outcome
}

fn r_coding(cfg: &SuiteConfig) -> Outcome {
    let graphs = g3();
    let spec = TruncSpec::new(cfg.r_max_len, 4);
    let codes: Vec<_> = graphs.par_iter().map(|g| build_r(g, spec).expect("G3 fits alphabet 4")).collect();
    let runs: Vec<(Tally, Tally, Tally)> = ordered_pairs(graphs.len())
        .par_iter()
        .map(|&(i, j)| {
            let (x, y) = (&graphs[i], &graphs[j]);
            let who = || format!("{} vs {}", describe(x), describe(y));
            let (mut iff, mut padded, mut epi) = (Tally::default(), Tally::default(), Tally::default());
            let gi = oracle(x, y, MorphKind::Isomorphism, cfg);
            let ti = oracle(codes[i].structure(), codes[j].structure(), MorphKind::Isomorphism, cfg);
            match (&gi, &ti) {
                (Ok(g), Ok(t)) => {
                    iff.check(g.is_some() == t.is_some(), || {
                        format!("{}: graph-iso {}, tree-iso {}", who(), g.is_some(), t.is_some())
                    });
                    let pg = oracle(&pad_graph(x, 3), &pad_graph(y, 3), MorphKind::Isomorphism, cfg);
                    padded.check(pg.as_ref().is_ok_and(|p| p.is_some() == t.is_some()), who);
                }
                (g, t) => iff.check(false, || format!("{}: oracle error {g:?} {t:?}", who())),
            }
            for f in naive_all(x, y, MorphKind::Embedding) {
                let tight = TruncSpec::new(cfg.r_max_len, x.len() as u32 + 1);
                let ok = weak_epi_r(x, y, &f, tight).is_ok_and(|e| e.verify() == Ok(true));
                epi.check(ok, || format!("weak epimorphism from {:?} for {}", f.map, who()));
            }
            (iff, padded, epi)
        })
        .collect();
    let (mut iff, mut padded, mut epi) = (Tally::default(), Tally::default(), Tally::default());
    for (a, b, c) in runs {
        iff.merge(a);
        padded.merge(b);
        epi.merge(c);
    }
    let mut notes: Vec<String> = iff.examples.iter().map(|e| format!("biconditional: {e}")).collect();
    notes.extend(epi.examples.iter().map(|e| format!("epi: {e}")));
    notes.push(format!(
        "graphs padded with isolated vertices to alphabet - 1: biconditional holds on {} pairs",
        padded.ratio()
    ));
    notes.push("weak epimorphisms use R-codes over alphabet |graph| + 1 on both sides".into());
    Outcome {
        instances: iff.checks + epi.checks,
        failures: iff.failures + epi.failures,
        summary: format!(
            "biconditional {} pairs at spec {}x{}, weak epimorphisms {}",
            iff.ratio(),
            spec.max_len,
            spec.alphabet,
            epi.ratio()
        ),
        notes,
    }
}

/// First-family members used as classifier targets, by edge count of the
/// coded graph: a point, a 2-chain, an edge with its chain, and the path
/// on three vertices ordered along the path.
fn kit_targets(prime: &[Structure]) -> Vec<usize> {
    let targets = [
        Structure::ordered_graph(1, &[], &[]),
        Structure::ordered_graph(2, &[], &[(0, 1)]),
        Structure::ordered_graph(2, &[(0, 1)], &[(0, 1)]),
        Structure::ordered_graph(3, &[(0, 1), (1, 2)], &[(0, 1), (0, 2), (1, 2)]),
    ];
    targets
        .iter()
        .map(|t| {
            let t = t.as_ref().expect("valid target");
            prime.iter().position(|p| p == t).expect("target in family")
        })
        .collect()
}

/// Distinct T-codes of G3 at the given truncation, each with the edge
/// count of a graph producing it.
fn distinct_t_codes(spec: TruncSpec) -> Vec<(Structure, usize)> {
    let mut seen = BTreeSet::new();
    let mut out: Vec<(Structure, usize)> = Vec::new();
    for g in g3() {
        let code = build_t(&g, spec).expect("G3 fits alphabet 3");
        let edges = g.relation(Relation::Edge).map_or(0, |e| e.len() / 2);
        if seen.insert(crate::structures::save_structure(code.structure())) {
            out.push((code.structure().clone(), edges));
        }
    }
    out
}

fn audit_kit(kit: &WitnessKit, k: usize, variant: &Variant, label: &str, full_forward: bool) -> (Tally, String) {
    let mut t = Tally::default();
    let w = match assemble_w(kit, k, variant) {
        Ok(w) => w,
        Err(e) => {
            t.check(false, || format!("{label} k={k}: {e}"));
            return (t, format!("{label} k={k}: assembly failed"));
        }
    };
    let audit = match audit_w(&w) {
        Ok(a) => a,
        Err(e) => {
            t.check(false, || format!("{label} k={k}: {e}"));
            return (t, format!("{label} k={k}: audit failed"));
        }
    };
    let mut forward_checked = 0;
    for p in &audit.pairs {
        let ctx = || format!("{label} k={k} entries {} -> {}", p.i, p.j);
        if full_forward || p.z_embeds {
            forward_checked += 1;
            t.check(!p.s || p.image_embeds, || format!("{}: S holds but images do not embed", ctx()));
        }
        t.check(!p.image_embeds || p.s, || format!("{}: images embed but S fails", ctx()));
        t.check(p.f == p.image_iso, || format!("{}: F is {} but image iso is {}", ctx(), p.f, p.image_iso));
        t.check(p.respects_parts, || format!("{}: witness mixes parts", ctx()));
    }
    t.check(audit.collisions.is_empty(), || format!("{label} k={k}: equal images {:?}", audit.collisions));
    let note = format!(
        "{label} k={k}: {} entries, {} ordered pairs, S-forward checked on {forward_checked}",
        w.entries.len(),
        audit.pairs.len()
    );
    (t, note)
}

fn w_space(_cfg: &SuiteConfig) -> Outcome {
    let prime = strictly_ordered_graphs(3);
    let targets = kit_targets(&prime);
    let mut tally = Tally::default();
    let mut notes = Vec::new();

    // Second family exactly as prescribed: T-codes of G3 at depth 2. These
    // coincide, so the family is trivially pairwise embeddable.
    let literal: Vec<Structure> = distinct_t_codes(TruncSpec::new(2, 3)).into_iter().map(|(s, _)| s).collect();
    notes.push(format!("depth-2 T-codes of G3 give {} distinct structure(s)", literal.len()));
    let n = literal.len();
    for i in 0..n {
        for j in 0..n {
            let ok = matches!(oracle(&literal[i], &literal[j], MorphKind::Embedding, _cfg), Ok(Some(_)));
            tally.check(ok, || format!("second-family members {i} and {j} are not embeddable"));
        }
    }
    match WitnessKit::new(prime.clone(), literal, vec![targets[0]; n], None) {
        Ok(kit) => {
            for k in [1, 2] {
                let (t, note) = audit_kit(&kit, k, &Variant::Full, "depth-2 kit", true);
                tally.merge(t);
                notes.push(note);
            }
        }
        Err(e) => tally.check(false, || format!("depth-2 kit: {e}")),
    }

    // A kit with several isomorphism classes: T-codes at depth 3, classified
    // by edge count. S-forward is checked where the z-parts embed.
    let deep = distinct_t_codes(TruncSpec::new(3, 3));
    notes.push(format!("depth-3 T-codes of G3 give {} distinct structures", deep.len()));
    let classify = deep.iter().map(|&(_, e)| targets[e]).collect();
    let deep_codes: Vec<Structure> = deep.iter().map(|(s, _)| s.clone()).collect();
    match WitnessKit::new(prime.clone(), deep_codes.clone(), classify, None) {
        Ok(kit) => {
            for k in [1, 2] {
                let (t, note) = audit_kit(&kit, k, &Variant::Full, "depth-3 kit", false);
                tally.merge(t);
                notes.push(note);
            }
            let by_edges = |e: usize| deep.iter().find(|&&(_, c)| c == e).map(|(s, _)| s.clone()).expect("present");
            let reps = NClasses::new(vec![by_edges(0), by_edges(3)], vec![prime[targets[0]].clone(), prime[targets[3]].clone()]);
            match reps {
                Ok(reps) => {
                    let (t, note) = audit_kit(&kit, 1, &Variant::NClasses(reps), "depth-3 kit, 2 classes", false);
                    tally.merge(t);
                    notes.push(note);
                }
                Err(e) => tally.check(false, || format!("class representatives: {e}")),
            }
        }
        Err(e) => tally.check(false, || format!("depth-3 kit: {e}")),
    }
    notes.extend(tally.examples.iter().cloned());
    Outcome {
        instances: tally.checks,
        failures: tally.failures,
        summary: format!("W-space checks {}", tally.ratio()),
        notes,
    }
}

fn permutations(n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = (0..n).collect();
    // Heap's algorithm
    fn heap(k: usize, a: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            a.swap(j, k - 1);
        }
        let _ = a;
    }
    heap(n as usize, &mut current, &mut out);
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn parity_group() -> Outcome {
    let mut t = Tally::default();
    for k in 1..=4usize {
        let g = enumerate_g(k);
        t.check(g.len() as u64 == binomial(2 * k as u64, k as u64), || {
            format!("k={k}: {} members", g.len())
        });
        let filtered = permutations(2 * k as u32).into_iter().filter(|h| is_parity_monotone(h)).count();
        t.check(filtered == g.len(), || format!("k={k}: filter finds {filtered}"));
        let odd: BTreeSet<_> = g.iter().map(|h| h.odd_image()).collect();
        t.check(odd.len() == g.len(), || format!("k={k}: odd images do not determine members"));
    }
    for k in 1..=3u32 {
        for h in permutations(2 * k) {
            let ok = decompose_parity(&h).is_ok_and(|(g, p, q)| {
                (0..k as usize).all(|n| h[2 * n] == g.apply(2 * p[n]) && h[2 * n + 1] == g.apply(2 * q[n] + 1))
            });
            t.check(ok, || format!("decomposition of {h:?}"));
        }
    }
    Outcome {
        instances: t.checks,
        failures: t.failures,
        summary: format!("counts, decompositions and odd-image determinacy {}", t.ratio()),
        notes: t.examples,
    }
}

fn schroeder_bernstein(cfg: &SuiteConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut t = Tally::default();
    let mut largest = 0;
    for i in 0..200 {
        let (e, g, phi, psi) = random_instance(&mut rng, 20);
        largest = largest.max(e.blocks().len());
        let ok = sb_bijection(&e, &g, &phi, &psi).is_ok_and(|r| check_classwise_iso(&r.phi, &r.psi, &e, &g));
        t.check(ok, || format!("instance {i}"));
    }
    let mut notes = t.examples.clone();
    notes.push(format!("seed {}, largest instance {largest} blocks", cfg.seed));
    Outcome {
        instances: t.checks,
        failures: t.failures,
        summary: format!("classwise isomorphisms {}", t.ratio()),
        notes,
    }
}

fn coding_arithmetic() -> Outcome {
    let mut t = Tally::default();
    for n in 0..=50u64 {
        for m in 0..=50u64 {
            let k = pair_index(n, m);
            t.check(unpair_index(k) == (n, m), || format!("unpair(pair({n},{m}))"));
            t.check(n <= k && m <= k, || format!("bound at ({n},{m})"));
        }
    }
    for len in 1..=50u32 {
        let s: Vec<u32> = (0..len).collect();
        t.check(relevant_pair(&s, PairingKind::Cantor).is_ok(), || format!("relevant pair at length {len}"));
    }
    // Even-length extensions realizing every target pair beyond a prefix.
    for pairing in [PairingKind::Cantor, PairingKind::SwappedCantor] {
        for a in 0..4u32 {
            for b in 0..4u32 {
                for prefix in 0..=20u64 {
                    let half = even_extension_half_length(prefix, a != b, pairing).expect("small");
                    let (n, m) = pairing.unpair(half - 1);
                    t.check(2 * n > prefix && 2 * m > prefix, || format!("positions for ({a},{b}) past {prefix}"));
                    let shorter = (1..half).any(|l| {
                        let (n, m) = pairing.unpair(l - 1);
                        2 * n > prefix && 2 * m > prefix && (a == b || n != m)
                    });
                    t.check(!shorter, || format!("({a},{b}) past {prefix}: a shorter length works"));
                    let stem: Vec<u32> = (0..prefix).map(|i| (i % 4) as u32).collect();
                    let mut v = stem.clone();
                    v.resize(2 * half as usize, 0);
                    v[2 * n as usize] = a;
                    v[2 * m as usize] = b;
                    t.check(
                        v.starts_with(&stem) && even_relevant_pair(&v, pairing) == Ok((a, b)),
                        || format!("extension for ({a},{b}) past {prefix}"),
                    );
                }
            }
        }
    }
    Outcome {
        instances: t.checks,
        failures: t.failures,
        summary: format!("pairing and extension checks {}", t.ratio()),
        notes: t.examples,
    }
}

fn pairing_swap(cfg: &SuiteConfig) -> Outcome {
    let mut t = Tally::default();
    let base_t = t_transfer(cfg, PairingKind::Cantor);
    let alt_t = t_transfer(cfg, PairingKind::SwappedCantor);
    t.check(base_t.outcome.passed() == alt_t.outcome.passed(), || {
        format!(
            "iso transfer: {} under Cantor, {} under the swapped pairing",
            base_t.outcome.passed(),
            alt_t.outcome.passed()
        )
    });
    t.check(base_t.tree_iso == alt_t.tree_iso, || "tree-iso verdicts differ between pairings".into());
    let base_u = universal_run(cfg, PairingKind::Cantor);
    let alt_u = universal_run(cfg, PairingKind::SwappedCantor);
    t.check(base_u.outcome.passed() == alt_u.outcome.passed(), || "universal embedding outcomes differ".into());
    t.check(base_u.verified == alt_u.verified, || "per-pair embedding verdicts differ".into());
    let mut notes = t.examples.clone();
    notes.push(format!(
        "iso transfer passes: Cantor {}, swapped {}; universal embedding passes: Cantor {}, swapped {}",
        base_t.outcome.passed(),
        alt_t.outcome.passed(),
        base_u.outcome.passed(),
        alt_u.outcome.passed()
    ));
    Outcome {
        instances: t.checks + base_t.outcome.instances + base_u.outcome.instances,
        failures: t.failures,
        summary: format!("outcomes agree across pairings {}", t.ratio()),
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn naive_orders_witnesses_lexicographically() {
        let p3 = Structure::graph(3, &[(0, 1), (1, 2)]).unwrap();
        let all = naive_all(&p3, &p3, MorphKind::Isomorphism);
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].tuple(), vec![0, 1, 2]);
        assert_eq!(all[1].tuple(), vec![2, 1, 0]);
        let empty = Structure::graph(0, &[]).unwrap();
        assert_eq!(naive_all(&empty, &p3, MorphKind::Embedding).len(), 1);
        assert!(naive_all(&p3, &empty, MorphKind::Embedding).is_empty());
    }

    #[test]
    fn filters() {
        assert_eq!(select(Some("coding")).len(), 1);
        assert_eq!(select(Some("trees")).len(), 4);
        assert_eq!(select(Some("w-space"))[0].id, 5);
        assert!(select(Some("nothing")).is_empty());
        assert_eq!(select(None).len(), 9);
    }

    #[test]
    fn heap_permutations() {
        let p: BTreeSet<Vec<u32>> = permutations(4).into_iter().collect();
        assert_eq!(p.len(), 24);
    }
}
