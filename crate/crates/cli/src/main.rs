//! `iforge`: command-line front end.
//!
//! Exit codes: 0 found / valid / passed, 1 none / invalid / failed, 2 error
//! or exhausted search budget.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use iforge::coding::{even_subsequence, relevant_pair, Pairing, PairingKind};
use iforge::morphisms::{search_with_budget, MorphKind, MorphismWitness, SearchOutcome};
use iforge::quotients::{sb_bijection, FinPartition, ReductionMap};
use iforge::structures::{
    canonical_form, export_dot, load_structure, save_structure, validate, Structure, StructureClass,
};
use iforge::suite::{run_suite, SuiteConfig};
use iforge::sums::{assemble_w, enumerate_g, oplus, oplus_rooted, NClasses, Variant, WitnessKit};
use iforge::trees::{build_r, build_t, embed_universal_t, lift_iso, weak_epi_r, TreeCode, TruncSpec};

#[derive(Parser)]
#[command(name = "iforge", version, about = "Finite structures, tree codings and morphism oracles")]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Least isomorphism between two structures.
    Iso(Pair),
    /// Least embedding.
    Embed(Pair),
    /// Least homomorphism.
    Hom(Pair),
    /// Least weak homomorphism.
    Weakhom(Pair),
    /// Least epimorphism.
    Epi(Pair),
    /// Least weak epimorphism.
    Weakepi(Pair),
    /// Check a structure against the axioms of a class.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "graph")]
        class: ClassArg,
    },
    /// Canonical form (least relabeling onto 0..n).
    Canon { file: PathBuf },
    /// Graphviz rendering.
    Dot { file: PathBuf },
    /// Pairing index of (n, m).
    Pair {
        n: u64,
        m: u64,
        #[arg(long, value_enum, default_value = "cantor")]
        pairing: PairingArg,
    },
    /// Inverse of `pair`.
    Unpair {
        k: u64,
        #[arg(long, value_enum, default_value = "cantor")]
        pairing: PairingArg,
    },
    /// Relevant pair of a sequence (comma-separated), and of its even part.
    Rp {
        seq: String,
        #[arg(long, value_enum, default_value = "cantor")]
        pairing: PairingArg,
    },
    /// T-code of a graph.
    BuildT {
        file: PathBuf,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// R-code of a graph.
    BuildR {
        file: PathBuf,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Lift a graph isomorphism to the codes.
    LiftIso {
        x: PathBuf,
        y: PathBuf,
        sigma: PathBuf,
        #[arg(long, value_enum, default_value = "t")]
        code: CodeArg,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Embed the T-code of x into a T-code of y.
    EmbedUniversal {
        x: PathBuf,
        y: PathBuf,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Weak epimorphism between R-codes from an embedding f: x -> y.
    WeakEpi {
        x: PathBuf,
        y: PathBuf,
        f: PathBuf,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Sum of x (evens) and z (odds).
    Oplus { x: PathBuf, z: PathBuf },
    /// Sum with the two roots joined.
    OplusRooted { x: PathBuf, z: PathBuf },
    /// Parity-monotone permutations of 0..2k.
    EnumG { k: usize },
    /// Finite W-space of a witness kit.
    AssembleW {
        kit: PathBuf,
        k: usize,
        #[arg(long)]
        n_classes: Option<PathBuf>,
    },
    /// Schroeder-Bernstein bijection between two quotients.
    Sb { e: PathBuf, f: PathBuf, phi: PathBuf, psi: PathBuf },
    /// Run the acceptance suite.
    Suite {
        /// Criterion name or module tag.
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// T-code truncation depth.
        #[arg(long)]
        maxlen: Option<u64>,
    },
}

#[derive(Args)]
struct Pair {
    a: PathBuf,
    b: PathBuf,
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long, default_value_t = 4)]
    maxlen: u64,
    /// Defaults to the number of vertices (plus one for R-codes).
    #[arg(long)]
    alphabet: Option<u32>,
    #[arg(long, value_enum, default_value = "cantor")]
    pairing: PairingArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairingArg {
    Cantor,
    Swapped,
}

impl From<PairingArg> for PairingKind {
    fn from(p: PairingArg) -> Self {
        match p {
            PairingArg::Cantor => PairingKind::Cantor,
            PairingArg::Swapped => PairingKind::SwappedCantor,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CodeArg {
    T,
    R,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Graph,
    OrderedGraph,
    CombinatorialTree,
    OrderedCombinatorialTree,
    SetTree,
    OrderedSetTree,
}

impl From<ClassArg> for StructureClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Graph => StructureClass::Graph,
            ClassArg::OrderedGraph => StructureClass::OrderedGraph,
            ClassArg::CombinatorialTree => StructureClass::CombinatorialTree,
            ClassArg::OrderedCombinatorialTree => StructureClass::OrderedCombinatorialTree,
            ClassArg::SetTree => StructureClass::SetTree,
            ClassArg::OrderedSetTree => StructureClass::OrderedSetTree,
        }
    }
}

/// Elements of partitions given on the command line: integers or strings.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
enum Elem {
    Int(i64),
    Str(String),
}

enum Status {
    Yes,
    No,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Status::Yes) => ExitCode::SUCCESS,
        Ok(Status::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn structure(path: &Path) -> Result<Structure> {
    load_structure(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn document(s: &Structure) -> Value {
    serde_json::from_slice(&save_structure(s)).expect("structure documents are JSON")
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}

/// A witness file: either a full witness `{"kind":..,"map":[[a,b],..]}` or
/// just the pair list.
fn witness(path: &Path, kind: MorphKind) -> Result<MorphismWitness> {
    let bytes = read(path)?;
    if let Ok(w) = serde_json::from_slice::<MorphismWitness>(&bytes) {
        return Ok(w);
    }
    let pairs: Vec<[u32; 2]> =
        serde_json::from_slice(&bytes).with_context(|| format!("parsing witness {}", path.display()))?;
    let mut map = BTreeMap::new();
    for [a, b] in pairs {
        if map.insert(a, b).is_some() {
            bail!("label {a} mapped twice in {}", path.display());
        }
    }
    Ok(MorphismWitness::new(kind, map))
}

fn reduction(path: &Path) -> Result<ReductionMap<Elem, Elem>> {
    let pairs: Vec<(Elem, Elem)> =
        serde_json::from_slice(&read(path)?).with_context(|| format!("parsing map {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (a, b) in pairs {
        if map.insert(a.clone(), b).is_some() {
            bail!("{a:?} mapped twice in {}", path.display());
        }
    }
    Ok(map)
}

fn budget() -> Result<Option<u64>> {
    match std::env::var("IFORGE_BUDGET") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| anyhow!("IFORGE_BUDGET must be a number, got {v:?}")),
        Err(_) => Ok(None),
    }
}

fn spec(args: &SpecArgs, default_alphabet: u32) -> TruncSpec {
    TruncSpec::new(args.maxlen, args.alphabet.unwrap_or(default_alphabet)).with_pairing(args.pairing.into())
}

fn code_json(code: &TreeCode) -> Value {
    json!({"structure": document(code.structure()), "provenance": code.provenance_json()})
}

fn oracle(pair: &Pair, kind: MorphKind, as_json: bool) -> Result<Status> {
    let (a, b) = (structure(&pair.a)?, structure(&pair.b)?);
    match search_with_budget(&a, &b, kind, budget()?)? {
        SearchOutcome::Found(w) => {
            if as_json {
                print(&serde_json::to_value(&w)?);
            } else {
                print(&serde_json::to_value(w.map.iter().map(|(&a, &b)| [a, b]).collect::<Vec<_>>())?);
            }
            Ok(Status::Yes)
        }
        SearchOutcome::Absent => {
            println!("{}", if as_json { "null" } else { "none" });
            Ok(Status::No)
        }
        SearchOutcome::BudgetExhausted { expanded } => bail!("search budget exhausted after {expanded} expansions"),
    }
}

fn parse_seq(s: &str) -> Result<Vec<u32>> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| anyhow!("bad sequence entry {t:?}"))).collect()
}

fn run(cli: Cli) -> Result<Status> {
    let as_json = cli.json;
    match cli.verb {
        Verb::Iso(p) => oracle(&p, MorphKind::Isomorphism, as_json),
        Verb::Embed(p) => oracle(&p, MorphKind::Embedding, as_json),
        Verb::Hom(p) => oracle(&p, MorphKind::Homomorphism, as_json),
        Verb::Weakhom(p) => oracle(&p, MorphKind::WeakHomomorphism, as_json),
        Verb::Epi(p) => oracle(&p, MorphKind::Epimorphism, as_json),
        Verb::Weakepi(p) => oracle(&p, MorphKind::WeakEpimorphism, as_json),
        Verb::Validate { file, class } => {
            let diags = validate(&structure(&file)?, class.into());
            if as_json {
                let v: Vec<Value> = diags
                    .iter()
                    .map(|d| json!({"axiom": d.axiom, "witness": d.witness, "message": d.message}))
                    .collect();
                print(&Value::Array(v));
            } else if diags.is_empty() {
                println!("valid");
            } else {
                for d in &diags {
                    println!("{}: {} {:?}", d.axiom, d.message, d.witness);
                }
            }
            Ok(if diags.is_empty() { Status::Yes } else { Status::No })
        }
        Verb::Canon { file } => {
            print(&document(&canonical_form(&structure(&file)?)));
            Ok(Status::Yes)
        }
        Verb::Dot { file } => {
            print!("{}", String::from_utf8(export_dot(&structure(&file)?))?);
            Ok(Status::Yes)
        }
        Verb::Pair { n, m, pairing } => {
            let k = PairingKind::from(pairing).pair(n, m);
            if as_json {
                print(&json!({"n": n, "m": m, "index": k}));
            } else {
                println!("{k}");
            }
            Ok(Status::Yes)
        }
        Verb::Unpair { k, pairing } => {
            let (n, m) = PairingKind::from(pairing).unpair(k);
            if as_json {
                print(&json!({"index": k, "n": n, "m": m}));
            } else {
                println!("{n} {m}");
            }
            Ok(Status::Yes)
        }
        Verb::Rp { seq, pairing } => {
            let s = parse_seq(&seq)?;
            let pairing = PairingKind::from(pairing);
            let rp = relevant_pair(&s, pairing)?;
            let even = even_subsequence(&s);
            let erp = relevant_pair(&even, pairing).ok();
            if as_json {
                print(&json!({"seq": s, "rp": rp, "even": even, "evenRp": erp}));
            } else {
                println!("rp {} {}", rp.0, rp.1);
                match erp {
                    Some((a, b)) => println!("even rp {a} {b}"),
                    None => println!("even rp undefined"),
                }
            }
            Ok(Status::Yes)
        }
        Verb::BuildT { file, spec: args } => {
            let x = structure(&file)?;
            let code = build_t(&x, spec(&args, x.len() as u32))?;
            print(&code_json(&code));
            Ok(Status::Yes)
        }
        Verb::BuildR { file, spec: args } => {
            let x = structure(&file)?;
            let code = build_r(&x, spec(&args, x.len() as u32 + 1))?;
            print(&code_json(&code));
            Ok(Status::Yes)
        }
        Verb::LiftIso { x, y, sigma, code, spec: args } => {
            let (x, y) = (structure(&x)?, structure(&y)?);
            let sigma = witness(&sigma, MorphKind::Isomorphism)?;
            let n = x.len().max(y.len()) as u32;
            let (cx, cy) = match code {
                CodeArg::T => {
                    let s = spec(&args, n);
                    (build_t(&x, s)?, build_t(&y, s)?)
                }
                CodeArg::R => {
                    let s = spec(&args, n + 1);
                    (build_r(&x, s)?, build_r(&y, s)?)
                }
            };
            let w = lift_iso(&cx, &cy, &sigma)?;
            print(&json!({"witness": w, "source": code_json(&cx), "target": code_json(&cy)}));
            Ok(Status::Yes)
        }
        Verb::EmbedUniversal { x, y, spec: args } => {
            let (x, y) = (structure(&x)?, structure(&y)?);
            let e = embed_universal_t(&x, &y, spec(&args, x.len() as u32))?;
            print(&json!({
                "witness": e.witness,
                "source": code_json(&e.source),
                "target": {"structure": document(e.target.structure()), "provenance": e.target.provenance_json()},
                "targetSpec": {"maxLen": e.target_spec.max_len, "alphabet": e.target_spec.alphabet},
            }));
            Ok(Status::Yes)
        }
        Verb::WeakEpi { x, y, f, spec: args } => {
            let (x, y) = (structure(&x)?, structure(&y)?);
            let f = witness(&f, MorphKind::Embedding)?;
            let e = weak_epi_r(&x, &y, &f, spec(&args, x.len() as u32 + 1))?;
            print(&json!({
                "witness": e.witness,
                "g": e.g,
                "source": code_json(&e.source),
                "target": code_json(&e.target),
            }));
            Ok(Status::Yes)
        }
        Verb::Oplus { x, z } => {
            print(&document(&oplus(&structure(&x)?, &structure(&z)?)));
            Ok(Status::Yes)
        }
        Verb::OplusRooted { x, z } => {
            print(&document(&oplus_rooted(&structure(&x)?, &structure(&z)?)?));
            Ok(Status::Yes)
        }
        Verb::EnumG { k } => {
            let g = enumerate_g(k);
            if as_json {
                print(&serde_json::to_value(&g)?);
            } else {
                for h in &g {
                    println!("{}", h.images().iter().map(u32::to_string).collect::<Vec<_>>().join(" "));
                }
            }
            Ok(Status::Yes)
        }
        Verb::AssembleW { kit, k, n_classes } => {
            let kit = WitnessKit::from_json(&read(&kit)?)?;
            let variant = match n_classes {
                Some(p) => Variant::NClasses(NClasses::from_json(&read(&p)?)?),
                None => Variant::Full,
            };
            print(&assemble_w(&kit, k, &variant)?.to_json());
            Ok(Status::Yes)
        }
        Verb::Sb { e, f, phi, psi } => {
            let e = FinPartition::<Elem>::from_json(&read(&e)?)?;
            let g = FinPartition::<Elem>::from_json(&read(&f)?)?;
            let (phi, psi) = (reduction(&phi)?, reduction(&psi)?);
            let r = sb_bijection(&e, &g, &phi, &psi)?;
            let pairs = |m: &ReductionMap<Elem, Elem>| m.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>();
            print(&json!({"bijection": r.bijection, "phi": pairs(&r.phi), "psi": pairs(&r.psi)}));
            Ok(Status::Yes)
        }
        Verb::Suite { filter, seed, maxlen } => {
            let defaults = SuiteConfig::default();
            let cfg = SuiteConfig {
                seed: seed.unwrap_or(defaults.seed),
                t_max_len: maxlen.unwrap_or(defaults.t_max_len),
                budget: budget()?,
                ..defaults
            };
            if filter.as_deref().is_some_and(|f| iforge::suite::select(Some(f)).is_empty()) {
                bail!("no criterion named or tagged {:?}", filter.unwrap());
            }
            let report = run_suite(filter.as_deref(), &cfg);
            if as_json {
                print(&serde_json::to_value(&report)?);
            } else {
                print!("{}", report.text());
            }
            Ok(if report.passed() { Status::Yes } else { Status::No })
        }
    }
}
