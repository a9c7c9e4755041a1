use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Label, Relation, Structure, StructureError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed document at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown relation name {0:?}")]
    UnknownRelation(String),
    #[error(transparent)]
    Invalid(#[from] StructureError),
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct Document {
    pub domain: Vec<Label>,
    pub relations: BTreeMap<String, Vec<[Label; 2]>>,
}

impl Document {
    pub(crate) fn from_structure(s: &Structure) -> Self {
        Document {
            domain: s.domain().iter().copied().collect(),
            relations: s
                .relations()
                .map(|(r, pairs)| (r.name().to_string(), pairs.iter().map(|&(a, b)| [a, b]).collect()))
                .collect(),
        }
    }

    pub(crate) fn into_structure(self) -> Result<Structure, ParseError> {
        let mut rels = Vec::with_capacity(self.relations.len());
        for (name, pairs) in self.relations {
            let rel = Relation::from_name(&name).ok_or(ParseError::UnknownRelation(name))?;
            rels.push((rel, pairs.into_iter().map(|[a, b]| (a, b))));
        }
        Ok(Structure::new(self.domain, rels)?)
    }
}

/// Parses a structure document. Labels and pairs may appear in any order;
/// duplicates are collapsed.
pub fn load_structure(bytes: &[u8]) -> Result<Structure, ParseError> {
    let doc: Document = serde_json::from_slice(bytes)?;
    doc.into_structure()
}

/// Canonical document: compact JSON, labels ascending, pairs sorted
/// lexicographically, relation keys in name order, trailing newline.
pub fn save_structure(s: &Structure) -> Vec<u8> {
    let mut out = serde_json::to_vec(&Document::from_structure(s)).expect("serializable");
    out.push(b'\n');
    out
}

/// Graphviz rendering: `edge` as undirected lines (one per unordered pair),
/// `order` as dashed arrows, `tree` as solid arrows.
pub fn export_dot(s: &Structure) -> Vec<u8> {
    let mut out = String::from("digraph {\n");
    for l in s.domain() {
        let _ = writeln!(out, "  {l};");
    }
    for (rel, pairs) in s.relations() {
        for &(a, b) in pairs {
            match rel {
                Relation::Edge if a <= b || !pairs.contains(&(b, a)) => {
                    let _ = writeln!(out, "  {a} -> {b} [dir=none];");
                }
                Relation::Edge => {}
                Relation::Order => {
                    let _ = writeln!(out, "  {a} -> {b} [style=dashed];");
                }
                Relation::Tree => {
                    let _ = writeln!(out, "  {a} -> {b};");
                }
            }
        }
    }
    out.push_str("}\n");
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p3_round_trip_is_byte_identical() {
        let doc = b"{\"domain\":[0,1,2],\"relations\":{\"edge\":[[0,1],[1,0],[1,2],[2,1]]}}\n";
        let s = load_structure(doc).unwrap();
        assert_eq!(s, Structure::graph(3, &[(0, 1), (1, 2)]).unwrap());
        assert_eq!(save_structure(&s), doc.to_vec());
    }

    #[test]
    fn label_outside_domain() {
        let err = load_structure(br#"{"domain":[0,1],"relations":{"edge":[[0,7]]}}"#).unwrap_err();
        assert!(err.to_string().contains("label 7 out of domain"), "{err}");
    }

    #[test]
    fn malformed_reports_position() {
        let err = load_structure(b"{\"domain\": [0,\n 1,}").unwrap_err();
        match err {
            ParseError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn unknown_relation() {
        let err = load_structure(br#"{"domain":[],"relations":{"color":[]}}"#).unwrap_err();
        assert!(matches!(err, ParseError::UnknownRelation(ref n) if n == "color"));
    }

    #[test]
    fn empty_structure_dot() {
        let e = load_structure(br#"{"domain":[],"relations":{}}"#).unwrap();
        assert!(e.is_empty());
        assert_eq!(export_dot(&e), b"digraph {\n}\n".to_vec());
    }

    #[test]
    fn dot_styles() {
        let s = Structure::new(
            0..2,
            [
                (Relation::Edge, vec![(0, 1), (1, 0)]),
                (Relation::Order, vec![(0, 1)]),
                (Relation::Tree, vec![(1, 0)]),
            ],
        )
        .unwrap();
        let dot = String::from_utf8(export_dot(&s)).unwrap();
        assert_eq!(dot.matches("[dir=none]").count(), 1);
        assert!(dot.contains("0 -> 1 [style=dashed];"));
        assert!(dot.contains("  1 -> 0;\n"));
    }
}
