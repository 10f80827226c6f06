//! The proof-structure file format.
//!
//! ```json
//! {
//!   "occurrences": [{"id": 0, "formula": "~p"}, {"id": 1, "formula": "p"}],
//!   "links": [{"kind": "id", "neg": 0, "pos": 1}]
//! }
//! ```
//!
//! Links are `{"kind":"id","neg","pos"}`, `{"kind":"tensor","left","right","concl"}`
//! or `{"kind":"par","left","right","concl"}`. Unknown fields are rejected and
//! ids are non-negative 32-bit integers. Formula syntax is described in
//! [`crate::formula`].

use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Formula;
use crate::structure::{Link, OccId, Occurrence, ProofStructure, ValidationError};

#[derive(Debug, Error)]
pub enum FormatError {
    /// Syntax, schema and formula errors; carries line and column.
    #[error("{0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid structure: {0}")]
    Invalid(#[from] ValidationError),
}

impl FormatError {
    pub fn line(&self) -> Option<usize> {
        match self {
            FormatError::Syntax(e) => Some(e.line()),
            FormatError::Invalid(_) => None,
        }
    }
}

/// Options for reading structure files.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReadOptions {
    /// Accept any atom name and erase it, instead of requiring `p`.
    pub erase_atom_names: bool,
}

trait FormulaSyntax {
    fn parse(text: &str) -> Result<Formula, crate::formula::FormulaError>;
}

struct Strict;
struct Erasing;

impl FormulaSyntax for Strict {
    fn parse(text: &str) -> Result<Formula, crate::formula::FormulaError> {
        Formula::parse(text)
    }
}

impl FormulaSyntax for Erasing {
    fn parse(text: &str) -> Result<Formula, crate::formula::FormulaError> {
        Formula::parse_erasing_names(text)
    }
}

struct ParsedFormula<S>(Formula, PhantomData<S>);

impl<'de, S: FormulaSyntax> Deserialize<'de> for ParsedFormula<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V<S>(PhantomData<S>);
        impl<S: FormulaSyntax> de::Visitor<'_> for V<S> {
            type Value = ParsedFormula<S>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a formula string")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                S::parse(v)
                    .map(|f| ParsedFormula(f, PhantomData))
                    .map_err(|e| E::custom(format!("bad formula {v:?}: {e}")))
            }
        }
        d.deserialize_str(V(PhantomData))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, bound = "S: FormulaSyntax")]
struct InDoc<S> {
    occurrences: Vec<InOcc<S>>,
    links: Vec<LinkDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, bound = "S: FormulaSyntax")]
struct InOcc<S> {
    id: u32,
    formula: ParsedFormula<S>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum LinkDoc {
    Id { neg: u32, pos: u32 },
    Tensor { left: u32, right: u32, concl: u32 },
    Par { left: u32, right: u32, concl: u32 },
}

impl From<LinkDoc> for Link {
    fn from(l: LinkDoc) -> Link {
        match l {
            LinkDoc::Id { neg, pos } => Link::Id {
                neg: OccId(neg),
                pos: OccId(pos),
            },
            LinkDoc::Tensor { left, right, concl } => Link::Tensor {
                left: OccId(left),
                right: OccId(right),
                concl: OccId(concl),
            },
            LinkDoc::Par { left, right, concl } => Link::Par {
                left: OccId(left),
                right: OccId(right),
                concl: OccId(concl),
            },
        }
    }
}

impl From<&Link> for LinkDoc {
    fn from(l: &Link) -> LinkDoc {
        match *l {
            Link::Id { neg, pos } => LinkDoc::Id {
                neg: neg.0,
                pos: pos.0,
            },
            Link::Tensor { left, right, concl } => LinkDoc::Tensor {
                left: left.0,
                right: right.0,
                concl: concl.0,
            },
            Link::Par { left, right, concl } => LinkDoc::Par {
                left: left.0,
                right: right.0,
                concl: concl.0,
            },
        }
    }
}

#[derive(Serialize)]
struct OutDoc {
    occurrences: Vec<OutOcc>,
    links: Vec<LinkDoc>,
}

#[derive(Serialize)]
struct OutOcc {
    id: u32,
    formula: String,
}

fn parts<S: FormulaSyntax>(text: &str) -> Result<(Vec<Occurrence>, Vec<Link>), FormatError> {
    let doc: InDoc<S> = serde_json::from_str(text)?;
    let occs = doc
        .occurrences
        .into_iter()
        .map(|o| Occurrence {
            id: OccId(o.id),
            formula: o.formula.0,
        })
        .collect();
    let links = doc.links.into_iter().map(Link::from).collect();
    Ok((occs, links))
}

/// Parses a document into occurrences and links without validating them.
pub fn parse_parts(
    text: &str,
    opts: ReadOptions,
) -> Result<(Vec<Occurrence>, Vec<Link>), FormatError> {
    if opts.erase_atom_names {
        parts::<Erasing>(text)
    } else {
        parts::<Strict>(text)
    }
}

/// Parses and validates a structure file.
pub fn parse_structure(text: &str, opts: ReadOptions) -> Result<ProofStructure, FormatError> {
    let (occs, links) = parse_parts(text, opts)?;
    Ok(ProofStructure::validate(occs, links)?)
}

/// Serializes a structure. Output is deterministic and ends with a newline.
pub fn to_json(ps: &ProofStructure) -> String {
    let doc = OutDoc {
        occurrences: ps
            .occurrences()
            .iter()
            .map(|o| OutOcc {
                id: o.id.0,
                formula: o.formula.to_string(),
            })
            .collect(),
        links: ps.links().iter().map(LinkDoc::from).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const AXIOM: &str = r#"{
        "occurrences": [{"id": 0, "formula": "~p"}, {"id": 1, "formula": "p"}],
        "links": [{"kind": "id", "neg": 0, "pos": 1}]
    }"#;

    #[test]
    fn reads_single_axiom() {
        let ps = parse_structure(AXIOM, ReadOptions::default()).unwrap();
        assert_eq!(ps.num_links(), 1);
        assert_eq!(ps.conclusions().len(), 2);
    }

    #[test]
    fn round_trip_is_stable() {
        let ps = parse_structure(AXIOM, ReadOptions::default()).unwrap();
        let text = to_json(&ps);
        let again = parse_structure(&text, ReadOptions::default()).unwrap();
        assert_eq!(to_json(&again), text);
    }

    #[test]
    fn rejects_unknown_fields() {
        let doc = r#"{"occurrences": [], "links": [], "extra": 1}"#;
        assert!(matches!(
            parse_structure(doc, ReadOptions::default()),
            Err(FormatError::Syntax(_))
        ));
        let doc = r#"{"occurrences": [{"id": 0, "formula": "p", "name": "x"}], "links": []}"#;
        assert!(parse_structure(doc, ReadOptions::default()).is_err());
        let doc = r#"{"occurrences": [], "links": [{"kind": "id", "neg": 0, "pos": 1, "w": 2}]}"#;
        assert!(matches!(
            parse_structure(doc, ReadOptions::default()),
            Err(FormatError::Syntax(_))
        ));
        let doc = r#"{"occurrences": [], "links": [{"kind": "cut", "left": 0, "right": 1}]}"#;
        assert!(matches!(
            parse_structure(doc, ReadOptions::default()),
            Err(FormatError::Syntax(_))
        ));
    }

    #[test]
    fn rejects_negative_ids_with_line() {
        let doc = "{\n\"occurrences\": [\n{\"id\": -1, \"formula\": \"p\"}], \"links\": []}";
        let err = parse_structure(doc, ReadOptions::default()).unwrap_err();
        assert_eq!(err.line(), Some(3));
    }

    #[test]
    fn formula_errors_carry_line() {
        let doc = "{\"occurrences\": [\n\n{\"id\": 0, \"formula\": \"(p * q)\"}], \"links\": []}";
        let err = parse_structure(doc, ReadOptions::default()).unwrap_err();
        assert_eq!(err.line(), Some(3));
        assert!(err.to_string().contains("bad formula"));
    }

    #[test]
    fn named_atoms_are_erased_on_request() {
        let doc = r#"{
            "occurrences": [{"id": 0, "formula": "~a"}, {"id": 1, "formula": "a"}],
            "links": [{"kind": "id", "neg": 0, "pos": 1}]
        }"#;
        assert!(parse_structure(doc, ReadOptions::default()).is_err());
        let ps = parse_structure(
            doc,
            ReadOptions {
                erase_atom_names: true,
            },
        )
        .unwrap();
        assert_eq!(ps.occurrences()[1].formula, Formula::Pos);
    }

    #[test]
    fn validation_errors_surface() {
        let doc = r#"{
            "occurrences": [{"id": 0, "formula": "p"}, {"id": 1, "formula": "~p"}],
            "links": [{"kind": "id", "neg": 0, "pos": 1}]
        }"#;
        assert!(matches!(
            parse_structure(doc, ReadOptions::default()),
            Err(FormatError::Invalid(
                ValidationError::FormulaMismatch { .. }
            ))
        ));
    }
}
