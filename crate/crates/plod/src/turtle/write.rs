//! Deterministic Turtle writer.

use thiserror::Error;

use crate::model::{escape_into, Literal, PlodGraph, Term, ValidationIssue};

use super::{entity_blocks, PrefixTable, RDF_TYPE};

#[derive(Debug, Error)]
pub enum SerializeError {
    #[error("graph has {count} validation error(s); first: {first}")]
    InvalidGraph { count: usize, first: ValidationIssue },
}

/// Serializes a graph to the canonical document layout.
///
/// Fails when validation reports any error-severity issue; warnings are
/// fine. The output is a pure function of graph content: same triples in,
/// same bytes out.
pub fn serialize(g: &PlodGraph) -> Result<String, SerializeError> {
    let errors: Vec<ValidationIssue> = crate::model::validate_graph(g)
        .into_iter()
        .filter(ValidationIssue::is_error)
        .collect();
    if let Some(first) = errors.first() {
        return Err(SerializeError::InvalidGraph {
            count: errors.len(),
            first: first.clone(),
        });
    }

    let prefixes = PrefixTable::standard();
    let mut out = String::new();
    for (prefix, ns) in prefixes.bindings() {
        out.push_str("@prefix ");
        out.push_str(prefix);
        out.push_str(": <");
        out.push_str(ns);
        out.push_str("> .\n");
    }

    for (subject, pairs) in entity_blocks(g) {
        out.push('\n');
        out.push('<');
        out.push_str(&subject);
        out.push('>');
        let last = pairs.len() - 1;
        for (i, (predicate, object)) in pairs.iter().enumerate() {
            if i == 0 {
                out.push(' ');
            } else {
                out.push_str("    ");
            }
            write_predicate(&mut out, predicate, &prefixes);
            out.push(' ');
            write_term(&mut out, object, &prefixes);
            out.push_str(if i == last { " .\n" } else { " ;\n" });
        }
    }
    Ok(out)
}

fn write_predicate(out: &mut String, predicate: &str, prefixes: &PrefixTable) {
    if predicate == RDF_TYPE {
        out.push('a');
    } else if let Some(compressed) = prefixes.compress(predicate) {
        out.push_str(&compressed);
    } else {
        out.push('<');
        out.push_str(predicate);
        out.push('>');
    }
}

fn write_term(out: &mut String, term: &Term, prefixes: &PrefixTable) {
    match term {
        Term::Iri(iri) => {
            if let Some(compressed) = prefixes.compress(iri) {
                out.push_str(&compressed);
            } else {
                out.push('<');
                out.push_str(iri);
                out.push('>');
            }
        }
        Term::Literal(Literal { lexical, lang, datatype }) => {
            out.push('"');
            escape_into(out, lexical);
            out.push('"');
            if let Some(lang) = lang {
                out.push('@');
                out.push_str(lang);
            } else if let Some(dt) = datatype {
                out.push_str("^^");
                if let Some(compressed) = prefixes.compress(dt) {
                    out.push_str(&compressed);
                } else {
                    out.push('<');
                    out.push_str(dt);
                    out.push('>');
                }
            }
        }
    }
}
