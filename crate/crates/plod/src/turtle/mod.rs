//! Turtle subset: deterministic serialization, parsing, and the triple
//! projection shared by both.
//!
//! The subset covers prefixed names, IRIs, plain/typed/language-tagged
//! literals, the `a` keyword, and `;`/`,` continuations. Blank nodes,
//! collections, multiline strings, and `@base` are out of scope. Datatype
//! IRIs are kept verbatim; dates and counts reserialize with their
//! original lexical form.

mod parse;
mod write;

pub use parse::{parse, Parsed, ParseError};
pub use write::{serialize, SerializeError};

use std::collections::BTreeSet;

use crate::model::{Literal, LocationRef, PlodGraph, Term, Triple};

pub const NS_RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const NS_RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const NS_SCHEMA: &str = "https://schema.org/";
pub const NS_DCTERMS: &str = "http://purl.org/dc/terms/";
pub const NS_FOAF: &str = "http://xmlns.com/foaf/0.1/";
pub const NS_GNJP: &str = "http://geonames.jp/resource/";
pub const NS_PLOD: &str = "https://plod.info/property/";

pub(crate) const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub(crate) const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";

pub(crate) const TYPE_EVENT: &str = "https://schema.org/Event";
pub(crate) const TYPE_REPORT: &str = "https://schema.org/Report";
pub(crate) const TYPE_PATIENT: &str = "https://schema.org/Patient";
pub(crate) const TYPE_MOVE: &str = "https://schema.org/MoveAction";
pub(crate) const TYPE_PLACE: &str = "https://schema.org/Place";
pub(crate) const TYPE_DISEASE: &str = "https://schema.org/InfectiousDisease";
pub(crate) const TYPE_CODE: &str = "https://schema.org/MedicalCode";

pub(crate) const DT_DATETIME: &str = "https://schema.org/DateTime";
pub(crate) const DT_INTEGER: &str = "https://schema.org/Integer";

/// Namespace bindings emitted on every document, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixTable {
    entries: Vec<(&'static str, &'static str)>,
}

impl PrefixTable {
    /// The fixed seven bindings every serialized document declares.
    #[must_use]
    pub fn standard() -> PrefixTable {
        PrefixTable {
            entries: vec![
                ("rdf", NS_RDF),
                ("rdfs", NS_RDFS),
                ("schema", NS_SCHEMA),
                ("dcterms", NS_DCTERMS),
                ("foaf", NS_FOAF),
                ("gnjp", NS_GNJP),
                ("plod", NS_PLOD),
            ],
        }
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&'static str, &'static str)> + '_ {
        self.entries.iter().copied()
    }

    #[must_use]
    pub fn expand(&self, prefix: &str) -> Option<&'static str> {
        self.entries
            .iter()
            .find(|(p, _)| *p == prefix)
            .map(|(_, ns)| *ns)
    }

    /// Prefixed form of `iri` when a binding covers it and the local part
    /// is a safe name; full IRIs otherwise stay as they are.
    #[must_use]
    pub fn compress(&self, iri: &str) -> Option<String> {
        for (prefix, ns) in &self.entries {
            if let Some(local) = iri.strip_prefix(ns) {
                if !local.is_empty()
                    && local
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
                {
                    return Some(format!("{prefix}:{local}"));
                }
            }
        }
        None
    }
}

fn date_term(d: chrono::NaiveDate) -> Term {
    Term::Literal(Literal::typed(d.format("%Y-%m-%d").to_string(), DT_DATETIME))
}

fn location_term(loc: &LocationRef) -> Option<Term> {
    match loc {
        LocationRef::Place(iri) => Some(Term::iri(iri.clone())),
        LocationRef::Empty => Some(Term::Literal(Literal::plain(""))),
        LocationRef::Absent => None,
    }
}

fn tagged_term(t: &crate::model::TaggedText) -> Term {
    Term::Literal(match &t.lang {
        Some(lang) => Literal::tagged(t.text.clone(), lang.clone()),
        None => Literal::plain(t.text.clone()),
    })
}

fn label_pair(pairs: &mut Vec<(String, Term)>, label: &Option<String>) {
    if let Some(l) = label {
        pairs.push((RDFS_LABEL.into(), Term::Literal(Literal::plain(l.clone()))));
    }
}

/// Every subject of the graph with its predicate/object pairs in emission
/// order: typed entities grouped events → reports → patients → moves →
/// places → diseases → codes (keys ascending, predicates in fixed order,
/// unclaimed input triples after them), then subjects that exist only in
/// `extras`.
pub(crate) fn entity_blocks(g: &PlodGraph) -> Vec<(String, Vec<(String, Term)>)> {
    let mut blocks: Vec<(String, Vec<(String, Term)>)> = Vec::new();
    let pred = |s: &str| -> String { format!("{NS_SCHEMA}{s}") };

    for e in g.events().values() {
        let mut pairs = vec![(RDF_TYPE.to_string(), Term::iri(TYPE_EVENT))];
        label_pair(&mut pairs, &e.label);
        blocks.push((e.id.to_uri().as_str().to_owned(), pairs));
    }
    for r in g.reports().values() {
        let mut pairs = vec![(RDF_TYPE.to_string(), Term::iri(TYPE_REPORT))];
        label_pair(&mut pairs, &r.label);
        pairs.push((pred("mainEntity"), Term::iri(r.main_entity.to_uri().as_str())));
        pairs.push((
            format!("{NS_PLOD}numberOfPatients"),
            Term::Literal(Literal::typed(r.number_of_patients.to_string(), DT_INTEGER)),
        ));
        pairs.push((pred("datePublished"), date_term(r.date_published)));
        pairs.push((pred("publisher"), Term::iri(r.publisher.clone())));
        pairs.push((pred("url"), Term::iri(r.url.clone())));
        if let Some(iri) = &r.is_referenced_by {
            pairs.push((format!("{NS_DCTERMS}isReferencedBy"), Term::iri(iri.clone())));
        }
        blocks.push((r.id.to_uri().as_str().to_owned(), pairs));
    }
    for p in g.patients().values() {
        let mut pairs = vec![(RDF_TYPE.to_string(), Term::iri(TYPE_PATIENT))];
        label_pair(&mut pairs, &p.label);
        pairs.push((pred("subjectOf"), Term::iri(p.subject_of.to_uri().as_str())));
        pairs.push((pred("healthCondition"), Term::iri(p.health_condition.clone())));
        if let Some(d) = p.date_confirmed {
            pairs.push((format!("{NS_PLOD}dateConfirmed"), date_term(d)));
        }
        if let Some(age) = &p.age {
            pairs.push((format!("{NS_FOAF}age"), Term::Literal(Literal::plain(age.clone()))));
        }
        if let Some(gender) = &p.gender {
            pairs.push((pred("gender"), Term::Literal(Literal::plain(gender.clone()))));
        }
        if let Some(home) = &p.home_location {
            pairs.push((pred("homeLocation"), Term::iri(home.clone())));
        }
        blocks.push((p.id.to_uri().as_str().to_owned(), pairs));
    }
    for m in g.moves().values() {
        let mut pairs = vec![(RDF_TYPE.to_string(), Term::iri(TYPE_MOVE))];
        label_pair(&mut pairs, &m.label);
        pairs.push((pred("agent"), Term::iri(m.agent.to_uri().as_str())));
        if let Some(d) = m.start_time {
            pairs.push((pred("startTime"), date_term(d)));
        }
        if let Some(d) = m.end_time {
            pairs.push((pred("endTime"), date_term(d)));
        }
        if let Some(t) = location_term(&m.from_location) {
            pairs.push((pred("fromLocation"), t));
        }
        if let Some(t) = location_term(&m.to_location) {
            pairs.push((pred("toLocation"), t));
        }
        if let Some(inst) = &m.instrument {
            pairs.push((pred("instrument"), tagged_term(inst)));
        }
        blocks.push((m.id.to_uri().as_str().to_owned(), pairs));
    }
    for p in g.places().values() {
        let mut pairs = vec![(RDF_TYPE.to_string(), Term::iri(TYPE_PLACE))];
        label_pair(&mut pairs, &p.label);
        blocks.push((p.iri.clone(), pairs));
    }
    for d in g.diseases().values() {
        let mut pairs = vec![(RDF_TYPE.to_string(), Term::iri(TYPE_DISEASE))];
        label_pair(&mut pairs, &d.label);
        if let Some(name) = &d.name {
            pairs.push((pred("name"), tagged_term(name)));
        }
        if let Some(agent) = &d.infectious_agent {
            pairs.push((
                pred("infectiousAgent"),
                Term::Literal(Literal::plain(agent.clone())),
            ));
        }
        if let Some(code) = &d.code {
            pairs.push((pred("code"), Term::iri(code.clone())));
        }
        blocks.push((d.iri.clone(), pairs));
    }
    for c in g.codes().values() {
        let pairs = vec![
            (RDF_TYPE.to_string(), Term::iri(TYPE_CODE)),
            (pred("codeValue"), Term::Literal(Literal::plain(c.code_value.clone()))),
            (pred("codingSystem"), Term::Literal(Literal::plain(c.coding_system.clone()))),
        ];
        blocks.push((c.iri.clone(), pairs));
    }

    // Merge extras: append to the owning block, or open new trailing
    // blocks for subjects the typed model does not know.
    let mut extra_only: Vec<(String, Vec<(String, Term)>)> = Vec::new();
    for t in g.extras() {
        let pair = (t.predicate.clone(), t.object.clone());
        if let Some((_, pairs)) = blocks.iter_mut().find(|(s, _)| *s == t.subject) {
            pairs.push(pair);
        } else if let Some((_, pairs)) = extra_only.iter_mut().find(|(s, _)| *s == t.subject) {
            pairs.push(pair);
        } else {
            extra_only.push((t.subject.clone(), vec![pair]));
        }
    }
    extra_only.sort_by(|a, b| a.0.cmp(&b.0));
    blocks.extend(extra_only);
    blocks
}

/// The complete, order-independent triple projection of a graph.
#[must_use]
pub fn triple_set(g: &PlodGraph) -> BTreeSet<Triple> {
    entity_blocks(g)
        .into_iter()
        .flat_map(|(subject, pairs)| {
            pairs
                .into_iter()
                .map(move |(p, o)| Triple::new(subject.clone(), p, o))
        })
        .collect()
}
