//! Typed entities of a case-release graph and the graph container itself.
//!
//! A [`PlodGraph`] is immutable once built. Construction goes through
//! [`GraphBuilder`], which records duplicate identifiers instead of
//! rejecting them; [`validate_graph`] reports them along with every other
//! integrity finding.

mod pid;
mod triple;
mod validate;

pub use pid::{
    make_move_id, make_patient_id, make_report_id, Pid, PidError, PidKind, PlodUri, DATA_BASE,
    ENTITY_BASE,
};
pub use triple::{Literal, Term, Triple};
pub use validate::{validate_graph, IssueCode, Severity, ValidationIssue};

pub(crate) use triple::escape_into;

use chrono::NaiveDate;
use std::collections::BTreeMap;

/// A string with an optional language tag, e.g. `"Bus"@ja`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedText {
    pub text: String,
    pub lang: Option<String>,
}

impl TaggedText {
    #[must_use]
    pub fn plain(text: impl Into<String>) -> TaggedText {
        TaggedText { text: text.into(), lang: None }
    }

    #[must_use]
    pub fn tagged(text: impl Into<String>, lang: impl Into<String>) -> TaggedText {
        TaggedText { text: text.into(), lang: Some(lang.into()) }
    }
}

/// A move endpoint. `Empty` is a stated-but-withheld location (serialized
/// as the empty string, the shape real releases use); `Absent` means the
/// statement is missing entirely.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum LocationRef {
    Place(String),
    Empty,
    #[default]
    Absent,
}

impl LocationRef {
    #[must_use]
    pub fn place(&self) -> Option<&str> {
        match self {
            LocationRef::Place(iri) => Some(iri),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub id: Pid,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub id: Pid,
    pub label: Option<String>,
    /// The event this report documents.
    pub main_entity: Pid,
    /// Announced patient count; may exceed the patients detailed.
    pub number_of_patients: u32,
    pub date_published: NaiveDate,
    /// Place IRI of the publishing authority.
    pub publisher: String,
    pub url: String,
    pub is_referenced_by: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patient {
    pub id: Pid,
    pub label: Option<String>,
    pub subject_of: Pid,
    /// Disease IRI.
    pub health_condition: String,
    pub date_confirmed: Option<NaiveDate>,
    pub age: Option<String>,
    pub gender: Option<String>,
    pub home_location: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveAction {
    pub id: Pid,
    pub label: Option<String>,
    pub agent: Pid,
    pub start_time: Option<NaiveDate>,
    pub end_time: Option<NaiveDate>,
    pub from_location: LocationRef,
    pub to_location: LocationRef,
    pub instrument: Option<TaggedText>,
    /// Source sentence kept for provenance; never serialized.
    pub raw_text: Option<String>,
}

impl MoveAction {
    /// Day-granular interval, present when at least one bound is stated.
    #[must_use]
    pub fn interval(&self) -> Option<(NaiveDate, NaiveDate)> {
        match (self.start_time, self.end_time) {
            (Some(s), Some(e)) => Some((s, e)),
            (Some(s), None) => Some((s, s)),
            (None, Some(e)) => Some((e, e)),
            (None, None) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Place {
    pub iri: String,
    pub label: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfectiousDisease {
    pub iri: String,
    pub label: Option<String>,
    pub name: Option<TaggedText>,
    pub infectious_agent: Option<String>,
    /// Medical code IRI.
    pub code: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MedicalCode {
    pub iri: String,
    pub code_value: String,
    pub coding_system: String,
}

/// An immutable, referentially self-contained release graph.
///
/// Collections are keyed by identifier text (entities) or IRI (places,
/// diseases, codes), so iteration order is deterministic. Triples that do
/// not belong to a typed entity survive in `extras`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PlodGraph {
    events: BTreeMap<String, Event>,
    reports: BTreeMap<String, Report>,
    patients: BTreeMap<String, Patient>,
    moves: BTreeMap<String, MoveAction>,
    places: BTreeMap<String, Place>,
    diseases: BTreeMap<String, InfectiousDisease>,
    codes: BTreeMap<String, MedicalCode>,
    extras: Vec<Triple>,
    duplicates: Vec<String>,
}

impl PlodGraph {
    #[must_use]
    pub fn builder() -> GraphBuilder {
        GraphBuilder::default()
    }

    #[must_use]
    pub fn events(&self) -> &BTreeMap<String, Event> {
        &self.events
    }

    #[must_use]
    pub fn reports(&self) -> &BTreeMap<String, Report> {
        &self.reports
    }

    #[must_use]
    pub fn patients(&self) -> &BTreeMap<String, Patient> {
        &self.patients
    }

    #[must_use]
    pub fn moves(&self) -> &BTreeMap<String, MoveAction> {
        &self.moves
    }

    #[must_use]
    pub fn places(&self) -> &BTreeMap<String, Place> {
        &self.places
    }

    #[must_use]
    pub fn diseases(&self) -> &BTreeMap<String, InfectiousDisease> {
        &self.diseases
    }

    #[must_use]
    pub fn codes(&self) -> &BTreeMap<String, MedicalCode> {
        &self.codes
    }

    /// Triples preserved verbatim from input that the typed model does not
    /// cover: unknown predicates on typed subjects and whole untyped
    /// subjects.
    #[must_use]
    pub fn extras(&self) -> &[Triple] {
        &self.extras
    }

    /// Identifier collisions observed while the graph was built.
    #[must_use]
    pub fn duplicate_ids(&self) -> &[String] {
        &self.duplicates
    }

    #[must_use]
    pub fn entity_count(&self) -> usize {
        self.events.len()
            + self.reports.len()
            + self.patients.len()
            + self.moves.len()
            + self.places.len()
            + self.diseases.len()
            + self.codes.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.entity_count() == 0 && self.extras.is_empty()
    }

    /// Union of several graphs. Fails on the first identifier claimed by
    /// more than one input.
    pub fn merge(graphs: impl IntoIterator<Item = PlodGraph>) -> Result<PlodGraph, MergeError> {
        let mut b = GraphBuilder::default();
        for g in graphs {
            for e in g.events.into_values() {
                b.event(e);
            }
            for r in g.reports.into_values() {
                b.report(r);
            }
            for p in g.patients.into_values() {
                b.patient(p);
            }
            for m in g.moves.into_values() {
                b.move_action(m);
            }
            for p in g.places.into_values() {
                b.place_merge(p);
            }
            for d in g.diseases.into_values() {
                b.disease_merge(d);
            }
            for c in g.codes.into_values() {
                b.code_merge(c);
            }
            for t in g.extras {
                b.extra(t);
            }
        }
        let merged = b.build();
        match merged.duplicates.first() {
            Some(id) => Err(MergeError::DuplicateId(id.clone())),
            None => Ok(merged),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MergeError {
    #[error("identifier {0:?} appears in more than one graph")]
    DuplicateId(String),
}

/// Accumulates entities and records key collisions for validation.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    graph: PlodGraph,
}

impl GraphBuilder {
    fn note_duplicate(&mut self, key: &str) {
        self.graph.duplicates.push(key.to_owned());
    }

    pub fn event(&mut self, e: Event) -> &mut Self {
        let key = e.id.text();
        if self.graph.events.insert(key.clone(), e).is_some() {
            self.note_duplicate(&key);
        }
        self
    }

    pub fn report(&mut self, r: Report) -> &mut Self {
        let key = r.id.text();
        if self.graph.reports.insert(key.clone(), r).is_some() {
            self.note_duplicate(&key);
        }
        self
    }

    pub fn patient(&mut self, p: Patient) -> &mut Self {
        let key = p.id.text();
        if self.graph.patients.insert(key.clone(), p).is_some() {
            self.note_duplicate(&key);
        }
        self
    }

    pub fn move_action(&mut self, m: MoveAction) -> &mut Self {
        let key = m.id.text();
        if self.graph.moves.insert(key.clone(), m).is_some() {
            self.note_duplicate(&key);
        }
        self
    }

    pub fn place(&mut self, p: Place) -> &mut Self {
        let key = p.iri.clone();
        if self.graph.places.insert(key.clone(), p).is_some() {
            self.note_duplicate(&key);
        }
        self
    }

    /// Like [`GraphBuilder::place`], but identical re-insertions are fine.
    /// Shared reference data (places, diseases, codes) legitimately recurs
    /// across merged release graphs.
    pub fn place_merge(&mut self, p: Place) -> &mut Self {
        match self.graph.places.get(&p.iri) {
            Some(existing) if *existing == p => self,
            Some(_) => {
                let key = p.iri.clone();
                self.note_duplicate(&key);
                self
            }
            None => self.place(p),
        }
    }

    pub fn disease(&mut self, d: InfectiousDisease) -> &mut Self {
        let key = d.iri.clone();
        if self.graph.diseases.insert(key.clone(), d).is_some() {
            self.note_duplicate(&key);
        }
        self
    }

    pub fn disease_merge(&mut self, d: InfectiousDisease) -> &mut Self {
        match self.graph.diseases.get(&d.iri) {
            Some(existing) if *existing == d => self,
            Some(_) => {
                let key = d.iri.clone();
                self.note_duplicate(&key);
                self
            }
            None => self.disease(d),
        }
    }

    pub fn code(&mut self, c: MedicalCode) -> &mut Self {
        let key = c.iri.clone();
        if self.graph.codes.insert(key.clone(), c).is_some() {
            self.note_duplicate(&key);
        }
        self
    }

    pub fn code_merge(&mut self, c: MedicalCode) -> &mut Self {
        match self.graph.codes.get(&c.iri) {
            Some(existing) if *existing == c => self,
            Some(_) => {
                let key = c.iri.clone();
                self.note_duplicate(&key);
                self
            }
            None => self.code(c),
        }
    }

    pub fn extra(&mut self, t: Triple) -> &mut Self {
        if !self.graph.extras.contains(&t) {
            self.graph.extras.push(t);
        }
        self
    }

    #[must_use]
    pub fn build(mut self) -> PlodGraph {
        self.graph.extras.sort();
        self.graph
    }
}
