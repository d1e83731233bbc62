//! Turtle reader: lexer, statement parser, and entity assembly.

use std::collections::{BTreeMap, HashMap};

use chrono::NaiveDate;
use thiserror::Error;

use crate::model::{
    validate_graph, Event, InfectiousDisease, Literal, LocationRef, MedicalCode, MoveAction,
    Patient, Pid, PidKind, Place, PlodGraph, Report, TaggedText, Term, Triple, ValidationIssue,
    DATA_BASE,
};

use super::{
    DT_DATETIME, DT_INTEGER, RDFS_LABEL, RDF_TYPE, TYPE_CODE, TYPE_DISEASE, TYPE_EVENT, TYPE_MOVE,
    TYPE_PATIENT, TYPE_PLACE, TYPE_REPORT,
};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid entity <{subject}>: {message}")]
    Entity { subject: String, message: String },
}

/// Result of a successful parse. Issues are the validator's findings on
/// the assembled graph; notes flag oddities that are legal but likely
/// unintended.
#[derive(Debug)]
pub struct Parsed {
    pub graph: PlodGraph,
    pub issues: Vec<ValidationIssue>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
enum TokKind {
    Iri(String),
    Pname { prefix: String, local: String },
    Str(String),
    LangTag(String),
    Caret2,
    Dot,
    Semi,
    Comma,
    KwA,
    KwPrefix,
    Eof,
}

#[derive(Clone, Debug)]
struct Tok {
    kind: TokKind,
    line: usize,
    col: usize,
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Lexer {
    fn new(input: &str) -> Lexer {
        Lexer {
            chars: input.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, line: usize, col: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line,
            column: col,
            message: message.into(),
        }
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(' ' | '\t' | '\r' | '\n') => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn tokens(mut self) -> Result<Vec<Tok>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia();
            let (line, col) = (self.line, self.col);
            let kind = match self.peek() {
                None => {
                    out.push(Tok {
                        kind: TokKind::Eof,
                        line,
                        col,
                    });
                    return Ok(out);
                }
                Some('<') => self.lex_iri(line, col)?,
                Some('"') => self.lex_string(line, col)?,
                Some('@') => self.lex_at_word(line, col)?,
                Some('^') => {
                    self.bump();
                    if self.peek() == Some('^') {
                        self.bump();
                        TokKind::Caret2
                    } else {
                        return Err(self.err(line, col, "expected \"^^\""));
                    }
                }
                Some('.') => {
                    self.bump();
                    TokKind::Dot
                }
                Some(';') => {
                    self.bump();
                    TokKind::Semi
                }
                Some(',') => {
                    self.bump();
                    TokKind::Comma
                }
                Some(c) if c.is_ascii_alphanumeric() || c == '_' => self.lex_word(line, col)?,
                Some(c) => return Err(self.err(line, col, format!("unexpected character {c:?}"))),
            };
            out.push(Tok { kind, line, col });
        }
    }

    fn lex_iri(&mut self, line: usize, col: usize) -> Result<TokKind, ParseError> {
        self.bump();
        let mut iri = String::new();
        loop {
            match self.peek() {
                None | Some('\n') => return Err(self.err(line, col, "unterminated IRI")),
                Some('>') => {
                    self.bump();
                    return Ok(TokKind::Iri(iri));
                }
                Some(c) => {
                    self.bump();
                    iri.push(c);
                }
            }
        }
    }

    fn lex_string(&mut self, line: usize, col: usize) -> Result<TokKind, ParseError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.peek() {
                None | Some('\n') => return Err(self.err(line, col, "unterminated string literal")),
                Some('"') => {
                    self.bump();
                    return Ok(TokKind::Str(s));
                }
                Some('\\') => {
                    self.bump();
                    let (eline, ecol) = (self.line, self.col);
                    match self.bump() {
                        Some('n') => s.push('\n'),
                        Some('r') => s.push('\r'),
                        Some('t') => s.push('\t'),
                        Some('"') => s.push('"'),
                        Some('\\') => s.push('\\'),
                        Some(c) => {
                            return Err(self.err(
                                eline,
                                ecol,
                                format!("unknown escape sequence \\{c}"),
                            ))
                        }
                        None => return Err(self.err(line, col, "unterminated string literal")),
                    }
                }
                Some(c) => {
                    self.bump();
                    s.push(c);
                }
            }
        }
    }

    fn lex_at_word(&mut self, line: usize, col: usize) -> Result<TokKind, ParseError> {
        self.bump();
        let mut w = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '-' {
                self.bump();
                w.push(c);
            } else {
                break;
            }
        }
        if w == "prefix" {
            return Ok(TokKind::KwPrefix);
        }
        let valid = !w.is_empty()
            && w.split('-').enumerate().all(|(i, part)| {
                !part.is_empty()
                    && part.chars().all(|c| {
                        if i == 0 {
                            c.is_ascii_alphabetic()
                        } else {
                            c.is_ascii_alphanumeric()
                        }
                    })
            });
        if valid {
            Ok(TokKind::LangTag(w))
        } else {
            Err(self.err(line, col, format!("malformed language tag @{w}")))
        }
    }

    fn lex_word(&mut self, line: usize, col: usize) -> Result<TokKind, ParseError> {
        let mut w = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.' | ':') {
                self.bump();
                w.push(c);
            } else {
                break;
            }
        }
        // A trailing dot is the statement terminator, not part of the name.
        let mut trailing = 0;
        while w.ends_with('.') {
            w.pop();
            trailing += 1;
        }
        self.pos -= trailing;
        self.col -= trailing;

        if w == "a" {
            return Ok(TokKind::KwA);
        }
        let Some((prefix, local)) = w.split_once(':') else {
            return Err(self.err(line, col, format!("unexpected token {w:?}")));
        };
        let prefix_ok = !prefix.is_empty()
            && prefix.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && prefix.chars().all(|c| c.is_ascii_alphanumeric());
        let local_ok = !local.starts_with('.')
            && local
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
        if !prefix_ok || !local_ok || local.contains(':') {
            return Err(self.err(line, col, format!("malformed prefixed name {w:?}")));
        }
        Ok(TokKind::Pname {
            prefix: prefix.to_string(),
            local: local.to_string(),
        })
    }
}

struct Parser {
    toks: Vec<Tok>,
    i: usize,
    prefixes: HashMap<String, String>,
    triples: Vec<Triple>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i]
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].clone();
        if self.toks[self.i].kind != TokKind::Eof {
            self.i += 1;
        }
        t
    }

    fn err_at(&self, tok: &Tok, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: tok.line,
            column: tok.col,
            message: message.into(),
        }
    }

    fn expand(&self, tok: &Tok, prefix: &str, local: &str) -> Result<String, ParseError> {
        match self.prefixes.get(prefix) {
            Some(ns) => Ok(format!("{ns}{local}")),
            None => Err(self.err_at(tok, format!("undefined prefix \"{prefix}:\""))),
        }
    }

    fn document(&mut self) -> Result<(), ParseError> {
        loop {
            match &self.peek().kind {
                TokKind::Eof => return Ok(()),
                TokKind::KwPrefix => self.prefix_directive()?,
                _ => self.triple_block()?,
            }
        }
    }

    fn prefix_directive(&mut self) -> Result<(), ParseError> {
        self.bump();
        let tok = self.bump();
        let name = match &tok.kind {
            TokKind::Pname { prefix, local } if local.is_empty() => prefix.clone(),
            _ => return Err(self.err_at(&tok, "expected a prefix name")),
        };
        let tok = self.bump();
        let ns = match &tok.kind {
            TokKind::Iri(iri) => iri.clone(),
            _ => return Err(self.err_at(&tok, "expected a namespace IRI")),
        };
        let tok = self.bump();
        if tok.kind != TokKind::Dot {
            return Err(self.err_at(&tok, "expected \".\" after @prefix directive"));
        }
        self.prefixes.insert(name, ns);
        Ok(())
    }

    fn triple_block(&mut self) -> Result<(), ParseError> {
        let tok = self.bump();
        let subject = match &tok.kind {
            TokKind::Iri(iri) => iri.clone(),
            TokKind::Pname { prefix, local } => self.expand(&tok, prefix, local)?,
            _ => return Err(self.err_at(&tok, "expected a subject")),
        };
        loop {
            let tok = self.bump();
            let predicate = match &tok.kind {
                TokKind::KwA => RDF_TYPE.to_string(),
                TokKind::Iri(iri) => iri.clone(),
                TokKind::Pname { prefix, local } => self.expand(&tok, prefix, local)?,
                _ => return Err(self.err_at(&tok, "expected a predicate")),
            };
            loop {
                let object = self.object()?;
                self.triples
                    .push(Triple::new(subject.clone(), predicate.clone(), object));
                if self.peek().kind == TokKind::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
            match self.peek().kind {
                TokKind::Semi => {
                    self.bump();
                    if self.peek().kind == TokKind::Dot {
                        self.bump();
                        return Ok(());
                    }
                }
                TokKind::Dot => {
                    self.bump();
                    return Ok(());
                }
                _ => {
                    let tok = self.peek().clone();
                    return Err(self.err_at(&tok, "expected \";\" or \".\""));
                }
            }
        }
    }

    fn object(&mut self) -> Result<Term, ParseError> {
        let tok = self.bump();
        match &tok.kind {
            TokKind::Iri(iri) => Ok(Term::iri(iri.clone())),
            TokKind::Pname { prefix, local } => {
                Ok(Term::iri(self.expand(&tok, prefix, local)?))
            }
            TokKind::Str(s) => match self.peek().kind.clone() {
                TokKind::LangTag(lang) => {
                    self.bump();
                    Ok(Term::Literal(Literal::tagged(s.clone(), lang)))
                }
                TokKind::Caret2 => {
                    self.bump();
                    let dtok = self.bump();
                    let dt = match &dtok.kind {
                        TokKind::Iri(iri) => iri.clone(),
                        TokKind::Pname { prefix, local } => self.expand(&dtok, prefix, local)?,
                        _ => return Err(self.err_at(&dtok, "expected a datatype IRI")),
                    };
                    Ok(Term::Literal(Literal::typed(s.clone(), dt)))
                }
                _ => Ok(Term::Literal(Literal::plain(s.clone()))),
            },
            _ => Err(self.err_at(&tok, "expected an object")),
        }
    }
}

/// Property list for one subject during assembly; pairs are removed as
/// known predicates claim them, and whatever remains becomes extras.
struct Props {
    subject: String,
    pairs: Vec<(String, Term)>,
}

impl Props {
    fn entity_err(&self, message: impl Into<String>) -> ParseError {
        ParseError::Entity {
            subject: self.subject.clone(),
            message: message.into(),
        }
    }

    fn take_all(&mut self, pred: &str) -> Vec<Term> {
        let mut taken = Vec::new();
        self.pairs.retain(|(p, o)| {
            if p == pred {
                taken.push(o.clone());
                false
            } else {
                true
            }
        });
        taken
    }

    fn take_at_most_one(&mut self, pred: &str) -> Result<Option<Term>, ParseError> {
        let mut vals = self.take_all(pred);
        vals.dedup();
        match vals.len() {
            0 => Ok(None),
            1 => Ok(Some(vals.pop().expect("len checked"))),
            n => Err(self.entity_err(format!("{n} distinct values for <{pred}>"))),
        }
    }

    fn take_one(&mut self, pred: &str) -> Result<Term, ParseError> {
        self.take_at_most_one(pred)?
            .ok_or_else(|| self.entity_err(format!("missing required <{pred}>")))
    }

    fn iri(&self, pred: &str, t: Term) -> Result<String, ParseError> {
        match t {
            Term::Iri(iri) => Ok(iri),
            Term::Literal(_) => Err(self.entity_err(format!("<{pred}> must be an IRI"))),
        }
    }

    fn plain(&self, pred: &str, t: Term) -> Result<String, ParseError> {
        match t {
            Term::Literal(Literal {
                lexical,
                lang: None,
                datatype: None,
            }) => Ok(lexical),
            _ => Err(self.entity_err(format!("<{pred}> must be a plain literal"))),
        }
    }

    fn tagged(&self, pred: &str, t: Term) -> Result<TaggedText, ParseError> {
        match t {
            Term::Literal(Literal {
                lexical,
                lang,
                datatype: None,
            }) => Ok(TaggedText { text: lexical, lang }),
            _ => Err(self.entity_err(format!("<{pred}> must be a string literal"))),
        }
    }

    fn date(&self, pred: &str, t: Term) -> Result<NaiveDate, ParseError> {
        let Term::Literal(Literal {
            lexical,
            lang: None,
            datatype: Some(dt),
        }) = &t
        else {
            return Err(self.entity_err(format!("<{pred}> must be a {DT_DATETIME} literal")));
        };
        if dt != DT_DATETIME {
            return Err(self.entity_err(format!("<{pred}> must be a {DT_DATETIME} literal")));
        }
        let parsed = NaiveDate::parse_from_str(lexical, "%Y-%m-%d")
            .map_err(|_| self.entity_err(format!("<{pred}>: {lexical:?} is not a calendar date")))?;
        if parsed.format("%Y-%m-%d").to_string() != *lexical {
            return Err(self.entity_err(format!("<{pred}>: non-canonical date {lexical:?}")));
        }
        Ok(parsed)
    }

    fn integer(&self, pred: &str, t: Term) -> Result<u32, ParseError> {
        let Term::Literal(Literal {
            lexical,
            lang: None,
            datatype: Some(dt),
        }) = &t
        else {
            return Err(self.entity_err(format!("<{pred}> must be an {DT_INTEGER} literal")));
        };
        if dt != DT_INTEGER {
            return Err(self.entity_err(format!("<{pred}> must be an {DT_INTEGER} literal")));
        }
        let n: u32 = lexical
            .parse()
            .map_err(|_| self.entity_err(format!("<{pred}>: {lexical:?} is not an integer")))?;
        if n.to_string() != *lexical {
            return Err(self.entity_err(format!("<{pred}>: non-canonical integer {lexical:?}")));
        }
        Ok(n)
    }

    fn location(&self, pred: &str, t: Term) -> Result<LocationRef, ParseError> {
        match t {
            Term::Iri(iri) => Ok(LocationRef::Place(iri)),
            Term::Literal(Literal {
                lexical,
                lang: None,
                datatype: None,
            }) if lexical.is_empty() => Ok(LocationRef::Empty),
            _ => Err(self.entity_err(format!(
                "<{pred}> must be a place IRI or the empty literal"
            ))),
        }
    }

    fn pid_ref(&self, pred: &str, t: Term) -> Result<Pid, ParseError> {
        let iri = self.iri(pred, t)?;
        Pid::from_uri(&iri)
            .map_err(|e| self.entity_err(format!("<{pred}> {iri} is not an identifier IRI: {e}")))
    }

    fn label(&mut self) -> Result<Option<String>, ParseError> {
        match self.take_at_most_one(RDFS_LABEL)? {
            Some(t) => Ok(Some(self.plain(RDFS_LABEL, t)?)),
            None => Ok(None),
        }
    }

    fn subject_pid(&self, kind: PidKind) -> Result<Pid, ParseError> {
        let pid = Pid::from_uri(&self.subject).map_err(|e| {
            self.entity_err(format!("subject is not a {DATA_BASE} identifier: {e}"))
        })?;
        if pid.kind() != kind {
            return Err(self.entity_err(format!(
                "identifier names a {:?} but the subject is typed as a {kind:?}",
                pid.kind()
            )));
        }
        Ok(pid)
    }

    fn into_extras(self, extras: &mut Vec<Triple>) {
        for (p, o) in self.pairs {
            extras.push(Triple::new(self.subject.clone(), p, o));
        }
    }
}

const KNOWN_TYPES: [&str; 7] = [
    TYPE_EVENT,
    TYPE_REPORT,
    TYPE_PATIENT,
    TYPE_MOVE,
    TYPE_PLACE,
    TYPE_DISEASE,
    TYPE_CODE,
];

/// Parses a Turtle document into a graph.
///
/// Syntax or malformed-entity problems are hard errors; everything the
/// validator has to say about the assembled graph comes back as issues on
/// the `Parsed`, never as a failure.
pub fn parse(input: &str) -> Result<Parsed, ParseError> {
    let toks = Lexer::new(input).tokens()?;
    let mut parser = Parser {
        toks,
        i: 0,
        prefixes: HashMap::new(),
        triples: Vec::new(),
    };
    parser.document()?;

    let mut groups: BTreeMap<String, Vec<(String, Term)>> = BTreeMap::new();
    let triple_count = parser.triples.len();
    for t in parser.triples {
        let pairs = groups.entry(t.subject).or_default();
        let pair = (t.predicate, t.object);
        if !pairs.contains(&pair) {
            pairs.push(pair);
        }
    }

    let mut builder = PlodGraph::builder();
    let mut extras: Vec<Triple> = Vec::new();
    for (subject, pairs) in groups {
        let types: Vec<&str> = KNOWN_TYPES
            .into_iter()
            .filter(|ty| {
                pairs
                    .iter()
                    .any(|(p, o)| p == RDF_TYPE && o.as_iri() == Some(ty))
            })
            .collect();
        let mut props = Props { subject, pairs };
        match types.as_slice() {
            [] => props.into_extras(&mut extras),
            [ty] => {
                let ty = *ty;
                props
                    .pairs
                    .retain(|(p, o)| !(p == RDF_TYPE && o.as_iri() == Some(ty)));
                assemble(ty, props, &mut builder, &mut extras)?;
            }
            many => {
                let names: Vec<&str> = many.to_vec();
                return Err(ParseError::Entity {
                    subject: props.subject,
                    message: format!("declared with more than one type: {}", names.join(", ")),
                });
            }
        }
    }
    for t in extras {
        builder.extra(t);
    }
    let graph = builder.build();

    let mut notes = Vec::new();
    if graph.entity_count() == 0 && triple_count > 0 {
        notes.push(format!(
            "document has {triple_count} triple(s) but no typed entities"
        ));
    }
    let issues = validate_graph(&graph);
    Ok(Parsed {
        graph,
        issues,
        notes,
    })
}

fn assemble(
    ty: &str,
    mut props: Props,
    builder: &mut crate::model::GraphBuilder,
    extras: &mut Vec<Triple>,
) -> Result<(), ParseError> {
    let schema = |s: &str| format!("{}{s}", super::NS_SCHEMA);
    match ty {
        TYPE_EVENT => {
            let id = props.subject_pid(PidKind::Event)?;
            let label = props.label()?;
            builder.event(Event { id, label });
        }
        TYPE_REPORT => {
            let id = props.subject_pid(PidKind::Report)?;
            let label = props.label()?;
            let t = props.take_one(&schema("mainEntity"))?;
            let main_entity = props.pid_ref(&schema("mainEntity"), t)?;
            let t = props.take_one(&format!("{}numberOfPatients", super::NS_PLOD))?;
            let number_of_patients =
                props.integer(&format!("{}numberOfPatients", super::NS_PLOD), t)?;
            let t = props.take_one(&schema("datePublished"))?;
            let date_published = props.date(&schema("datePublished"), t)?;
            let t = props.take_one(&schema("publisher"))?;
            let publisher = props.iri(&schema("publisher"), t)?;
            let t = props.take_one(&schema("url"))?;
            let url = props.iri(&schema("url"), t)?;
            let is_referenced_by = props
                .take_at_most_one(&format!("{}isReferencedBy", super::NS_DCTERMS))?
                .map(|t| props.iri(&format!("{}isReferencedBy", super::NS_DCTERMS), t))
                .transpose()?;
            builder.report(Report {
                id,
                label,
                main_entity,
                number_of_patients,
                date_published,
                publisher,
                url,
                is_referenced_by,
            });
        }
        TYPE_PATIENT => {
            let id = props.subject_pid(PidKind::Patient)?;
            let label = props.label()?;
            let t = props.take_one(&schema("subjectOf"))?;
            let subject_of = props.pid_ref(&schema("subjectOf"), t)?;
            let t = props.take_one(&schema("healthCondition"))?;
            let health_condition = props.iri(&schema("healthCondition"), t)?;
            let date_confirmed = props
                .take_at_most_one(&format!("{}dateConfirmed", super::NS_PLOD))?
                .map(|t| props.date(&format!("{}dateConfirmed", super::NS_PLOD), t))
                .transpose()?;
            let age = props
                .take_at_most_one(&format!("{}age", super::NS_FOAF))?
                .map(|t| props.plain(&format!("{}age", super::NS_FOAF), t))
                .transpose()?;
            let gender = props
                .take_at_most_one(&schema("gender"))?
                .map(|t| props.plain(&schema("gender"), t))
                .transpose()?;
            let home_location = props
                .take_at_most_one(&schema("homeLocation"))?
                .map(|t| props.iri(&schema("homeLocation"), t))
                .transpose()?;
            builder.patient(Patient {
                id,
                label,
                subject_of,
                health_condition,
                date_confirmed,
                age,
                gender,
                home_location,
            });
        }
        TYPE_MOVE => {
            let id = props.subject_pid(PidKind::Move)?;
            let label = props.label()?;
            let t = props.take_one(&schema("agent"))?;
            let agent = props.pid_ref(&schema("agent"), t)?;
            let start_time = props
                .take_at_most_one(&schema("startTime"))?
                .map(|t| props.date(&schema("startTime"), t))
                .transpose()?;
            let end_time = props
                .take_at_most_one(&schema("endTime"))?
                .map(|t| props.date(&schema("endTime"), t))
                .transpose()?;
            let from_location = match props.take_at_most_one(&schema("fromLocation"))? {
                Some(t) => props.location(&schema("fromLocation"), t)?,
                None => LocationRef::Absent,
            };
            let to_location = match props.take_at_most_one(&schema("toLocation"))? {
                Some(t) => props.location(&schema("toLocation"), t)?,
                None => LocationRef::Absent,
            };
            let instrument = props
                .take_at_most_one(&schema("instrument"))?
                .map(|t| props.tagged(&schema("instrument"), t))
                .transpose()?;
            builder.move_action(MoveAction {
                id,
                label,
                agent,
                start_time,
                end_time,
                from_location,
                to_location,
                instrument,
                raw_text: None,
            });
        }
        TYPE_PLACE => {
            let label = props.label()?;
            builder.place(Place {
                iri: props.subject.clone(),
                label,
            });
        }
        TYPE_DISEASE => {
            let label = props.label()?;
            let name = props
                .take_at_most_one(&schema("name"))?
                .map(|t| props.tagged(&schema("name"), t))
                .transpose()?;
            let infectious_agent = props
                .take_at_most_one(&schema("infectiousAgent"))?
                .map(|t| props.plain(&schema("infectiousAgent"), t))
                .transpose()?;
            let code = props
                .take_at_most_one(&schema("code"))?
                .map(|t| props.iri(&schema("code"), t))
                .transpose()?;
            builder.disease(InfectiousDisease {
                iri: props.subject.clone(),
                label,
                name,
                infectious_agent,
                code,
            });
        }
        TYPE_CODE => {
            let t = props.take_one(&schema("codeValue"))?;
            let code_value = props.plain(&schema("codeValue"), t)?;
            let t = props.take_one(&schema("codingSystem"))?;
            let coding_system = props.plain(&schema("codingSystem"), t)?;
            builder.code(MedicalCode {
                iri: props.subject.clone(),
                code_value,
                coding_system,
            });
        }
        _ => unreachable!("dispatch covers every known type"),
    }
    props.into_extras(extras);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::IssueCode;

    const HEADER: &str = "\
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix schema: <https://schema.org/> .
@prefix dcterms: <http://purl.org/dc/terms/> .
@prefix foaf: <http://xmlns.com/foaf/0.1/> .
@prefix gnjp: <http://geonames.jp/resource/> .
@prefix plod: <https://plod.info/property/> .
";

    fn doc(body: &str) -> String {
        format!("{HEADER}\n{body}")
    }

    #[test]
    fn undefined_prefix_is_a_positioned_error() {
        let err = parse("<https://plod.info/data/X> a schema:Event .").unwrap_err();
        match err {
            ParseError::Syntax { line, column, message } => {
                assert_eq!((line, column), (1, 30));
                assert!(message.contains("schema"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trailing_dot_terminates_prefixed_names() {
        let parsed = parse(&doc("gnjp:Tokyo a schema:Place ;\n    rdfs:label \"Tokyo\" .")).unwrap();
        assert!(parsed.graph.places().contains_key("http://geonames.jp/resource/Tokyo"));
        let parsed = parse(&doc("gnjp:Tokyo a schema:Place.")).unwrap();
        assert!(parsed.graph.places().contains_key("http://geonames.jp/resource/Tokyo"));
    }

    #[test]
    fn dotted_local_names_keep_interior_dots() {
        let body = "<https://plod.info/entity/X> a schema:InfectiousDisease ;\n    schema:code <http://purl.bioontology.org/ontology/ICD10/U07.1> .";
        let parsed = parse(&doc(body)).unwrap();
        let d = &parsed.graph.diseases()["https://plod.info/entity/X"];
        assert_eq!(d.code.as_deref(), Some("http://purl.bioontology.org/ontology/ICD10/U07.1"));
    }

    #[test]
    fn string_escapes_round() {
        let body = "<https://v.example/s> <https://v.example/p> \"a\\n\\t\\\"b\\\"\\\\c\" .";
        let parsed = parse(&doc(body)).unwrap();
        let lit = parsed.graph.extras()[0].object.as_literal().unwrap();
        assert_eq!(lit.lexical, "a\n\t\"b\"\\c");
    }

    #[test]
    fn unknown_escape_is_an_error() {
        let err = parse(&doc("<https://v.example/s> <https://v.example/p> \"a\\qb\" .")).unwrap_err();
        assert!(err.to_string().contains("escape"));
    }

    #[test]
    fn unterminated_tokens_error() {
        assert!(parse("<https://v.example/unclosed").is_err());
        assert!(parse(&doc("<https://v.example/s> <https://v.example/p> \"open .")).is_err());
    }

    #[test]
    fn langtag_and_prefix_directive_share_the_at_sign() {
        let body = "<https://v.example/s> <https://v.example/p> \"bus\"@ja-Hira .";
        let parsed = parse(&doc(body)).unwrap();
        let lit = parsed.graph.extras()[0].object.as_literal().unwrap();
        assert_eq!(lit.lang.as_deref(), Some("ja-Hira"));
        assert!(parse(&doc("<https://v.example/s> <https://v.example/p> \"x\"@9bad .")).is_err());
    }

    #[test]
    fn comments_and_comma_lists() {
        let body = "# leading note\n<https://v.example/s> <https://v.example/p> \"a\", \"b\" . # trailing";
        let parsed = parse(&doc(body)).unwrap();
        assert_eq!(parsed.graph.extras().len(), 2);
    }

    #[test]
    fn conflicting_values_for_single_valued_predicate() {
        let body = "<https://plod.info/data/X> a schema:Event ;\n    rdfs:label \"X\" ;\n    rdfs:label \"Y\" .";
        let err = parse(&doc(body)).unwrap_err();
        assert!(matches!(err, ParseError::Entity { .. }));
        assert!(err.to_string().contains("rdf-schema#label"));
    }

    #[test]
    fn repeated_identical_triples_collapse() {
        let body = "<https://plod.info/data/X> a schema:Event ;\n    rdfs:label \"X\" .\n\n<https://plod.info/data/X> a schema:Event ;\n    rdfs:label \"X\" .";
        let parsed = parse(&doc(body)).unwrap();
        assert_eq!(parsed.graph.events().len(), 1);
        assert!(parsed.issues.is_empty());
    }

    #[test]
    fn untyped_subjects_become_extras_with_a_note() {
        let parsed = parse(&doc("<https://v.example/s> <https://v.example/p> \"x\" .")).unwrap();
        assert_eq!(parsed.graph.entity_count(), 0);
        assert_eq!(parsed.graph.extras().len(), 1);
        assert_eq!(parsed.notes.len(), 1);
    }

    #[test]
    fn unknown_predicates_on_typed_subjects_are_kept() {
        let body = "<https://plod.info/data/X> a schema:Event ;\n    rdfs:label \"X\" ;\n    <https://v.example/note> \"kept\" .";
        let parsed = parse(&doc(body)).unwrap();
        assert_eq!(parsed.graph.events().len(), 1);
        assert_eq!(parsed.graph.extras().len(), 1);
        assert!(parsed.notes.is_empty());
    }

    #[test]
    fn non_canonical_dates_are_rejected() {
        for bad in ["2020-1-31", "2020-01-32", "20200131"] {
            let body = format!(
                "<https://plod.info/data/X-P01-M01> a schema:MoveAction ;\n    schema:agent <https://plod.info/data/X-P01> ;\n    schema:startTime \"{bad}\"^^schema:DateTime ."
            );
            assert!(parse(&doc(&body)).is_err(), "{bad} accepted");
        }
    }

    #[test]
    fn dates_require_the_datetime_datatype() {
        let body = "<https://plod.info/data/X-P01-M01> a schema:MoveAction ;\n    schema:agent <https://plod.info/data/X-P01> ;\n    schema:startTime \"2020-01-16\" .";
        assert!(parse(&doc(body)).is_err());
    }

    #[test]
    fn non_canonical_integers_are_rejected() {
        for bad in ["01", "+1", " 1"] {
            let body = format!(
                "<https://plod.info/data/X-R01> a schema:Report ;\n    schema:mainEntity <https://plod.info/data/X> ;\n    plod:numberOfPatients \"{bad}\"^^schema:Integer ;\n    schema:datePublished \"2020-01-31\"^^schema:DateTime ;\n    schema:publisher gnjp:Chiba ;\n    schema:url <https://v.example/r> ."
            );
            assert!(parse(&doc(&body)).is_err(), "{bad} accepted");
        }
    }

    #[test]
    fn subject_kind_must_match_declared_type() {
        let err = parse(&doc("<https://plod.info/data/X-P01> a schema:Event .")).unwrap_err();
        assert!(matches!(err, ParseError::Entity { .. }));
    }

    #[test]
    fn missing_required_predicate_is_an_entity_error() {
        let body = "<https://plod.info/data/X-R01> a schema:Report ;\n    schema:mainEntity <https://plod.info/data/X> .";
        let err = parse(&doc(body)).unwrap_err();
        assert!(err.to_string().contains("numberOfPatients"));
    }

    #[test]
    fn two_known_types_conflict() {
        let body = "<https://plod.info/data/X> a schema:Event, schema:Place .";
        let err = parse(&doc(body)).unwrap_err();
        assert!(err.to_string().contains("more than one type"));
    }

    #[test]
    fn empty_endpoint_is_distinct_from_absent() {
        let body = "\
<https://plod.info/data/X-P01-M01> a schema:MoveAction ;
    schema:agent <https://plod.info/data/X-P01> ;
    schema:fromLocation \"\" .";
        let parsed = parse(&doc(body)).unwrap();
        let m = &parsed.graph.moves()["X-P01-M01"];
        assert_eq!(m.from_location, LocationRef::Empty);
        assert_eq!(m.to_location, LocationRef::Absent);
        assert!(parsed
            .issues
            .iter()
            .any(|i| i.code == IssueCode::MissingLocation));
    }

    #[test]
    fn validator_findings_surface_as_issues_not_failures() {
        let body = "\
<https://plod.info/data/X-P01-M01> a schema:MoveAction ;
    rdfs:label \"X-P01-M01\" ;
    schema:agent <https://plod.info/data/X-P01> ;
    schema:startTime \"2020-01-20\"^^schema:DateTime ;
    schema:endTime \"2020-01-12\"^^schema:DateTime .";
        let parsed = parse(&doc(body)).unwrap();
        assert!(parsed.issues.iter().any(|i| i.code == IssueCode::DanglingRef));
        assert!(parsed.issues.iter().any(|i| i.code == IssueCode::BadInterval));
    }

    #[test]
    fn trailing_semicolon_before_dot_is_allowed() {
        let body = "<https://plod.info/data/X> a schema:Event ;\n    rdfs:label \"X\" ;\n.";
        let parsed = parse(&doc(body)).unwrap();
        assert_eq!(parsed.graph.events().len(), 1);
    }
}
