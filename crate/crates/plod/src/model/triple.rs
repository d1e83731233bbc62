//! Generic triple terms backing the graph's order-independent projection.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub lexical: String,
    pub lang: Option<String>,
    pub datatype: Option<String>,
}

impl Literal {
    #[must_use]
    pub fn plain(lexical: impl Into<String>) -> Literal {
        Literal { lexical: lexical.into(), lang: None, datatype: None }
    }

    #[must_use]
    pub fn tagged(lexical: impl Into<String>, lang: impl Into<String>) -> Literal {
        Literal { lexical: lexical.into(), lang: Some(lang.into()), datatype: None }
    }

    #[must_use]
    pub fn typed(lexical: impl Into<String>, datatype: impl Into<String>) -> Literal {
        Literal { lexical: lexical.into(), lang: None, datatype: Some(datatype.into()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(String),
    Literal(Literal),
}

impl Term {
    #[must_use]
    pub fn iri(iri: impl Into<String>) -> Term {
        Term::Iri(iri.into())
    }

    #[must_use]
    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal(_) => None,
        }
    }

    #[must_use]
    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Iri(_) => None,
            Term::Literal(lit) => Some(lit),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: String,
    pub predicate: String,
    pub object: Term,
}

impl Triple {
    #[must_use]
    pub fn new(subject: impl Into<String>, predicate: impl Into<String>, object: Term) -> Triple {
        Triple { subject: subject.into(), predicate: predicate.into(), object }
    }
}

pub(crate) fn escape_into(out: &mut String, s: &str) {
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            _ => out.push(c),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Literal(lit) => {
                let mut quoted = String::with_capacity(lit.lexical.len() + 2);
                escape_into(&mut quoted, &lit.lexical);
                write!(f, "\"{quoted}\"")?;
                if let Some(lang) = &lit.lang {
                    write!(f, "@{lang}")?;
                } else if let Some(dt) = &lit.datatype {
                    write!(f, "^^<{dt}>")?;
                }
                Ok(())
            }
        }
    }
}

/// Canonical one-line rendering, used for hashing and set comparison.
impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}> <{}> {} .", self.subject, self.predicate, self.object)
    }
}
