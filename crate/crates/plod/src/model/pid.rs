//! Hierarchical persistent identifiers and their IRI form.
//!
//! An event identifier is an opaque alphanumeric release ID. Reports,
//! patients, and moves append `-R`/`-P`/`-M` counters to their parent.
//! Counters are zero-padded to two digits up to 99 and printed at natural
//! width from 100 on, so identifiers are stable when a release grows.

use std::fmt;
use thiserror::Error;

/// Namespace for identified entities (`<base><pid>`).
pub const DATA_BASE: &str = "https://plod.info/data/";
/// Namespace for named entities such as diseases (`<base><name>`).
pub const ENTITY_BASE: &str = "https://plod.info/entity/";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PidError {
    #[error("event id {0:?} is not a non-empty alphanumeric string")]
    InvalidEventId(String),
    #[error("counter {0} is out of range (must be >= 1)")]
    InvalidCounter(u64),
    #[error("{0:?} is not a well-formed identifier")]
    Malformed(String),
    #[error("{text:?} is a {found} identifier, expected {expected}")]
    WrongKind {
        text: String,
        expected: PidKind,
        found: PidKind,
    },
    #[error("{0:?} is not an identifier IRI under {DATA_BASE}")]
    NotDataUri(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PidKind {
    Event,
    Report,
    Patient,
    Move,
}

impl fmt::Display for PidKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PidKind::Event => "event",
            PidKind::Report => "report",
            PidKind::Patient => "patient",
            PidKind::Move => "move",
        };
        f.write_str(s)
    }
}

/// A parsed persistent identifier. The text form round-trips exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pid {
    Event { event: String },
    Report { event: String, n: u32 },
    Patient { event: String, n: u32 },
    Move { event: String, patient: u32, n: u32 },
}

/// An absolute IRI under [`DATA_BASE`] naming an identified entity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlodUri(String);

impl PlodUri {
    #[must_use]
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PlodUri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn valid_event_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric())
}

fn push_counter(out: &mut String, n: u32) {
    use fmt::Write;
    if n < 100 {
        let _ = write!(out, "{n:02}");
    } else {
        let _ = write!(out, "{n}");
    }
}

/// Accepts exactly the strings `push_counter` produces: two zero-padded
/// digits for 1..=99, no leading zero at three digits or more.
fn parse_counter(s: &str) -> Option<u32> {
    if s.len() < 2 || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let n: u32 = s.parse().ok()?;
    match s.len() {
        2 if (1..=99).contains(&n) => Some(n),
        2 => None,
        _ if s.as_bytes()[0] != b'0' => Some(n),
        _ => None,
    }
}

impl Pid {
    pub fn event(id: &str) -> Result<Pid, PidError> {
        if valid_event_id(id) {
            Ok(Pid::Event { event: id.to_owned() })
        } else {
            Err(PidError::InvalidEventId(id.to_owned()))
        }
    }

    #[must_use]
    pub fn kind(&self) -> PidKind {
        match self {
            Pid::Event { .. } => PidKind::Event,
            Pid::Report { .. } => PidKind::Report,
            Pid::Patient { .. } => PidKind::Patient,
            Pid::Move { .. } => PidKind::Move,
        }
    }

    /// The release identifier this identifier belongs to.
    #[must_use]
    pub fn event_id(&self) -> &str {
        match self {
            Pid::Event { event }
            | Pid::Report { event, .. }
            | Pid::Patient { event, .. }
            | Pid::Move { event, .. } => event,
        }
    }

    #[must_use]
    pub fn text(&self) -> String {
        let mut out = String::new();
        match self {
            Pid::Event { event } => out.push_str(event),
            Pid::Report { event, n } => {
                out.push_str(event);
                out.push_str("-R");
                push_counter(&mut out, *n);
            }
            Pid::Patient { event, n } => {
                out.push_str(event);
                out.push_str("-P");
                push_counter(&mut out, *n);
            }
            Pid::Move { event, patient, n } => {
                out.push_str(event);
                out.push_str("-P");
                push_counter(&mut out, *patient);
                out.push_str("-M");
                push_counter(&mut out, *n);
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Pid, PidError> {
        let malformed = || PidError::Malformed(text.to_owned());
        let mut parts = text.split('-');
        let event = parts.next().ok_or_else(malformed)?;
        if !valid_event_id(event) {
            return Err(malformed());
        }
        let event = event.to_owned();
        let Some(second) = parts.next() else {
            return Ok(Pid::Event { event });
        };
        let third = parts.next();
        if parts.next().is_some() {
            return Err(malformed());
        }
        match (second.split_at_checked(1), third) {
            (Some(("R", c)), None) => {
                let n = parse_counter(c).ok_or_else(malformed)?;
                Ok(Pid::Report { event, n })
            }
            (Some(("P", c)), None) => {
                let n = parse_counter(c).ok_or_else(malformed)?;
                Ok(Pid::Patient { event, n })
            }
            (Some(("P", pc)), Some(m)) => {
                let patient = parse_counter(pc).ok_or_else(malformed)?;
                let mc = m.strip_prefix('M').ok_or_else(malformed)?;
                let n = parse_counter(mc).ok_or_else(malformed)?;
                Ok(Pid::Move { event, patient, n })
            }
            _ => Err(malformed()),
        }
    }

    #[must_use]
    pub fn to_uri(&self) -> PlodUri {
        PlodUri(format!("{DATA_BASE}{}", self.text()))
    }

    pub fn from_uri(uri: &str) -> Result<Pid, PidError> {
        let rest = uri
            .strip_prefix(DATA_BASE)
            .ok_or_else(|| PidError::NotDataUri(uri.to_owned()))?;
        Pid::parse(rest)
    }
}

impl fmt::Display for Pid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

fn expect_kind(pid: &Pid, expected: PidKind) -> Result<(), PidError> {
    if pid.kind() == expected {
        Ok(())
    } else {
        Err(PidError::WrongKind {
            text: pid.text(),
            expected,
            found: pid.kind(),
        })
    }
}

fn check_counter(n: u32) -> Result<(), PidError> {
    if n >= 1 {
        Ok(())
    } else {
        Err(PidError::InvalidCounter(n.into()))
    }
}

pub fn make_report_id(event: &Pid, n: u32) -> Result<Pid, PidError> {
    expect_kind(event, PidKind::Event)?;
    check_counter(n)?;
    Ok(Pid::Report { event: event.event_id().to_owned(), n })
}

pub fn make_patient_id(event: &Pid, n: u32) -> Result<Pid, PidError> {
    expect_kind(event, PidKind::Event)?;
    check_counter(n)?;
    Ok(Pid::Patient { event: event.event_id().to_owned(), n })
}

pub fn make_move_id(patient: &Pid, n: u32) -> Result<Pid, PidError> {
    expect_kind(patient, PidKind::Patient)?;
    check_counter(n)?;
    let Pid::Patient { event, n: patient_no } = patient else {
        unreachable!()
    };
    Ok(Pid::Move { event: event.clone(), patient: *patient_no, n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counter_widths() {
        let event = Pid::event("12202001311").unwrap();
        assert_eq!(make_patient_id(&event, 1).unwrap().text(), "12202001311-P01");
        assert_eq!(make_patient_id(&event, 100).unwrap().text(), "12202001311-P100");
        let p = make_patient_id(&event, 1).unwrap();
        assert_eq!(make_move_id(&p, 2).unwrap().text(), "12202001311-P01-M02");
        assert_eq!(make_report_id(&event, 1).unwrap().text(), "12202001311-R01");
    }

    #[test]
    fn counter_width_rule_over_range() {
        // Exercise both sides of the width switch with an independently
        // built expectation (manual left-pad rather than format width).
        let event = Pid::event("E9").unwrap();
        for n in 1u32..=150 {
            let digits = n.to_string();
            let expected = if digits.len() < 2 {
                format!("E9-P0{digits}")
            } else {
                format!("E9-P{digits}")
            };
            let pid = make_patient_id(&event, n).unwrap();
            assert_eq!(pid.text(), expected);
            assert_eq!(Pid::parse(&pid.text()).unwrap(), pid);
        }
    }

    #[test]
    fn parse_classifies_every_kind() {
        for (text, kind) in [
            ("12202001311", PidKind::Event),
            ("12202001311-R01", PidKind::Report),
            ("12202001311-P01", PidKind::Patient),
            ("12202001311-P01-M02", PidKind::Move),
            ("abcDEF123-P100-M03", PidKind::Move),
        ] {
            let pid = Pid::parse(text).unwrap();
            assert_eq!(pid.kind(), kind, "{text}");
            assert_eq!(pid.text(), text);
        }
    }

    #[test]
    fn parse_rejects_non_canonical_forms() {
        for text in [
            "", "-P01", "12 3", "E-", "E-P", "E-P0", "E-P00", "E-P001",
            "E-P1", "E-Q01", "E-R01-M01", "E-P01-M00", "E-P01-M01-X02",
            "E-P01-", "E--P01", "é-P01",
        ] {
            assert!(Pid::parse(text).is_err(), "{text:?} should be rejected");
        }
    }

    #[test]
    fn zero_counters_rejected() {
        let event = Pid::event("E").unwrap();
        assert_eq!(make_patient_id(&event, 0), Err(PidError::InvalidCounter(0)));
    }

    #[test]
    fn wrong_parent_kind_rejected() {
        let event = Pid::event("E").unwrap();
        let patient = make_patient_id(&event, 1).unwrap();
        assert!(make_move_id(&event, 1).is_err());
        assert!(make_patient_id(&patient, 1).is_err());
    }

    #[test]
    fn uri_round_trip() {
        let pid = Pid::parse("12202001311-P01-M02").unwrap();
        let uri = pid.to_uri();
        assert_eq!(uri.as_str(), "https://plod.info/data/12202001311-P01-M02");
        assert_eq!(Pid::from_uri(uri.as_str()).unwrap(), pid);
        assert!(Pid::from_uri("https://plod.info/entity/COVID-19").is_err());
    }
}
