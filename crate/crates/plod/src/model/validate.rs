//! Graph integrity checks. Validation always runs to completion and
//! returns findings; it never rejects a graph outright.

use std::fmt;

use super::{LocationRef, PlodGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IssueCode {
    MissingLocation,
    DanglingRef,
    DuplicatePid,
    BadInterval,
    EmptyLabel,
    CountMismatch,
}

impl IssueCode {
    #[must_use]
    pub fn as_str(self) -> &'static str {
        match self {
            IssueCode::MissingLocation => "MISSING_LOCATION",
            IssueCode::DanglingRef => "DANGLING_REF",
            IssueCode::DuplicatePid => "DUPLICATE_PID",
            IssueCode::BadInterval => "BAD_INTERVAL",
            IssueCode::EmptyLabel => "EMPTY_LABEL",
            IssueCode::CountMismatch => "COUNT_MISMATCH",
        }
    }

    /// Severity is fixed per code: broken references, identifier
    /// collisions, and inverted intervals make a graph unusable; the rest
    /// record data quality without blocking it.
    #[must_use]
    pub fn severity(self) -> Severity {
        match self {
            IssueCode::DanglingRef | IssueCode::DuplicatePid | IssueCode::BadInterval => {
                Severity::Error
            }
            IssueCode::MissingLocation | IssueCode::EmptyLabel | IssueCode::CountMismatch => {
                Severity::Warning
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationIssue {
    pub code: IssueCode,
    pub subject: String,
    pub message: String,
}

impl ValidationIssue {
    #[must_use]
    pub fn new(code: IssueCode, subject: impl Into<String>, message: impl Into<String>) -> Self {
        ValidationIssue { code, subject: subject.into(), message: message.into() }
    }

    #[must_use]
    pub fn severity(&self) -> Severity {
        self.code.severity()
    }

    #[must_use]
    pub fn is_error(&self) -> bool {
        self.severity() == Severity::Error
    }
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}: {}",
            self.severity(),
            self.code.as_str(),
            self.subject,
            self.message
        )
    }
}

/// Runs every integrity check and returns the findings in a deterministic
/// order: identifier collisions first, then entity groups in serialization
/// order, each keyed ascending.
#[must_use]
pub fn validate_graph(g: &PlodGraph) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    let issue = |code, subject: &str, message: String| ValidationIssue {
        code,
        subject: subject.to_owned(),
        message,
    };

    let mut dups: Vec<&String> = g.duplicate_ids().iter().collect();
    dups.sort();
    dups.dedup();
    for id in dups {
        issues.push(issue(
            IssueCode::DuplicatePid,
            id,
            "identifier declared more than once".to_owned(),
        ));
    }

    let check_label = |issues: &mut Vec<ValidationIssue>, key: &str, label: &Option<String>| {
        match label {
            None => issues.push(issue(IssueCode::EmptyLabel, key, "label is missing".to_owned())),
            Some(l) if l.is_empty() => {
                issues.push(issue(IssueCode::EmptyLabel, key, "label is empty".to_owned()));
            }
            Some(_) => {}
        }
    };
    // Identified entities must carry their own identifier as label.
    let check_id_label = |issues: &mut Vec<ValidationIssue>, key: &str, label: &Option<String>| {
        match label {
            Some(l) if l == key => {}
            Some(l) => issues.push(issue(
                IssueCode::EmptyLabel,
                key,
                format!("label {l:?} does not match the identifier"),
            )),
            None => issues.push(issue(IssueCode::EmptyLabel, key, "label is missing".to_owned())),
        }
    };

    for (key, e) in g.events() {
        check_id_label(&mut issues, key, &e.label);
    }

    for (key, r) in g.reports() {
        check_id_label(&mut issues, key, &r.label);
        let event_key = r.main_entity.text();
        if !g.events().contains_key(&event_key) {
            issues.push(issue(
                IssueCode::DanglingRef,
                key,
                format!("mainEntity {event_key} is not in the graph"),
            ));
        }
        if !g.places().contains_key(&r.publisher) {
            issues.push(issue(
                IssueCode::DanglingRef,
                key,
                format!("publisher {} is not in the graph", r.publisher),
            ));
        }
        let attached = g
            .patients()
            .values()
            .filter(|p| p.subject_of == r.main_entity)
            .count();
        if attached > r.number_of_patients as usize {
            issues.push(issue(
                IssueCode::CountMismatch,
                key,
                format!(
                    "{attached} patients attached but numberOfPatients is {}",
                    r.number_of_patients
                ),
            ));
        }
    }

    for (key, p) in g.patients() {
        check_id_label(&mut issues, key, &p.label);
        if !g.events().contains_key(&p.subject_of.text()) {
            issues.push(issue(
                IssueCode::DanglingRef,
                key,
                format!("subjectOf {} is not in the graph", p.subject_of),
            ));
        }
        if !g.diseases().contains_key(&p.health_condition) {
            issues.push(issue(
                IssueCode::DanglingRef,
                key,
                format!("healthCondition {} is not in the graph", p.health_condition),
            ));
        }
        if let Some(home) = &p.home_location {
            if !g.places().contains_key(home) {
                issues.push(issue(
                    IssueCode::DanglingRef,
                    key,
                    format!("homeLocation {home} is not in the graph"),
                ));
            }
        }
    }

    for (key, m) in g.moves() {
        check_id_label(&mut issues, key, &m.label);
        if !g.patients().contains_key(&m.agent.text()) {
            issues.push(issue(
                IssueCode::DanglingRef,
                key,
                format!("agent {} is not in the graph", m.agent),
            ));
        }
        if let (Some(s), Some(e)) = (m.start_time, m.end_time) {
            if s > e {
                issues.push(issue(
                    IssueCode::BadInterval,
                    key,
                    format!("startTime {s} is after endTime {e}"),
                ));
            }
        }
        for (name, loc) in [("fromLocation", &m.from_location), ("toLocation", &m.to_location)] {
            match loc {
                LocationRef::Place(iri) if !g.places().contains_key(iri) => {
                    issues.push(issue(
                        IssueCode::DanglingRef,
                        key,
                        format!("{name} {iri} is not in the graph"),
                    ));
                }
                LocationRef::Empty => {
                    issues.push(issue(
                        IssueCode::MissingLocation,
                        key,
                        format!("{name} is empty"),
                    ));
                }
                _ => {}
            }
        }
    }

    for (key, p) in g.places() {
        check_label(&mut issues, key, &p.label);
    }

    for (key, d) in g.diseases() {
        check_label(&mut issues, key, &d.label);
        if let Some(code) = &d.code {
            if !g.codes().contains_key(code) {
                issues.push(issue(
                    IssueCode::DanglingRef,
                    key,
                    format!("code {code} is not in the graph"),
                ));
            }
        }
    }

    issues
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        make_move_id, make_patient_id, make_report_id, Event, MoveAction, Patient, Pid, Place,
        Report,
    };
    use chrono::NaiveDate;

    fn date(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn minimal_graph() -> PlodGraph {
        let event = Pid::event("E1").unwrap();
        let patient = make_patient_id(&event, 1).unwrap();
        let mut b = PlodGraph::builder();
        b.event(Event { id: event.clone(), label: Some("E1".into()) });
        b.report(Report {
            id: make_report_id(&event, 1).unwrap(),
            label: Some("E1-R01".into()),
            main_entity: event.clone(),
            number_of_patients: 1,
            date_published: date("2020-01-31"),
            publisher: "http://geonames.jp/resource/Chiba".into(),
            url: "https://example.org/press/1.html".into(),
            is_referenced_by: None,
        });
        b.patient(Patient {
            id: patient.clone(),
            label: Some("E1-P01".into()),
            subject_of: event,
            health_condition: "https://plod.info/entity/COVID-19".into(),
            date_confirmed: Some(date("2020-01-31")),
            age: Some("20s".into()),
            gender: Some("Female".into()),
            home_location: None,
        });
        b.move_action(MoveAction {
            id: make_move_id(&patient, 1).unwrap(),
            label: Some("E1-P01-M01".into()),
            agent: patient,
            start_time: Some(date("2020-01-16")),
            end_time: Some(date("2020-01-16")),
            from_location: LocationRef::Place("http://geonames.jp/resource/Chiba".into()),
            to_location: LocationRef::Empty,
            instrument: None,
            raw_text: None,
        });
        b.place(Place {
            iri: "http://geonames.jp/resource/Chiba".into(),
            label: Some("Chiba".into()),
        });
        b.disease(crate::model::InfectiousDisease {
            iri: "https://plod.info/entity/COVID-19".into(),
            label: Some("COVID-19".into()),
            name: None,
            infectious_agent: None,
            code: None,
        });
        b.build()
    }

    #[test]
    fn empty_endpoint_warns_but_does_not_error() {
        let issues = validate_graph(&minimal_graph());
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].code, IssueCode::MissingLocation);
        assert_eq!(issues[0].severity(), Severity::Warning);
        assert_eq!(issues[0].subject, "E1-P01-M01");
    }

    #[test]
    fn dangling_agent_is_an_error() {
        let patient = Pid::parse("E9-P01").unwrap();
        let mut b = PlodGraph::builder();
        b.move_action(MoveAction {
            id: make_move_id(&patient, 1).unwrap(),
            label: Some("E9-P01-M01".into()),
            agent: patient,
            start_time: None,
            end_time: None,
            from_location: LocationRef::Absent,
            to_location: LocationRef::Absent,
            instrument: None,
            raw_text: None,
        });
        let issues = validate_graph(&b.build());
        assert!(issues
            .iter()
            .any(|i| i.code == IssueCode::DanglingRef && i.is_error()));
        // Absent endpoints are not flagged; only stated-empty ones are.
        assert!(issues.iter().all(|i| i.code != IssueCode::MissingLocation));
    }

    #[test]
    fn inverted_interval_is_an_error() {
        let patient = Pid::parse("E1-P01").unwrap();
        let mut b = PlodGraph::builder();
        b.move_action(MoveAction {
            id: make_move_id(&patient, 1).unwrap(),
            label: Some("E1-P01-M01".into()),
            agent: patient,
            start_time: Some(date("2020-01-20")),
            end_time: Some(date("2020-01-16")),
            from_location: LocationRef::Absent,
            to_location: LocationRef::Absent,
            instrument: None,
            raw_text: None,
        });
        let issues = validate_graph(&b.build());
        assert!(issues.iter().any(|i| i.code == IssueCode::BadInterval));
    }

    #[test]
    fn duplicate_identifier_reported_once() {
        let event = Pid::event("E1").unwrap();
        let mut b = PlodGraph::builder();
        b.event(Event { id: event.clone(), label: Some("E1".into()) });
        b.event(Event { id: event, label: Some("E1".into()) });
        let issues = validate_graph(&b.build());
        let dups: Vec<_> = issues
            .iter()
            .filter(|i| i.code == IssueCode::DuplicatePid)
            .collect();
        assert_eq!(dups.len(), 1);
        assert_eq!(dups[0].subject, "E1");
    }

    #[test]
    fn count_mismatch_fires_only_when_detailed_exceeds_announced() {
        let mut g = minimal_graph();
        let issues = validate_graph(&g);
        assert!(issues.iter().all(|i| i.code != IssueCode::CountMismatch));

        // Rebuild with an extra patient beyond the announced count.
        let event = Pid::event("E1").unwrap();
        let mut b = PlodGraph::builder();
        for e in g.events().values() {
            b.event(e.clone());
        }
        for r in g.reports().values() {
            b.report(r.clone());
        }
        for p in g.patients().values() {
            b.patient(p.clone());
        }
        b.patient(Patient {
            id: make_patient_id(&event, 2).unwrap(),
            label: Some("E1-P02".into()),
            subject_of: event,
            health_condition: "https://plod.info/entity/COVID-19".into(),
            date_confirmed: None,
            age: None,
            gender: None,
            home_location: None,
        });
        for p in g.places().values() {
            b.place(p.clone());
        }
        for d in g.diseases().values() {
            b.disease(d.clone());
        }
        g = b.build();
        let issues = validate_graph(&g);
        let mismatch: Vec<_> = issues
            .iter()
            .filter(|i| i.code == IssueCode::CountMismatch)
            .collect();
        assert_eq!(mismatch.len(), 1);
        assert_eq!(mismatch[0].severity(), Severity::Warning);
    }

    #[test]
    fn label_mismatch_warns() {
        let mut b = PlodGraph::builder();
        b.event(Event { id: Pid::event("E1").unwrap(), label: Some("other".into()) });
        let issues = validate_graph(&b.build());
        assert_eq!(issues.len(), 1);
        assert_eq!(issues[0].code, IssueCode::EmptyLabel);
        assert_eq!(issues[0].severity(), Severity::Warning);
    }
}
