//! Disc-geometry gazetteer: place IRI to centroid, radius, and level.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Granularity;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GazetteerEntry {
    #[serde(rename = "iri")]
    pub place_iri: String,
    pub label: String,
    pub lat: f64,
    pub lon: f64,
    pub radius_km: f64,
    pub level: Granularity,
}

#[derive(Debug, Error)]
pub enum GazetteerError {
    #[error("cannot read gazetteer: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse gazetteer: {0}")]
    Json(#[from] serde_json::Error),
    #[error("entry {iri}: {message}")]
    Entry { iri: String, message: String },
    #[error("duplicate entry for {0}")]
    Duplicate(String),
}

/// Immutable place lookup. Entries are keyed by IRI; labels index
/// case-insensitively and may be shared by several entries.
#[derive(Clone, Debug, Default)]
pub struct Gazetteer {
    entries: BTreeMap<String, GazetteerEntry>,
    by_label: HashMap<String, Vec<String>>,
}

impl Gazetteer {
    pub fn from_entries(
        entries: impl IntoIterator<Item = GazetteerEntry>,
    ) -> Result<Gazetteer, GazetteerError> {
        let mut g = Gazetteer::default();
        for e in entries {
            let err = |message: &str| GazetteerError::Entry {
                iri: e.place_iri.clone(),
                message: message.into(),
            };
            if e.place_iri.is_empty() {
                return Err(err("empty IRI"));
            }
            if !(e.lat.is_finite() && e.lat.abs() <= 90.0) {
                return Err(err("latitude out of range"));
            }
            if !(e.lon.is_finite() && e.lon.abs() <= 180.0) {
                return Err(err("longitude out of range"));
            }
            if !(e.radius_km.is_finite() && e.radius_km > 0.0) {
                return Err(err("radius must be positive"));
            }
            if e.level == Granularity::Facility && e.radius_km > 1.0 {
                return Err(err("facility radius must be at most 1 km"));
            }
            if !e.level.is_geocodable() {
                return Err(err("level must be a geocodable granularity"));
            }
            g.by_label
                .entry(e.label.to_lowercase())
                .or_default()
                .push(e.place_iri.clone());
            if g.entries.insert(e.place_iri.clone(), e.clone()).is_some() {
                return Err(GazetteerError::Duplicate(e.place_iri));
            }
        }
        Ok(g)
    }

    pub fn from_json(json: &str) -> Result<Gazetteer, GazetteerError> {
        let entries: Vec<GazetteerEntry> = serde_json::from_str(json)?;
        Gazetteer::from_entries(entries)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Gazetteer, GazetteerError> {
        Gazetteer::from_json(&std::fs::read_to_string(path)?)
    }

    /// Exact lookup by place IRI.
    #[must_use]
    pub fn locate(&self, place_iri: &str) -> Option<&GazetteerEntry> {
        self.entries.get(place_iri)
    }

    /// Case-insensitive label lookup; every entry carrying the label.
    pub fn lookup_label(&self, label: &str) -> impl Iterator<Item = &GazetteerEntry> {
        self.by_label
            .get(&label.to_lowercase())
            .into_iter()
            .flatten()
            .filter_map(|iri| self.entries.get(iri))
    }

    pub fn entries(&self) -> impl Iterator<Item = &GazetteerEntry> {
        self.entries.values()
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
