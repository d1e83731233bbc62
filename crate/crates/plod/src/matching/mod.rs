//! Spatiotemporal intersection of a personal location history with the
//! patient moves in a graph, via a disc-geometry gazetteer.

mod gazetteer;
mod geo;
mod history;
mod intersect;

pub use gazetteer::{Gazetteer, GazetteerEntry, GazetteerError};
pub use geo::{haversine_km, EARTH_RADIUS_KM};
pub use history::{load_history, LocationFix};
pub use intersect::{
    interval_overlap, match_history, Confidence, ContactCandidate, Endpoint, MatchConfig,
    RiskReport,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Spatial specificity of a place reference. Declaration order is
/// specificity order: `Facility` is the finest. `Overseas` marks a
/// reference that excludes the domestic area entirely and can never be
/// geocoded.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Granularity {
    Facility,
    City,
    Prefecture,
    Country,
    Overseas,
}

impl Granularity {
    /// True for levels a gazetteer entry may carry.
    #[must_use]
    pub fn is_geocodable(self) -> bool {
        self != Granularity::Overseas
    }
}

#[derive(Debug, Error)]
pub enum MatchError {
    #[error("coordinate out of range: lat {lat}, lon {lon}")]
    InvalidCoordinate { lat: f64, lon: f64 },
    #[error("fix {index}: {message}")]
    InvalidFix { index: usize, message: String },
    #[error("history not sorted by timestamp: fix {index} precedes fix {}", index - 1)]
    UnsortedHistory { index: usize },
}
