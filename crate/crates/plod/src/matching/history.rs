//! Personal location history: timestamped fixes as exported by a phone.

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use super::MatchError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocationFix {
    pub timestamp: DateTime<Utc>,
    pub lat: f64,
    pub lon: f64,
    pub accuracy_m: f64,
}

/// Validates a fix list: coordinate ranges, non-negative accuracy, and
/// timestamp order (ties allowed).
pub fn validate_history(history: &[LocationFix]) -> Result<(), MatchError> {
    for (index, fix) in history.iter().enumerate() {
        if !(fix.lat.is_finite() && fix.lat.abs() <= 90.0)
            || !(fix.lon.is_finite() && fix.lon.abs() <= 180.0)
        {
            return Err(MatchError::InvalidFix {
                index,
                message: format!("coordinate out of range: lat {}, lon {}", fix.lat, fix.lon),
            });
        }
        if !(fix.accuracy_m.is_finite() && fix.accuracy_m >= 0.0) {
            return Err(MatchError::InvalidFix {
                index,
                message: format!("accuracy must be non-negative, got {}", fix.accuracy_m),
            });
        }
        if index > 0 && history[index - 1].timestamp > fix.timestamp {
            return Err(MatchError::UnsortedHistory { index });
        }
    }
    Ok(())
}

/// Parses a history file: a JSON array of fixes with ISO-8601 timestamps.
pub fn load_history(json: &str) -> Result<Vec<LocationFix>, HistoryError> {
    let history: Vec<LocationFix> = serde_json::from_str(json)?;
    validate_history(&history)?;
    Ok(history)
}

#[derive(Debug, thiserror::Error)]
pub enum HistoryError {
    #[error("cannot parse history: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] MatchError),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_file_loads_sorted() {
        let json = include_str!("../../../../data/sample_history.json");
        let fixes = load_history(json).unwrap();
        assert_eq!(fixes.len(), 5);
        assert!(fixes.windows(2).all(|w| w[0].timestamp <= w[1].timestamp));
    }

    #[test]
    fn unsorted_history_is_rejected() {
        let json = r#"[
            {"timestamp": "2020-01-17T00:00:00Z", "lat": 35.0, "lon": 135.0, "accuracy_m": 10.0},
            {"timestamp": "2020-01-16T00:00:00Z", "lat": 35.0, "lon": 135.0, "accuracy_m": 10.0}
        ]"#;
        assert!(matches!(
            load_history(json),
            Err(HistoryError::Invalid(MatchError::UnsortedHistory { index: 1 }))
        ));
    }

    #[test]
    fn bad_fixes_are_named_by_index() {
        let json = r#"[{"timestamp": "2020-01-16T00:00:00Z", "lat": 95.0, "lon": 135.0, "accuracy_m": 10.0}]"#;
        let err = load_history(json).unwrap_err().to_string();
        assert!(err.contains("fix 0"), "{err}");
    }
}
