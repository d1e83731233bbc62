//! Great-circle distance on the IUGG mean-radius sphere.

use super::MatchError;

pub const EARTH_RADIUS_KM: f64 = 6371.0088;

fn check(lat: f64, lon: f64) -> Result<(), MatchError> {
    if lat.is_finite() && lon.is_finite() && lat.abs() <= 90.0 && lon.abs() <= 180.0 {
        Ok(())
    } else {
        Err(MatchError::InvalidCoordinate { lat, lon })
    }
}

/// Haversine distance between two (lat, lon) points, in kilometers.
pub fn haversine_km(a: (f64, f64), b: (f64, f64)) -> Result<f64, MatchError> {
    check(a.0, a.1)?;
    check(b.0, b.1)?;
    let (lat1, lon1) = (a.0.to_radians(), a.1.to_radians());
    let (lat2, lon2) = (b.0.to_radians(), b.1.to_radians());
    let dlat = lat2 - lat1;
    let dlon = lon2 - lon1;
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    Ok(2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin())
}
