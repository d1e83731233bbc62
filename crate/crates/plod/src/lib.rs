//! Case-release graphs for patient locational open data: typed model,
//! Turtle round-tripping, release ingestion, location-history matching,
//! and a read-optimized query service.

pub mod model;
pub mod turtle;
