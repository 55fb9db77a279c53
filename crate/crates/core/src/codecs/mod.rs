//! WKT and GeoJSON readers and writers.
//!
//! Coordinates are written with the shortest decimal representation that
//! parses back to the same `f64`, so a second serialization of a parsed
//! document is byte-identical to the first.

mod geojson;
mod wkt;

use std::fmt;

use thiserror::Error;

use crate::geometry::GeometryError;

pub use geojson::{parse_geojson, write_geojson, Feature, FeatureWarnings, Properties};
pub use wkt::{parse_wkt, write_wkt};

/// Syntax error with the byte position at which parsing stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub byte_offset: usize,
    pub message: String,
    pub expected: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.byte_offset, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected)?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodecError {
    #[error("parse error {0}")]
    Parse(#[from] ParseError),
    #[error("unsupported geometry type {type_name}")]
    Unsupported { type_name: String },
    #[error("{}invalid geometry: {source}", feature_prefix(*.feature))]
    Invalid {
        feature: Option<usize>,
        source: GeometryError,
    },
    #[error("{}{message}", feature_prefix(*.feature))]
    Structure {
        feature: Option<usize>,
        message: String,
    },
}

fn feature_prefix(feature: Option<usize>) -> String {
    feature.map(|i| format!("feature {i}: ")).unwrap_or_default()
}
