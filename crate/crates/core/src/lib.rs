//! Multi-point proximity (MPP) and discrete indicator vector (DIV) encodings
//! for vector geometries.
//!
//! A geometry is encoded against a rectangular frame cut into a regular grid.
//! MPP stores `exp(-d / s)` for the minimum distance `d` from the geometry to
//! each grid cell centre; DIV stores a 0/1 flag for each cell the geometry
//! touches. Both produce fixed-length vectors for points, lines and polygons
//! alike, so they can be fed straight into ordinary ML models.
//!
//! The crate is organised as:
//!
//! - [`geometry`]: the geometry model, distances, predicates and shape metrics
//! - [`codecs`]: WKT and GeoJSON readers and writers
//! - [`encoding`]: grids, the two encoders, sparse vectors and point decoding
//! - [`clustering`]: DBSCAN over encoding vectors
//! - [`eval`]: synthetic corpora, probe models and the evaluation metrics
//! - [`cli`]: the batch commands behind the `mppenc` binary
//! - [`fixtures`]: small hand-built datasets for the demos
//!
//! ```
//! use mppenc::encoding::{make_grids, MppConfig};
//! use mppenc::geometry::{Frame, Geometry};
//!
//! let frame = Frame::sized(400.0, 300.0).unwrap();
//! let (refs, _tiles) = make_grids(&frame, 100.0).unwrap();
//! let cfg = MppConfig::new(refs);
//! let enc = cfg.encode(&Geometry::point(120.0, 80.0).unwrap()).unwrap();
//! assert_eq!(enc.len(), 12);
//! ```

pub mod cli;
pub mod clustering;
pub mod codecs;
pub mod encoding;
pub mod eval;
pub mod fixtures;
pub mod geometry;
