//! Fixed-length encodings of geometries over a regular grid.
//!
//! [`make_grids`] cuts a frame into square cells. The cell centres are the
//! MPP reference points and the cells themselves are the DIV tiles, so both
//! encoders produce vectors of the same length and ordering (row-major,
//! lowest `y` row first, lowest `x` first within a row).

mod decode;
mod div;
mod grid;
pub mod io;
mod mpp;
mod vector;

use thiserror::Error;

use crate::geometry::{Geometry, GeometryError};

pub use decode::{decode_point, DecodedPoint, DECODE_TOLERANCE};
pub use div::DivConfig;
pub use grid::{make_grids, GridId, ReferenceGrid, TileGrid};
pub use mpp::{exclusion_radius, MppConfig};
pub use vector::{densify, sparsify, DenseEncoding, SparseEncoding};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EncodingError {
    #[error("resolution {resolution} does not divide the frame ({width} x {height})")]
    NonDividingResolution {
        resolution: f64,
        width: f64,
        height: f64,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("encoding value {0} is outside (0, 1]")]
    ValueOutOfRange(f64),
    #[error("grid mismatch: {0} vs {1}")]
    GridMismatch(GridId, GridId),
    #[error("encoding length {found} does not match grid size {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("point is under-determined: need at least 3 non-collinear reference points")]
    UnderDetermined,
    #[error("encoding is inconsistent with a single point (residual {0:e})")]
    Inconsistent(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mpp,
    Div,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Mpp => "mpp",
            Method::Div => "div",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mpp" => Ok(Method::Mpp),
            "div" => Ok(Method::Div),
            other => Err(format!("unknown encoding method '{other}' (expected mpp or div)")),
        }
    }
}

/// A geometry encoder with a fixed output length.
pub trait Encoder: Send + Sync {
    fn method(&self) -> Method;
    fn grid_id(&self) -> &GridId;
    fn dim(&self) -> usize;
    fn encode(&self, g: &Geometry) -> Result<DenseEncoding, EncodingError>;
}
