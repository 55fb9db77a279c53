use super::{DenseEncoding, Encoder, EncodingError, GridId, Method, ReferenceGrid};
use crate::geometry::{min_distance, Geometry};

/// Multi-point proximity encoder: element `i` is `exp(-d_i / s)` where `d_i`
/// is the minimum distance from the geometry to reference point `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MppConfig {
    grid: ReferenceGrid,
    scale: f64,
}

impl MppConfig {
    /// Kernel scale defaults to the grid spacing.
    pub fn new(grid: ReferenceGrid) -> Self {
        let scale = grid.spacing();
        MppConfig { grid, scale }
    }

    pub fn with_scale(grid: ReferenceGrid, scale: f64) -> Result<Self, EncodingError> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(EncodingError::Config(format!("scale {scale} must be positive")));
        }
        Ok(MppConfig { grid, scale })
    }

    pub fn grid(&self) -> &ReferenceGrid {
        &self.grid
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn encode(&self, g: &Geometry) -> Result<DenseEncoding, EncodingError> {
        g.validate()?;
        let values = self
            .grid
            .points()
            .iter()
            .map(|&r| (-min_distance(g, r) / self.scale).exp())
            .collect();
        Ok(DenseEncoding::new(values, self.grid.id().clone()))
    }
}

impl Encoder for MppConfig {
    fn method(&self) -> Method {
        Method::Mpp
    }
    fn grid_id(&self) -> &GridId {
        self.grid.id()
    }
    fn dim(&self) -> usize {
        self.grid.len()
    }
    fn encode(&self, g: &Geometry) -> Result<DenseEncoding, EncodingError> {
        MppConfig::encode(self, g)
    }
}

/// Radius of the exclusion zone implied by one MPP element: the distance
/// `-s ln v` from the reference point to the nearest part of the geometry.
pub fn exclusion_radius(value: f64, scale: f64) -> Result<f64, EncodingError> {
    if !(value > 0.0 && value <= 1.0) {
        return Err(EncodingError::ValueOutOfRange(value));
    }
    if !(scale.is_finite() && scale > 0.0) {
        return Err(EncodingError::Config(format!("scale {scale} must be positive")));
    }
    Ok(-scale * value.ln())
}
