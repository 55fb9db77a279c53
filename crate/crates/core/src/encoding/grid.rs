use std::fmt;

use serde::{Deserialize, Serialize};

use super::EncodingError;
use crate::geometry::{Frame, Point2, Rect};

/// Identifies the grid an encoding was produced on. Two grids with the same
/// frame and resolution have the same id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GridId(String);

impl GridId {
    fn for_grid(frame: &Frame, spacing: f64, nx: usize, ny: usize) -> Self {
        GridId(format!(
            "{},{},{},{}/{}/{}x{}",
            frame.min_x(),
            frame.min_y(),
            frame.max_x(),
            frame.max_y(),
            spacing,
            ny,
            nx
        ))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for GridId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Ordered reference points at the centres of the grid cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceGrid {
    frame: Frame,
    spacing: f64,
    nx: usize,
    ny: usize,
    points: Vec<Point2>,
    id: GridId,
}

impl ReferenceGrid {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    /// Columns.
    pub fn nx(&self) -> usize {
        self.nx
    }
    /// Rows.
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
    pub fn points(&self) -> &[Point2] {
        &self.points
    }
    pub fn id(&self) -> &GridId {
        &self.id
    }
}

/// Ordered, non-overlapping tiles covering the frame exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct TileGrid {
    frame: Frame,
    spacing: f64,
    nx: usize,
    ny: usize,
    tiles: Vec<Rect>,
    id: GridId,
}

impl TileGrid {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }
    pub fn spacing(&self) -> f64 {
        self.spacing
    }
    pub fn nx(&self) -> usize {
        self.nx
    }
    pub fn ny(&self) -> usize {
        self.ny
    }
    pub fn len(&self) -> usize {
        self.tiles.len()
    }
    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }
    pub fn tiles(&self) -> &[Rect] {
        &self.tiles
    }
    pub fn id(&self) -> &GridId {
        &self.id
    }

    /// Index of the tile whose half-open cell `[x0, x1) × [y0, y1)` holds `p`
    /// (the last row and column are closed), or `None` outside the frame.
    pub fn tile_index(&self, p: Point2) -> Option<usize> {
        let r = self.frame.rect();
        if !r.contains_point(p) {
            return None;
        }
        let col = (((p.x - r.min.x) / self.spacing).floor() as usize).min(self.nx - 1);
        let row = (((p.y - r.min.y) / self.spacing).floor() as usize).min(self.ny - 1);
        Some(row * self.nx + col)
    }
}

fn cells(extent: f64, resolution: f64) -> Option<usize> {
    let n = (extent / resolution).round();
    if n < 1.0 || (n * resolution - extent).abs() > 1e-9 * extent.abs().max(1.0) {
        return None;
    }
    Some(n as usize)
}

/// Builds the reference grid and tile grid for `frame` at `resolution`.
///
/// The resolution must divide both frame dimensions.
pub fn make_grids(frame: &Frame, resolution: f64) -> Result<(ReferenceGrid, TileGrid), EncodingError> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(EncodingError::Config(format!("resolution {resolution} must be positive")));
    }
    let err = || EncodingError::NonDividingResolution {
        resolution,
        width: frame.width(),
        height: frame.height(),
    };
    let nx = cells(frame.width(), resolution).ok_or_else(err)?;
    let ny = cells(frame.height(), resolution).ok_or_else(err)?;
    // Edges are computed from the index rather than accumulated so that
    // neighbouring tiles share bit-identical boundaries.
    let xs: Vec<f64> = (0..=nx)
        .map(|i| if i == nx { frame.max_x() } else { frame.min_x() + i as f64 * resolution })
        .collect();
    let ys: Vec<f64> = (0..=ny)
        .map(|j| if j == ny { frame.max_y() } else { frame.min_y() + j as f64 * resolution })
        .collect();
    let mut tiles = Vec::with_capacity(nx * ny);
    let mut points = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let t = Rect::new(Point2::new(xs[i], ys[j]), Point2::new(xs[i + 1], ys[j + 1]));
            points.push(t.center());
            tiles.push(t);
        }
    }
    let id = GridId::for_grid(frame, resolution, nx, ny);
    Ok((
        ReferenceGrid {
            frame: *frame,
            spacing: resolution,
            nx,
            ny,
            points,
            id: id.clone(),
        },
        TileGrid {
            frame: *frame,
            spacing: resolution,
            nx,
            ny,
            tiles,
            id,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolution_table() {
        let f = Frame::sized(100.0, 100.0).unwrap();
        for (res, side) in [(50.0, 2), (25.0, 4), (20.0, 5), (12.5, 8), (10.0, 10), (6.25, 16)] {
            let (r, t) = make_grids(&f, res).unwrap();
            assert_eq!((r.nx(), r.ny()), (side, side));
            assert_eq!(r.len(), side * side);
            assert_eq!(t.len(), side * side);
            assert_eq!(r.id(), t.id());
        }
    }

    #[test]
    fn rectangular_frame_layout() {
        let f = Frame::sized(400.0, 300.0).unwrap();
        let (r, _) = make_grids(&f, 100.0).unwrap();
        assert_eq!((r.ny(), r.nx(), r.len()), (3, 4, 12));
        assert_eq!(r.points()[0], Point2::new(50.0, 50.0));
        assert_eq!(r.points()[1], Point2::new(150.0, 50.0));
        assert_eq!(r.points()[4], Point2::new(50.0, 150.0));
    }

    #[test]
    fn non_dividing_resolution() {
        let f = Frame::sized(100.0, 100.0).unwrap();
        assert!(matches!(
            make_grids(&f, 30.0),
            Err(EncodingError::NonDividingResolution { .. })
        ));
    }

    #[test]
    fn tiles_cover_frame() {
        let f = Frame::new(-3.0, 1.0, 97.0, 51.0).unwrap();
        let (_, t) = make_grids(&f, 12.5).unwrap();
        let total: f64 = t.tiles().iter().map(|r| r.width() * r.height()).sum();
        assert!((total - f.width() * f.height()).abs() < 1e-9);
        for w in t.tiles().windows(2) {
            if w[0].max.y == w[1].max.y {
                assert_eq!(w[0].max.x, w[1].min.x);
            }
        }
        assert_eq!(t.tile_index(Point2::new(97.0, 51.0)), Some(t.len() - 1));
    }
}
