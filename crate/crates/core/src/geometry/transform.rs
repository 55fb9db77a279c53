use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Frame, Geometry, GeometryError, Point2};

/// Similarity transform: uniform scale and rotation about the geometry
/// centroid, followed by a translation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineTransform {
    rotation: f64,
    scale: f64,
    dx: f64,
    dy: f64,
}

impl AffineTransform {
    pub fn new(rotation: f64, scale: f64, dx: f64, dy: f64) -> Result<Self, GeometryError> {
        if ![rotation, scale, dx, dy].iter().all(|v| v.is_finite()) {
            return Err(GeometryError::InvalidTransform("non-finite parameter".into()));
        }
        if scale <= 0.0 {
            return Err(GeometryError::InvalidTransform(format!("scale {scale} <= 0")));
        }
        Ok(AffineTransform {
            rotation,
            scale,
            dx,
            dy,
        })
    }

    pub fn identity() -> Self {
        AffineTransform {
            rotation: 0.0,
            scale: 1.0,
            dx: 0.0,
            dy: 0.0,
        }
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }
    pub fn scale(&self) -> f64 {
        self.scale
    }
    pub fn translation(&self) -> (f64, f64) {
        (self.dx, self.dy)
    }
}

pub fn transform(g: &Geometry, t: &AffineTransform) -> Geometry {
    if *t == AffineTransform::identity() {
        return g.clone();
    }
    let c = g.centroid();
    let (sin, cos) = t.rotation.sin_cos();
    let (k, dx, dy) = (t.scale, t.dx, t.dy);
    g.map_points(|p| {
        let (x, y) = ((p.x - c.x) * k, (p.y - c.y) * k);
        Point2::new(c.x + cos * x - sin * y + dx, c.y + sin * x + cos * y + dy)
    })
}

/// Bounds for the random scale factor drawn by [`normalize_to_frame`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleRange {
    pub min: f64,
    pub max: f64,
}

impl Default for ScaleRange {
    fn default() -> Self {
        ScaleRange {
            min: 1e-6,
            max: f64::INFINITY,
        }
    }
}

/// Randomly rotates, rescales and places `g` inside `frame`.
///
/// The rotation is uniform on [0, 2π). The scale is log-uniform between
/// `scale.min` and the smaller of `scale.max` and the largest factor at which
/// the rotated shape's bounding box still fits the frame. The translation is
/// uniform over the positions that keep the bounding box inside the frame.
pub fn normalize_to_frame<R: Rng + ?Sized>(
    g: &Geometry,
    frame: &Frame,
    scale: ScaleRange,
    rng: &mut R,
) -> Result<Geometry, GeometryError> {
    if !(scale.min > 0.0) || scale.max < scale.min {
        return Err(GeometryError::InvalidTransform(format!(
            "bad scale range [{}, {}]",
            scale.min, scale.max
        )));
    }
    let rotation = rng.gen_range(0.0..TAU);
    let rotated = transform(g, &AffineTransform::new(rotation, 1.0, 0.0, 0.0)?);
    let bb = rotated.bbox();
    let fit_x = if bb.width() > 0.0 {
        frame.width() / bb.width()
    } else {
        f64::INFINITY
    };
    let fit_y = if bb.height() > 0.0 {
        frame.height() / bb.height()
    } else {
        f64::INFINITY
    };
    // Leave a sliver of slack so rounding cannot push vertices outside.
    let fit = fit_x.min(fit_y) * (1.0 - 1e-9);
    let upper = scale.max.min(fit);
    if upper < scale.min {
        return Err(GeometryError::DoesNotFit);
    }
    // A shape with no extent fits at any scale; the factor is then moot.
    let k = if upper.is_infinite() {
        scale.min
    } else if upper > scale.min {
        rng.gen_range(scale.min.ln()..=upper.ln()).exp()
    } else {
        scale.min
    };
    let scaled = transform(g, &AffineTransform::new(rotation, k, 0.0, 0.0)?);
    let bb = scaled.bbox();
    let lo_x = frame.min_x() - bb.min.x;
    let hi_x = frame.max_x() - bb.max.x;
    let lo_y = frame.min_y() - bb.min.y;
    let hi_y = frame.max_y() - bb.max.y;
    let dx = if hi_x > lo_x { rng.gen_range(lo_x..=hi_x) } else { lo_x };
    let dy = if hi_y > lo_y { rng.gen_range(lo_y..=hi_y) } else { lo_y };
    let placed = scaled.map_points(|p| Point2::new(p.x + dx, p.y + dy));
    Ok(clamp_into(placed, frame))
}

/// Snaps vertices that rounding left a few ulps outside the frame.
fn clamp_into(g: Geometry, frame: &Frame) -> Geometry {
    let r = frame.rect();
    if r.contains_rect(&g.bbox()) {
        return g;
    }
    g.map_points(|p| Point2::new(p.x.clamp(r.min.x, r.max.x), p.y.clamp(r.min.y, r.max.y)))
}
