use super::{exclusion_radius, DenseEncoding, EncodingError, MppConfig};
use crate::geometry::Point2;

/// Largest circle residual (ROI units) accepted from [`decode_point`].
pub const DECODE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodedPoint {
    pub point: Point2,
    /// Largest `| |p - r_i| - d_i |` over the references used.
    pub residual: f64,
}

/// Recovers the point whose MPP encoding is `e` by intersecting the
/// exclusion circles around the reference points.
///
/// The circle equations are linearized by subtracting the one with the
/// smallest radius, solved in the least-squares sense, and refined with a
/// single Gauss–Newton step on the unlinearized residuals. Elements that
/// underflowed to zero carry no distance and are ignored.
pub fn decode_point(e: &DenseEncoding, cfg: &MppConfig) -> Result<DecodedPoint, EncodingError> {
    let grid = cfg.grid();
    if e.grid_id() != grid.id() {
        return Err(EncodingError::GridMismatch(e.grid_id().clone(), grid.id().clone()));
    }
    if e.len() != grid.len() {
        return Err(EncodingError::LengthMismatch {
            expected: grid.len(),
            found: e.len(),
        });
    }
    let mut circles = Vec::with_capacity(e.len());
    for (&v, &r) in e.values().iter().zip(grid.points()) {
        if v == 0.0 {
            continue;
        }
        circles.push((r, exclusion_radius(v, cfg.scale())?));
    }
    if circles.len() < 3 {
        return Err(EncodingError::UnderDetermined);
    }
    let k = (0..circles.len())
        .min_by(|&i, &j| circles[i].1.total_cmp(&circles[j].1))
        .unwrap();
    let (rk, dk) = circles[k];

    // Work relative to r_k for conditioning: q = p - r_k.
    //   2 a_i . q = |a_i|^2 - d_i^2 + d_k^2,  a_i = r_i - r_k
    let (mut m00, mut m01, mut m11, mut b0, mut b1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, &(r, d)) in circles.iter().enumerate() {
        if i == k {
            continue;
        }
        let a = r.sub(rk);
        let rhs = (a.dot(a) - d * d + dk * dk) / 2.0;
        m00 += a.x * a.x;
        m01 += a.x * a.y;
        m11 += a.y * a.y;
        b0 += a.x * rhs;
        b1 += a.y * rhs;
    }
    let q = solve2(m00, m01, m11, b0, b1).ok_or(EncodingError::UnderDetermined)?;
    let mut p = rk.add(q);

    let (mut j00, mut j01, mut j11, mut g0, mut g1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(r, d) in &circles {
        let v = p.sub(r);
        let n = v.dot(v).sqrt();
        if n <= 1e-12 * cfg.scale() {
            continue;
        }
        let (jx, jy) = (v.x / n, v.y / n);
        let f = n - d;
        j00 += jx * jx;
        j01 += jx * jy;
        j11 += jy * jy;
        g0 += jx * f;
        g1 += jy * f;
    }
    if let Some(step) = solve2(j00, j01, j11, g0, g1) {
        p = p.sub(step);
    }

    let residual = circles
        .iter()
        .map(|&(r, d)| (p.distance(r) - d).abs())
        .fold(0.0, f64::max);
    if !(residual <= DECODE_TOLERANCE) {
        return Err(EncodingError::Inconsistent(residual));
    }
    Ok(DecodedPoint { point: p, residual })
}

/// Solves the symmetric system `[[a, b], [b, c]] x = (u, v)`, or `None` when
/// it is numerically singular.
fn solve2(a: f64, b: f64, c: f64, u: f64, v: f64) -> Option<Point2> {
    let det = a * c - b * b;
    let scale = (a + c) * (a + c);
    if !(det > 1e-12 * scale) {
        return None;
    }
    Some(Point2::new((c * u - b * v) / det, (a * v - b * u) / det))
}
