//! Scalar shape metrics.

use std::cmp::Ordering;
use std::f64::consts::PI;

use super::primitives::orient;
use super::{ring_signed_area, Geometry, GeometryError, LineString, Point2, Polygon};

/// Arc length of a LineString or MultiLineString.
pub fn length(g: &Geometry) -> Result<f64, GeometryError> {
    match g {
        Geometry::LineString(l) => Ok(l.length()),
        Geometry::MultiLineString(m) => Ok(m.parts().iter().map(LineString::length).sum()),
        other => Err(GeometryError::KindMismatch {
            expected: "LineString",
            found: other.kind(),
        }),
    }
}

/// Shoelace area (exterior minus holes) of a Polygon or MultiPolygon.
pub fn area(g: &Geometry) -> Result<f64, GeometryError> {
    match g {
        Geometry::Polygon(p) => Ok(p.area()),
        Geometry::MultiPolygon(m) => Ok(m.parts().iter().map(Polygon::area).sum()),
        other => Err(GeometryError::KindMismatch {
            expected: "Polygon",
            found: other.kind(),
        }),
    }
}

/// Convex hull of the vertices of `g`, counter-clockwise, open (the first
/// vertex is not repeated), without collinear points. Andrew's monotone chain.
pub fn convex_hull(g: &Geometry) -> Vec<Point2> {
    let mut pts = g.vertices();
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(pts.len() + 1);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn hull_area(hull: &[Point2]) -> f64 {
    if hull.len() < 3 {
        return 0.0;
    }
    let mut closed = hull.to_vec();
    closed.push(hull[0]);
    ring_signed_area(&closed).abs()
}

/// Convex hull area ratio: polygon area over the area of its convex hull.
pub fn char_ratio(poly: &Polygon) -> Result<f64, GeometryError> {
    let a = poly.area();
    if a <= 0.0 {
        return Err(GeometryError::ZeroArea);
    }
    let h = hull_area(&convex_hull(&Geometry::Polygon(poly.clone())));
    Ok((a / h).min(1.0))
}

fn ordered_pair(a: Point2, b: Point2) -> (Point2, Point2) {
    if a.lex_cmp(&b) == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    }
}

fn pair_cmp(x: &(Point2, Point2), y: &(Point2, Point2)) -> Ordering {
    x.0.lex_cmp(&y.0).then(x.1.lex_cmp(&y.1))
}

/// The two vertices of `g` farthest apart, each pair ordered lexicographically.
/// Ties on distance go to the lexicographically smallest pair. A geometry whose
/// vertices all coincide yields `(p, p)`.
///
/// The diameter of a point set is realized by two of its convex hull
/// vertices, so only those are compared.
pub fn farthest_pair(g: &Geometry) -> (Point2, Point2) {
    let hull = convex_hull(g);
    let mut best = ordered_pair(hull[0], hull[0]);
    let mut best_d2 = 0.0;
    for (i, &a) in hull.iter().enumerate() {
        for &b in &hull[i + 1..] {
            let d = a.sub(b);
            let d2 = d.dot(d);
            let cand = ordered_pair(a, b);
            if d2 > best_d2 || (d2 == best_d2 && pair_cmp(&cand, &best) == Ordering::Less) {
                best = cand;
                best_d2 = d2;
            }
        }
    }
    best
}

/// Folds an angle into [0, π).
pub(crate) fn fold_half_turn(theta: f64) -> f64 {
    let t = theta.rem_euclid(PI);
    if t >= PI {
        0.0
    } else {
        t
    }
}

/// Angle of the farthest-pair vector against +x, modulo π. Degenerate
/// geometries (all vertices coincident) have orientation 0.
pub fn orientation_angle(g: &Geometry) -> f64 {
    let (a, b) = farthest_pair(g);
    if a == b {
        return 0.0;
    }
    fold_half_turn((b.y - a.y).atan2(b.x - a.x))
}

/// `1 − exp(1 − r / r*)` with `r` the arc length and `r*` the endpoint
/// separation. Closed lines (`r* = 0`) map to 1.
pub fn sinuosity(l: &LineString) -> f64 {
    let pts = l.points();
    let chord = pts[0].distance(pts[pts.len() - 1]);
    if chord == 0.0 {
        return 1.0;
    }
    let r = l.length();
    (1.0 - (1.0 - r / chord).exp()).max(0.0)
}
