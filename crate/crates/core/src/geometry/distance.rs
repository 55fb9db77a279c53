use super::predicates::crossing_parity;
use super::primitives::point_segment_distance;
use super::{Geometry, LineString, Point2, Polygon};

/// Minimum Euclidean distance from `p` to any point on or in `g`.
///
/// Polygon interiors (boundary included, holes excluded) are at distance
/// zero. Multi-part geometries take the minimum over their parts.
pub fn min_distance(g: &Geometry, p: Point2) -> f64 {
    match g {
        Geometry::Point(q) => q.distance(p),
        Geometry::LineString(l) => line_distance(l, p),
        Geometry::Polygon(poly) => polygon_distance(poly, p),
        Geometry::MultiPoint(m) => m
            .points()
            .iter()
            .map(|q| q.distance(p))
            .fold(f64::INFINITY, f64::min),
        Geometry::MultiLineString(m) => m
            .parts()
            .iter()
            .map(|l| line_distance(l, p))
            .fold(f64::INFINITY, f64::min),
        Geometry::MultiPolygon(m) => m
            .parts()
            .iter()
            .map(|poly| polygon_distance(poly, p))
            .fold(f64::INFINITY, f64::min),
    }
}

pub(crate) fn line_distance(l: &LineString, p: Point2) -> f64 {
    l.segments()
        .map(|(a, b)| point_segment_distance(p, a, b))
        .fold(f64::INFINITY, f64::min)
}

pub(crate) fn boundary_distance(poly: &Polygon, p: Point2) -> f64 {
    poly.edges()
        .map(|(a, b)| point_segment_distance(p, a, b))
        .fold(f64::INFINITY, f64::min)
}

pub(crate) fn polygon_distance(poly: &Polygon, p: Point2) -> f64 {
    if crossing_parity(poly, p) {
        0.0
    } else {
        boundary_distance(poly, p)
    }
}
