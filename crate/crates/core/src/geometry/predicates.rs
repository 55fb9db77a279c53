//! Spatial predicates between pairs of geometries.

use serde::{Deserialize, Serialize};

use super::distance::{boundary_distance, line_distance};
use super::primitives::{orient, segment_intersects_rect, segments_intersect, split_params};
use super::{
    ring_signed_area, Geometry, GeometryError, GeometryKind, LineString, Point2, Polygon, Rect,
};

/// Distance (ROI units) under which a point counts as lying on a boundary or
/// on a line. Intersection points are computed in floating point, so exact
/// incidence is not decidable for constructed points.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationKind {
    PointInPolygon,
    PointOnLineString,
    LineLineIntersect,
    LineIntersectsPolygon,
    PolygonIntersectsPolygon,
    PolygonBordersPolygon,
}

impl RelationKind {
    pub const ALL: [RelationKind; 6] = [
        RelationKind::PointInPolygon,
        RelationKind::PointOnLineString,
        RelationKind::LineLineIntersect,
        RelationKind::LineIntersectsPolygon,
        RelationKind::PolygonIntersectsPolygon,
        RelationKind::PolygonBordersPolygon,
    ];

    /// Geometry kinds expected for the (a, b) arguments.
    pub fn operand_kinds(self) -> (GeometryKind, GeometryKind) {
        use GeometryKind::*;
        match self {
            RelationKind::PointInPolygon => (Point, Polygon),
            RelationKind::PointOnLineString => (Point, LineString),
            RelationKind::LineLineIntersect => (LineString, LineString),
            RelationKind::LineIntersectsPolygon => (LineString, Polygon),
            RelationKind::PolygonIntersectsPolygon => (Polygon, Polygon),
            RelationKind::PolygonBordersPolygon => (Polygon, Polygon),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::PointInPolygon => "point-in-polygon",
            RelationKind::PointOnLineString => "point-on-linestring",
            RelationKind::LineLineIntersect => "linestring-intersects-linestring",
            RelationKind::LineIntersectsPolygon => "linestring-intersects-polygon",
            RelationKind::PolygonIntersectsPolygon => "polygon-intersects-polygon",
            RelationKind::PolygonBordersPolygon => "polygon-borders-polygon",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        RelationKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// Evaluates a pairwise relation.
///
/// * `PointInPolygon`: the point is in the polygon's interior (not on its
///   boundary, not in a hole).
/// * `PointOnLineString`: the point is within [`BOUNDARY_TOLERANCE`] of the line.
/// * `LineLineIntersect`: the lines share at least one point.
/// * `LineIntersectsPolygon`: some part of the line lies in the polygon's interior.
/// * `PolygonIntersectsPolygon`: the interiors overlap.
/// * `PolygonBordersPolygon`: the boundaries share a segment of positive
///   length and the interiors are disjoint.
pub fn relation(kind: RelationKind, a: &Geometry, b: &Geometry) -> Result<bool, GeometryError> {
    use Geometry as G;
    let mismatch = |expected: GeometryKind, found: &Geometry| GeometryError::KindMismatch {
        expected: kind_name(expected),
        found: found.kind(),
    };
    let (ka, kb) = kind.operand_kinds();
    if a.kind() != ka {
        return Err(mismatch(ka, a));
    }
    if b.kind() != kb {
        return Err(mismatch(kb, b));
    }
    Ok(match (kind, a, b) {
        (RelationKind::PointInPolygon, G::Point(p), G::Polygon(poly)) => {
            locate(*p, poly) == Location::Interior
        }
        (RelationKind::PointOnLineString, G::Point(p), G::LineString(l)) => {
            line_distance(l, *p) <= BOUNDARY_TOLERANCE
        }
        (RelationKind::LineLineIntersect, G::LineString(l1), G::LineString(l2)) => {
            lines_intersect(l1, l2)
        }
        (RelationKind::LineIntersectsPolygon, G::LineString(l), G::Polygon(poly)) => l
            .segments()
            .any(|(s, e)| segment_enters_interior(s, e, poly)),
        (RelationKind::PolygonIntersectsPolygon, G::Polygon(p1), G::Polygon(p2)) => {
            interiors_intersect(p1, p2)
        }
        (RelationKind::PolygonBordersPolygon, G::Polygon(p1), G::Polygon(p2)) => {
            shares_boundary_segment(p1, p2) && !interiors_intersect(p1, p2)
        }
        _ => unreachable!("operand kinds checked above"),
    })
}

fn kind_name(k: GeometryKind) -> &'static str {
    match k {
        GeometryKind::Point => "Point",
        GeometryKind::LineString => "LineString",
        GeometryKind::Polygon => "Polygon",
        GeometryKind::MultiPoint => "MultiPoint",
        GeometryKind::MultiLineString => "MultiLineString",
        GeometryKind::MultiPolygon => "MultiPolygon",
    }
}

/// Closed intersection of a geometry with an axis-aligned rectangle.
pub fn intersects_rect(g: &Geometry, r: &Rect) -> bool {
    if !g.bbox().intersects(r) {
        return false;
    }
    let line_hits = |l: &LineString| l.segments().any(|(a, b)| segment_intersects_rect(a, b, r));
    let poly_hits = |p: &Polygon| {
        p.edges().any(|(a, b)| segment_intersects_rect(a, b, r)) || crossing_parity(p, r.center())
    };
    match g {
        Geometry::Point(p) => r.contains_point(*p),
        Geometry::LineString(l) => line_hits(l),
        Geometry::Polygon(p) => poly_hits(p),
        Geometry::MultiPoint(m) => m.points().iter().any(|p| r.contains_point(*p)),
        Geometry::MultiLineString(m) => m.parts().iter().any(line_hits),
        Geometry::MultiPolygon(m) => m.parts().iter().any(poly_hits),
    }
}

/// Even-odd crossing test over all rings. Boundary points may land on either side.
pub(crate) fn crossing_parity(poly: &Polygon, p: Point2) -> bool {
    let mut inside = false;
    for (a, b) in poly.edges() {
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

pub fn locate(p: Point2, poly: &Polygon) -> Location {
    if boundary_distance(poly, p) <= BOUNDARY_TOLERANCE {
        Location::Boundary
    } else if crossing_parity(poly, p) {
        Location::Interior
    } else {
        Location::Exterior
    }
}

fn ring_edges(ring: &[Point2]) -> impl Iterator<Item = (Point2, Point2)> + '_ {
    ring.windows(2).map(|w| (w[0], w[1]))
}

/// First offending edge pair of a closed ring, if it is not simple.
pub(crate) fn ring_self_intersection(ring: &[Point2]) -> Option<(usize, usize)> {
    let m = ring.len() - 1;
    for i in 0..m {
        let (a, b) = (ring[i], ring[i + 1]);
        for j in i + 1..m {
            let (c, d) = (ring[j], ring[j + 1]);
            let adjacent_next = j == i + 1;
            let adjacent_wrap = i == 0 && j == m - 1;
            if adjacent_next || adjacent_wrap {
                // Shared vertex is fine; any further contact is a fold-back.
                let (other_ab, other_cd) = if adjacent_next { (a, d) } else { (b, c) };
                let fold = (orient(a, b, other_cd) == 0.0 && on_closed_span(a, b, other_cd))
                    || (orient(c, d, other_ab) == 0.0 && on_closed_span(c, d, other_ab));
                if fold {
                    return Some((i, j));
                }
            } else if segments_intersect(a, b, c, d) {
                return Some((i, j));
            }
        }
    }
    None
}

fn on_closed_span(a: Point2, b: Point2, c: Point2) -> bool {
    c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x) && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
}

/// `inner` lies within the closed region of `outer` and never crosses it.
pub(crate) fn ring_inside_ring(inner: &[Point2], outer: &[Point2]) -> bool {
    let outer_poly = Polygon {
        exterior: outer.to_vec(),
        holes: Vec::new(),
    };
    if inner
        .iter()
        .any(|p| locate(*p, &outer_poly) == Location::Exterior)
    {
        return false;
    }
    // Edges may still leave through a concave notch; test piece midpoints.
    ring_edges(inner).all(|(a, b)| {
        !segment_pieces(a, b, &outer_poly)
            .iter()
            .any(|m| locate(*m, &outer_poly) == Location::Exterior)
    })
}

fn lines_intersect(l1: &LineString, l2: &LineString) -> bool {
    let b2 = Geometry::LineString(l2.clone()).bbox();
    l1.segments().any(|(a, b)| {
        let seg_box = Rect::new(
            Point2::new(a.x.min(b.x), a.y.min(b.y)),
            Point2::new(a.x.max(b.x), a.y.max(b.y)),
        );
        seg_box.intersects(&b2) && l2.segments().any(|(c, d)| segments_intersect(a, b, c, d))
    })
}

/// Representative points of the pieces of a→b obtained by cutting it where it
/// meets `poly`'s boundary: both endpoints and the midpoint of every piece.
fn segment_pieces(a: Point2, b: Point2, poly: &Polygon) -> Vec<Point2> {
    let mut ts = vec![0.0, 1.0];
    for (c, d) in poly.edges() {
        split_params(a, b, c, d, BOUNDARY_TOLERANCE, &mut ts);
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    let at = |t: f64| Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
    let mut out = vec![a, b];
    out.extend(ts.windows(2).map(|w| at(0.5 * (w[0] + w[1]))));
    out
}

fn segment_enters_interior(a: Point2, b: Point2, poly: &Polygon) -> bool {
    segment_pieces(a, b, poly)
        .into_iter()
        .any(|m| locate(m, poly) == Location::Interior)
}

/// One entry per polygon edge: endpoints and the unit normal pointing into
/// the polygon's interior.
fn oriented_edges(poly: &Polygon) -> Vec<(Point2, Point2, Point2)> {
    let mut out = Vec::new();
    for (k, ring) in poly.rings().enumerate() {
        let ccw = ring_signed_area(ring) > 0.0;
        let interior_left = (k == 0) == ccw;
        for (a, b) in ring_edges(ring) {
            let d = b.sub(a);
            let len = d.dot(d).sqrt();
            let left = Point2::new(-d.y / len, d.x / len);
            let n = if interior_left { left } else { left.scale(-1.0) };
            out.push((a, b, n));
        }
    }
    out
}

/// Length of the collinear overlap of two segments, or 0 if they are not
/// collinear within tolerance.
fn collinear_overlap(a: Point2, b: Point2, c: Point2, d: Point2) -> f64 {
    let ab = b.sub(a);
    let len = ab.dot(ab).sqrt();
    if len == 0.0 {
        return 0.0;
    }
    if orient(a, b, c).abs() / len > BOUNDARY_TOLERANCE || orient(a, b, d).abs() / len > BOUNDARY_TOLERANCE {
        return 0.0;
    }
    let u = ab.scale(1.0 / len);
    let (tc, td) = (c.sub(a).dot(u), d.sub(a).dot(u));
    let lo = tc.min(td).max(0.0);
    let hi = tc.max(td).min(len);
    (hi - lo).max(0.0)
}

fn shares_boundary_segment(p1: &Polygon, p2: &Polygon) -> bool {
    p1.edges().any(|(a, b)| {
        p2.edges()
            .any(|(c, d)| collinear_overlap(a, b, c, d) > BOUNDARY_TOLERANCE)
    })
}

/// True when the open interiors of the polygons overlap.
pub(crate) fn interiors_intersect(p1: &Polygon, p2: &Polygon) -> bool {
    let g1 = Geometry::Polygon(p1.clone()).bbox();
    let g2 = Geometry::Polygon(p2.clone()).bbox();
    if !g1.intersects(&g2) {
        return false;
    }
    if p1.edges().any(|(a, b)| segment_enters_interior(a, b, p2))
        || p2.edges().any(|(a, b)| segment_enters_interior(a, b, p1))
    {
        return true;
    }
    // Remaining case: every edge of each polygon lies outside or on the other.
    // Overlapping boundary stretches with interiors on the same side mean the
    // interiors coincide locally.
    let e1 = oriented_edges(p1);
    let e2 = oriented_edges(p2);
    e1.iter().any(|&(a, b, n1)| {
        e2.iter().any(|&(c, d, n2)| {
            collinear_overlap(a, b, c, d) > BOUNDARY_TOLERANCE && n1.dot(n2) > 0.0
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Geometry {
        Geometry::polygon(
            vec![
                Point2::new(x0, y0),
                Point2::new(x1, y0),
                Point2::new(x1, y1),
                Point2::new(x0, y1),
                Point2::new(x0, y0),
            ],
            vec![],
        )
        .unwrap()
    }

    fn line(v: &[(f64, f64)]) -> Geometry {
        Geometry::line_string(v.iter().map(|&p| p.into()).collect()).unwrap()
    }

    #[test]
    fn borders_shared_edge() {
        let a = rect(0., 0., 1., 1.);
        let b = rect(1., 0., 2., 1.);
        assert!(relation(RelationKind::PolygonBordersPolygon, &a, &b).unwrap());
        assert!(!relation(RelationKind::PolygonIntersectsPolygon, &a, &b).unwrap());
        let overlapped = rect(0.99, 0., 1.99, 1.);
        assert!(!relation(RelationKind::PolygonBordersPolygon, &a, &overlapped).unwrap());
        assert!(relation(RelationKind::PolygonIntersectsPolygon, &a, &overlapped).unwrap());
    }

    #[test]
    fn corner_touch_is_not_bordering() {
        let a = rect(0., 0., 1., 1.);
        let b = rect(1., 1., 2., 2.);
        assert!(!relation(RelationKind::PolygonBordersPolygon, &a, &b).unwrap());
        assert!(!relation(RelationKind::PolygonIntersectsPolygon, &a, &b).unwrap());
    }

    #[test]
    fn identical_polygons_intersect() {
        let a = rect(0., 0., 1., 1.);
        assert!(relation(RelationKind::PolygonIntersectsPolygon, &a, &a).unwrap());
        assert!(!relation(RelationKind::PolygonBordersPolygon, &a, &a).unwrap());
    }

    #[test]
    fn contained_polygon_intersects() {
        let a = rect(0., 0., 10., 10.);
        let b = rect(2., 2., 3., 3.);
        assert!(relation(RelationKind::PolygonIntersectsPolygon, &a, &b).unwrap());
        assert!(relation(RelationKind::PolygonIntersectsPolygon, &b, &a).unwrap());
    }

    #[test]
    fn polygon_in_hole_does_not_intersect() {
        let ext: Vec<Point2> = [(0., 0.), (10., 0.), (10., 10.), (0., 10.), (0., 0.)]
            .iter()
            .map(|&p| p.into())
            .collect();
        let hole: Vec<Point2> = [(2., 2.), (8., 2.), (8., 8.), (2., 8.), (2., 2.)]
            .iter()
            .map(|&p| p.into())
            .collect();
        let donut = Geometry::polygon(ext, vec![hole]).unwrap();
        let inner = rect(3., 3., 4., 4.);
        assert!(!relation(RelationKind::PolygonIntersectsPolygon, &donut, &inner).unwrap());
        // Filling the hole exactly borders the donut along the hole ring.
        let plug = rect(2., 2., 8., 8.);
        assert!(relation(RelationKind::PolygonBordersPolygon, &donut, &plug).unwrap());
    }

    #[test]
    fn point_in_polygon_boundary_is_not_interior() {
        let a = rect(0., 0., 4., 4.);
        let inside = Geometry::point(2., 2.).unwrap();
        let edge = Geometry::point(4., 2.).unwrap();
        assert!(relation(RelationKind::PointInPolygon, &inside, &a).unwrap());
        assert!(!relation(RelationKind::PointInPolygon, &edge, &a).unwrap());
    }

    #[test]
    fn point_on_line() {
        let l = line(&[(0., 0.), (10., 10.)]);
        let on = Geometry::point(0.3 * 10.0, 0.3 * 10.0).unwrap();
        let off = Geometry::point(3.0, 3.1).unwrap();
        assert!(relation(RelationKind::PointOnLineString, &on, &l).unwrap());
        assert!(!relation(RelationKind::PointOnLineString, &off, &l).unwrap());
    }

    #[test]
    fn line_through_polygon_without_interior_vertex() {
        let a = rect(0., 0., 4., 4.);
        let through = line(&[(-1., 2.), (5., 2.)]);
        let along_edge = line(&[(-1., 0.), (5., 0.)]);
        let outside = line(&[(5., 5.), (6., 9.)]);
        assert!(relation(RelationKind::LineIntersectsPolygon, &through, &a).unwrap());
        assert!(!relation(RelationKind::LineIntersectsPolygon, &along_edge, &a).unwrap());
        assert!(!relation(RelationKind::LineIntersectsPolygon, &outside, &a).unwrap());
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let a = rect(0., 0., 1., 1.);
        assert!(matches!(
            relation(RelationKind::PointInPolygon, &a, &a),
            Err(GeometryError::KindMismatch { .. })
        ));
    }

    #[test]
    fn relation_names_round_trip() {
        for k in RelationKind::ALL {
            assert_eq!(RelationKind::from_name(k.name()), Some(k));
        }
    }
}
