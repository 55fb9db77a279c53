//! Planar Simple-Features geometry model.
//!
//! Geometries are validated when constructed and treated as trusted
//! afterwards. All operations are pure and use the Euclidean metric of the
//! coordinate plane; there is no notion of a CRS.

mod distance;
mod measures;
mod predicates;
pub(crate) mod primitives;
mod transform;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use distance::min_distance;
pub use measures::{
    area, char_ratio, convex_hull, farthest_pair, length, orientation_angle, sinuosity,
};
pub use predicates::{intersects_rect, locate, relation, Location, RelationKind, BOUNDARY_TOLERANCE};
pub use transform::{normalize_to_frame, transform, AffineTransform, ScaleRange};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("{kind} needs at least {needed} vertices, found {found}")]
    TooFewVertices {
        kind: &'static str,
        needed: usize,
        found: usize,
    },
    #[error("ring is not closed")]
    RingNotClosed,
    #[error("ring has repeated consecutive vertex at index {0}")]
    RepeatedVertex(usize),
    #[error("ring self-intersects between edges {0} and {1}")]
    RingSelfIntersects(usize, usize),
    #[error("hole {0} is not inside the exterior ring")]
    HoleOutsideExterior(usize),
    #[error("multi-part geometry has no parts")]
    EmptyMulti,
    #[error("expected {expected} geometry, found {found}")]
    KindMismatch {
        expected: &'static str,
        found: GeometryKind,
    },
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("geometry does not fit in the frame at the minimum scale")]
    DoesNotFit,
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("invalid transform: {0}")]
    InvalidTransform(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub(crate) fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }

    pub(crate) fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }

    pub(crate) fn scale(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }

    pub(crate) fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub(crate) fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    /// Lexicographic (x, y) comparison.
    pub(crate) fn lex_cmp(&self, o: &Point2) -> std::cmp::Ordering {
        self.x.total_cmp(&o.x).then(self.y.total_cmp(&o.y))
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2::new(x, y)
    }
}

/// Axis-aligned rectangle. Used both for bounding boxes and for tiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point2,
    pub max: Point2,
}

impl Rect {
    pub fn new(min: Point2, max: Point2) -> Self {
        Rect { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn center(&self) -> Point2 {
        Point2::new(
            0.5 * (self.min.x + self.max.x),
            0.5 * (self.min.y + self.max.y),
        )
    }

    /// Closed containment.
    pub fn contains_point(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn contains_rect(&self, o: &Rect) -> bool {
        self.contains_point(o.min) && self.contains_point(o.max)
    }

    /// Closed intersection test.
    pub fn intersects(&self, o: &Rect) -> bool {
        self.min.x <= o.max.x && o.min.x <= self.max.x && self.min.y <= o.max.y && o.min.y <= self.max.y
    }

    fn from_points<'a>(pts: impl IntoIterator<Item = &'a Point2>) -> Option<Rect> {
        let mut it = pts.into_iter();
        let first = *it.next()?;
        let mut r = Rect::new(first, first);
        for p in it {
            r.min.x = r.min.x.min(p.x);
            r.min.y = r.min.y.min(p.y);
            r.max.x = r.max.x.max(p.x);
            r.max.y = r.max.y.max(p.y);
        }
        Some(r)
    }

    fn union(&self, o: &Rect) -> Rect {
        Rect::new(
            Point2::new(self.min.x.min(o.min.x), self.min.y.min(o.min.y)),
            Point2::new(self.max.x.max(o.max.x), self.max.y.max(o.max.y)),
        )
    }
}

/// Rectangular region of interest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 4]", into = "[f64; 4]")]
pub struct Frame {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl Frame {
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Result<Self, GeometryError> {
        if ![min_x, min_y, max_x, max_y].iter().all(|v| v.is_finite()) {
            return Err(GeometryError::InvalidFrame("non-finite bound".into()));
        }
        if max_x <= min_x || max_y <= min_y {
            return Err(GeometryError::InvalidFrame(format!(
                "empty extent [{min_x}, {max_x}] x [{min_y}, {max_y}]"
            )));
        }
        Ok(Frame {
            min_x,
            min_y,
            max_x,
            max_y,
        })
    }

    /// Frame anchored at the origin.
    pub fn sized(width: f64, height: f64) -> Result<Self, GeometryError> {
        Frame::new(0.0, 0.0, width, height)
    }

    pub fn min_x(&self) -> f64 {
        self.min_x
    }
    pub fn min_y(&self) -> f64 {
        self.min_y
    }
    pub fn max_x(&self) -> f64 {
        self.max_x
    }
    pub fn max_y(&self) -> f64 {
        self.max_y
    }
    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }
    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn rect(&self) -> Rect {
        Rect::new(
            Point2::new(self.min_x, self.min_y),
            Point2::new(self.max_x, self.max_y),
        )
    }
}

impl TryFrom<[f64; 4]> for Frame {
    type Error = GeometryError;
    fn try_from(v: [f64; 4]) -> Result<Self, Self::Error> {
        Frame::new(v[0], v[1], v[2], v[3])
    }
}

impl From<Frame> for [f64; 4] {
    fn from(f: Frame) -> Self {
        [f.min_x, f.min_y, f.max_x, f.max_y]
    }
}

/// An open polyline with at least two vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct LineString(Vec<Point2>);

impl LineString {
    pub fn new(points: Vec<Point2>) -> Result<Self, GeometryError> {
        if points.len() < 2 {
            return Err(GeometryError::TooFewVertices {
                kind: "LineString",
                needed: 2,
                found: points.len(),
            });
        }
        if !points.iter().all(Point2::is_finite) {
            return Err(GeometryError::NonFinite);
        }
        Ok(LineString(points))
    }

    pub fn points(&self) -> &[Point2] {
        &self.0
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| a.distance(b)).sum()
    }

    pub fn is_closed(&self) -> bool {
        self.0.first() == self.0.last()
    }
}

/// A polygon: one exterior ring and any number of holes. Every ring is
/// closed, simple, and has at least four vertices counting the closing one.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    exterior: Vec<Point2>,
    holes: Vec<Vec<Point2>>,
}

impl Polygon {
    pub fn new(exterior: Vec<Point2>, holes: Vec<Vec<Point2>>) -> Result<Self, GeometryError> {
        validate_ring(&exterior)?;
        for hole in &holes {
            validate_ring(hole)?;
        }
        let poly = Polygon { exterior, holes };
        for (i, hole) in poly.holes.iter().enumerate() {
            if !predicates::ring_inside_ring(hole, &poly.exterior) {
                return Err(GeometryError::HoleOutsideExterior(i));
            }
        }
        Ok(poly)
    }

    /// Builds a polygon from an open vertex loop, appending the closing vertex.
    pub fn from_open_ring(mut vertices: Vec<Point2>) -> Result<Self, GeometryError> {
        if let Some(&first) = vertices.first() {
            vertices.push(first);
        }
        Polygon::new(vertices, Vec::new())
    }

    pub fn exterior(&self) -> &[Point2] {
        &self.exterior
    }

    pub fn holes(&self) -> &[Vec<Point2>] {
        &self.holes
    }

    /// Exterior first, then holes.
    pub fn rings(&self) -> impl Iterator<Item = &[Point2]> {
        std::iter::once(self.exterior.as_slice()).chain(self.holes.iter().map(Vec::as_slice))
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        self.rings()
            .flat_map(|r| r.windows(2).map(|w| (w[0], w[1])))
    }

    pub fn area(&self) -> f64 {
        let holes: f64 = self.holes.iter().map(|h| ring_signed_area(h).abs()).sum();
        (ring_signed_area(&self.exterior).abs() - holes).max(0.0)
    }
}

pub(crate) fn ring_signed_area(ring: &[Point2]) -> f64 {
    0.5 * ring.windows(2).map(|w| w[0].cross(w[1])).sum::<f64>()
}

fn validate_ring(ring: &[Point2]) -> Result<(), GeometryError> {
    if ring.len() < 4 {
        return Err(GeometryError::TooFewVertices {
            kind: "Polygon ring",
            needed: 4,
            found: ring.len(),
        });
    }
    if !ring.iter().all(Point2::is_finite) {
        return Err(GeometryError::NonFinite);
    }
    if ring.first() != ring.last() {
        return Err(GeometryError::RingNotClosed);
    }
    if let Some(i) = ring.windows(2).position(|w| w[0] == w[1]) {
        return Err(GeometryError::RepeatedVertex(i + 1));
    }
    if let Some((i, j)) = predicates::ring_self_intersection(ring) {
        return Err(GeometryError::RingSelfIntersects(i, j));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoint(Vec<Point2>);

impl MultiPoint {
    pub fn new(points: Vec<Point2>) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::EmptyMulti);
        }
        if !points.iter().all(Point2::is_finite) {
            return Err(GeometryError::NonFinite);
        }
        Ok(MultiPoint(points))
    }

    pub fn points(&self) -> &[Point2] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiLineString(Vec<LineString>);

impl MultiLineString {
    pub fn new(parts: Vec<LineString>) -> Result<Self, GeometryError> {
        if parts.is_empty() {
            return Err(GeometryError::EmptyMulti);
        }
        Ok(MultiLineString(parts))
    }

    pub fn parts(&self) -> &[LineString] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiPolygon(Vec<Polygon>);

impl MultiPolygon {
    pub fn new(parts: Vec<Polygon>) -> Result<Self, GeometryError> {
        if parts.is_empty() {
            return Err(GeometryError::EmptyMulti);
        }
        Ok(MultiPolygon(parts))
    }

    pub fn parts(&self) -> &[Polygon] {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeometryKind {
    Point,
    LineString,
    Polygon,
    MultiPoint,
    MultiLineString,
    MultiPolygon,
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Point(Point2),
    LineString(LineString),
    Polygon(Polygon),
    MultiPoint(MultiPoint),
    MultiLineString(MultiLineString),
    MultiPolygon(MultiPolygon),
}

impl Geometry {
    pub fn point(x: f64, y: f64) -> Result<Self, GeometryError> {
        let p = Point2::new(x, y);
        if !p.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        Ok(Geometry::Point(p))
    }

    pub fn line_string(points: Vec<Point2>) -> Result<Self, GeometryError> {
        LineString::new(points).map(Geometry::LineString)
    }

    pub fn polygon(exterior: Vec<Point2>, holes: Vec<Vec<Point2>>) -> Result<Self, GeometryError> {
        Polygon::new(exterior, holes).map(Geometry::Polygon)
    }

    pub fn kind(&self) -> GeometryKind {
        match self {
            Geometry::Point(_) => GeometryKind::Point,
            Geometry::LineString(_) => GeometryKind::LineString,
            Geometry::Polygon(_) => GeometryKind::Polygon,
            Geometry::MultiPoint(_) => GeometryKind::MultiPoint,
            Geometry::MultiLineString(_) => GeometryKind::MultiLineString,
            Geometry::MultiPolygon(_) => GeometryKind::MultiPolygon,
        }
    }

    /// Re-checks the invariants that the type system does not enforce on its
    /// own, i.e. finiteness of a bare `Point`.
    pub fn validate(&self) -> Result<(), GeometryError> {
        match self {
            Geometry::Point(p) if !p.is_finite() => Err(GeometryError::NonFinite),
            _ => Ok(()),
        }
    }

    /// Every vertex, in storage order. Polygon closing vertices are included.
    pub fn vertices(&self) -> Vec<Point2> {
        let mut out = Vec::new();
        self.for_each_vertex(|p| out.push(p));
        out
    }

    fn for_each_vertex(&self, mut f: impl FnMut(Point2)) {
        match self {
            Geometry::Point(p) => f(*p),
            Geometry::LineString(l) => l.points().iter().copied().for_each(f),
            Geometry::Polygon(p) => p.rings().flatten().copied().for_each(f),
            Geometry::MultiPoint(m) => m.points().iter().copied().for_each(f),
            Geometry::MultiLineString(m) => m
                .parts()
                .iter()
                .flat_map(|l| l.points())
                .copied()
                .for_each(f),
            Geometry::MultiPolygon(m) => m
                .parts()
                .iter()
                .flat_map(|p| p.rings().flatten())
                .copied()
                .for_each(f),
        }
    }

    pub fn bbox(&self) -> Rect {
        match self {
            Geometry::Point(p) => Rect::new(*p, *p),
            Geometry::LineString(l) => Rect::from_points(l.points()).expect("non-empty"),
            Geometry::Polygon(p) => Rect::from_points(p.exterior()).expect("non-empty"),
            Geometry::MultiPoint(m) => Rect::from_points(m.points()).expect("non-empty"),
            Geometry::MultiLineString(m) => m
                .parts()
                .iter()
                .map(|l| Rect::from_points(l.points()).expect("non-empty"))
                .reduce(|a, b| a.union(&b))
                .expect("non-empty"),
            Geometry::MultiPolygon(m) => m
                .parts()
                .iter()
                .map(|p| Rect::from_points(p.exterior()).expect("non-empty"))
                .reduce(|a, b| a.union(&b))
                .expect("non-empty"),
        }
    }

    /// Centroid of the highest-dimensional content: area-weighted for
    /// polygons, length-weighted for lines, the vertex mean for points.
    pub fn centroid(&self) -> Point2 {
        match self {
            Geometry::Point(p) => *p,
            Geometry::MultiPoint(m) => mean(m.points()),
            Geometry::LineString(l) => line_centroid(std::slice::from_ref(l)),
            Geometry::MultiLineString(m) => line_centroid(m.parts()),
            Geometry::Polygon(p) => polygon_centroid(std::slice::from_ref(p)),
            Geometry::MultiPolygon(m) => polygon_centroid(m.parts()),
        }
    }

    /// Applies `f` to every vertex. The caller is responsible for `f`
    /// preserving validity (similarity transforms do).
    pub(crate) fn map_points(&self, f: impl Fn(Point2) -> Point2) -> Geometry {
        let map_vec = |v: &[Point2]| v.iter().map(|p| f(*p)).collect::<Vec<_>>();
        let map_poly = |p: &Polygon| Polygon {
            exterior: map_vec(&p.exterior),
            holes: p.holes.iter().map(|h| map_vec(h)).collect(),
        };
        match self {
            Geometry::Point(p) => Geometry::Point(f(*p)),
            Geometry::LineString(l) => Geometry::LineString(LineString(map_vec(l.points()))),
            Geometry::Polygon(p) => Geometry::Polygon(map_poly(p)),
            Geometry::MultiPoint(m) => Geometry::MultiPoint(MultiPoint(map_vec(m.points()))),
            Geometry::MultiLineString(m) => Geometry::MultiLineString(MultiLineString(
                m.parts().iter().map(|l| LineString(map_vec(l.points()))).collect(),
            )),
            Geometry::MultiPolygon(m) => {
                Geometry::MultiPolygon(MultiPolygon(m.parts().iter().map(map_poly).collect()))
            }
        }
    }
}

fn mean(pts: &[Point2]) -> Point2 {
    let n = pts.len() as f64;
    let s = pts.iter().fold(Point2::default(), |acc, p| acc.add(*p));
    s.scale(1.0 / n)
}

fn line_centroid(lines: &[LineString]) -> Point2 {
    let mut total = 0.0;
    let mut acc = Point2::default();
    for (a, b) in lines.iter().flat_map(|l| l.segments()) {
        let w = a.distance(b);
        total += w;
        acc = acc.add(a.add(b).scale(0.5 * w));
    }
    if total > 0.0 {
        acc.scale(1.0 / total)
    } else {
        lines[0].points()[0]
    }
}

fn polygon_centroid(polys: &[Polygon]) -> Point2 {
    // Signed contributions: holes are wound opposite to their exterior after
    // sign normalization below.
    let mut area = 0.0;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for poly in polys {
        for (k, ring) in poly.rings().enumerate() {
            let sa = ring_signed_area(ring);
            let sign = if (k == 0) == (sa >= 0.0) { 1.0 } else { -1.0 };
            for w in ring.windows(2) {
                let c = w[0].cross(w[1]);
                cx += sign * (w[0].x + w[1].x) * c;
                cy += sign * (w[0].y + w[1].y) * c;
            }
            area += sign * sa;
        }
    }
    if area.abs() > 0.0 {
        Point2::new(cx / (6.0 * area), cy / (6.0 * area))
    } else {
        mean(polys[0].exterior())
    }
}
