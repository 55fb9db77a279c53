use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::corpus::{random_line, random_polygon, LineParams, PolygonParams};
use super::{derive_rng, EvalError};
use crate::codecs::Feature;
use crate::geometry::{relation, Frame, Geometry, GeometryKind, Point2, Polygon, RelationKind};

#[derive(Debug, Clone, PartialEq)]
pub struct PairSample {
    pub kind: RelationKind,
    pub a: Geometry,
    pub b: Geometry,
    pub label: bool,
}

impl PairSample {
    /// Builds a sample, computing the label with [`relation`].
    pub fn new(kind: RelationKind, a: Geometry, b: Geometry) -> Result<Self, EvalError> {
        let label = relation(kind, &a, &b)?;
        Ok(PairSample { kind, a, b, label })
    }

    /// Two features sharing a `pair` index; `role` is "a" or "b".
    pub fn to_features(&self, index: usize) -> [Feature; 2] {
        let mk = |g: &Geometry, role: &str| {
            let mut f = Feature::new(g.clone());
            f.set_property("pair", index);
            f.set_property("role", role);
            f.set_property("relation", self.kind.name());
            f.set_property("label", self.label);
            f
        };
        [mk(&self.a, "a"), mk(&self.b, "b")]
    }

    /// Reassembles a sample from the two features written by
    /// [`PairSample::to_features`] and re-verifies the stored label.
    pub fn from_features(a: &Feature, b: &Feature) -> Result<Self, EvalError> {
        let kind = a
            .property("relation")
            .and_then(|v| v.as_str().and_then(RelationKind::from_name))
            .ok_or_else(|| EvalError::Data("feature lacks a known 'relation' property".into()))?;
        let stored = a.property("label").and_then(|v| v.as_bool());
        let s = PairSample::new(kind, a.geometry.clone(), b.geometry.clone())?;
        if stored.is_some_and(|l| l != s.label) {
            return Err(EvalError::Data(format!("stored label disagrees with {}", kind.name())));
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PairSpec {
    pub frame: Frame,
    pub lines: LineParams,
    pub polygons: PolygonParams,
    /// Attempts allowed per emitted sample before giving up.
    pub max_attempts: usize,
    /// Fraction of negative samples drawn as near misses (small offsets from
    /// a positive configuration) rather than free placements.
    pub near_miss_fraction: f64,
    /// Range of the random offset (ROI units) applied to near misses.
    pub near_miss_offset: (f64, f64),
}

impl Default for PairSpec {
    fn default() -> Self {
        PairSpec {
            frame: Frame::sized(100.0, 100.0).expect("valid frame"),
            lines: LineParams {
                min_extent: 20.0,
                ..LineParams::default()
            },
            polygons: PolygonParams {
                min_extent: 20.0,
                ..PolygonParams::default()
            },
            max_attempts: 2000,
            near_miss_fraction: 0.3,
            near_miss_offset: (2.0, 10.0),
        }
    }
}

fn random_shape<R: Rng + ?Sized>(k: GeometryKind, spec: &PairSpec, rng: &mut R) -> Result<Geometry, EvalError> {
    let f = &spec.frame;
    match k {
        GeometryKind::Point => Ok(Geometry::Point(Point2::new(
            rng.gen_range(f.min_x()..=f.max_x()),
            rng.gen_range(f.min_y()..=f.max_y()),
        ))),
        GeometryKind::LineString => random_line(&spec.lines, f, rng),
        GeometryKind::Polygon => random_polygon(&spec.polygons, f, rng),
        other => Err(EvalError::Generator(format!("no generator for {other}"))),
    }
}

/// A point on the geometry: a vertex or a point interpolated along one of
/// its segments.
fn point_on<R: Rng + ?Sized>(g: &Geometry, rng: &mut R) -> Point2 {
    let segs: Vec<(Point2, Point2)> = match g {
        Geometry::Point(p) => return *p,
        Geometry::LineString(l) => l.segments().collect(),
        Geometry::Polygon(p) => p.edges().collect(),
        other => return other.vertices()[0],
    };
    let (a, b) = segs[rng.gen_range(0..segs.len())];
    let t: f64 = rng.gen();
    Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y))
}

/// A point of the geometry's bounding box, used as a target for "inside"
/// placements.
fn point_in_bbox<R: Rng + ?Sized>(g: &Geometry, rng: &mut R) -> Point2 {
    let b = g.bbox();
    Point2::new(
        b.min.x + rng.gen::<f64>() * b.width(),
        b.min.y + rng.gen::<f64>() * b.height(),
    )
}

fn translate(g: &Geometry, dx: f64, dy: f64) -> Geometry {
    g.map_points(|p| Point2::new(p.x + dx, p.y + dy))
}

/// Shifts `g` by the smallest amount that brings its bounding box inside the
/// frame, or `None` if it is larger than the frame.
fn clamp_to_frame(g: Geometry, frame: &Frame) -> Option<Geometry> {
    let b = g.bbox();
    if b.width() > frame.width() || b.height() > frame.height() {
        return None;
    }
    let dx = (frame.min_x() - b.min.x).max(0.0) + (frame.max_x() - b.max.x).min(0.0);
    let dy = (frame.min_y() - b.min.y).max(0.0) + (frame.max_y() - b.max.y).min(0.0);
    if dx == 0.0 && dy == 0.0 {
        Some(g)
    } else {
        Some(translate(&g, dx, dy))
    }
}

/// Uniform translation of `g` to anywhere inside the frame.
fn free_placement<R: Rng + ?Sized>(g: &Geometry, frame: &Frame, rng: &mut R) -> Geometry {
    let b = g.bbox();
    let dx = rng.gen_range(frame.min_x() - b.min.x..=frame.max_x() - b.max.x);
    let dy = rng.gen_range(frame.min_y() - b.min.y..=frame.max_y() - b.max.y);
    translate(g, dx, dy)
}

/// Moves `mover` so that a random point of it lands on (or, with `jitter`,
/// near) a random point of `anchor`.
fn contact_placement<R: Rng + ?Sized>(
    mover: &Geometry,
    anchor: &Geometry,
    inside: bool,
    jitter: f64,
    frame: &Frame,
    rng: &mut R,
) -> Option<Geometry> {
    let target = if inside {
        point_in_bbox(anchor, rng)
    } else {
        point_on(anchor, rng)
    };
    let handle = point_on(mover, rng);
    let (jx, jy) = if jitter > 0.0 {
        (rng.gen_range(-jitter..=jitter), rng.gen_range(-jitter..=jitter))
    } else {
        (0.0, 0.0)
    };
    let moved = translate(mover, target.x - handle.x + jx, target.y - handle.y + jy);
    clamp_to_frame(moved, frame)
}

/// Builds a polygon on the outer side of edge `p -> q` of a counter-clockwise
/// exterior ring, sharing that edge (reversed). Its other vertices lie at
/// positive heights above the edge with strictly increasing positions along
/// it, so the ring is simple.
fn snapped_neighbour<R: Rng + ?Sized>(p: Point2, q: Point2, rng: &mut R) -> Option<Polygon> {
    let d = q.sub(p);
    let len = d.dot(d).sqrt();
    if len == 0.0 {
        return None;
    }
    let u = Point2::new(d.x / len, d.y / len);
    // Right of p -> q is the exterior of a counter-clockwise ring.
    let n = Point2::new(u.y, -u.x);
    let k = rng.gen_range(1..=4);
    let mut cuts: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let height = len * rng.gen_range(0.3..1.2);
    let mut ring = vec![q, p];
    for &s in &cuts {
        let h = height * rng.gen_range(0.4..=1.0);
        ring.push(Point2::new(p.x + d.x * s + n.x * h, p.y + d.y * s + n.y * h));
    }
    ring.push(q);
    Polygon::new(ring, vec![]).ok()
}

fn ccw_exterior(poly: &Polygon) -> Vec<Point2> {
    let mut ring = poly.exterior().to_vec();
    let signed: f64 = ring.windows(2).map(|w| w[0].x * w[1].y - w[1].x * w[0].y).sum();
    if signed < 0.0 {
        ring.reverse();
    }
    ring
}

fn bordering_pair<R: Rng + ?Sized>(anchor: &Polygon, frame: &Frame, rng: &mut R) -> Option<Geometry> {
    let ring = ccw_exterior(anchor);
    let i = rng.gen_range(0..ring.len() - 1);
    let poly = snapped_neighbour(ring[i], ring[i + 1], rng)?;
    let g = Geometry::Polygon(poly);
    frame.rect().contains_rect(&g.bbox()).then_some(g)
}

fn nudge<R: Rng + ?Sized>(g: &Geometry, offset: (f64, f64), rng: &mut R) -> Geometry {
    let r = rng.gen_range(offset.0..=offset.1);
    let a = rng.gen_range(0.0..std::f64::consts::TAU);
    translate(g, r * a.cos(), r * a.sin())
}

/// One candidate (a, b) for `kind` aimed at `want`.
fn propose<R: Rng + ?Sized>(
    kind: RelationKind,
    want: bool,
    near_miss: bool,
    spec: &PairSpec,
    rng: &mut R,
) -> Result<Option<(Geometry, Geometry)>, EvalError> {
    let (ka, kb) = kind.operand_kinds();
    let b = random_shape(kb, spec, rng)?;
    let frame = &spec.frame;
    if kind == RelationKind::PolygonBordersPolygon {
        let Geometry::Polygon(anchor) = &b else { unreachable!() };
        if want || near_miss {
            let Some(a) = bordering_pair(anchor, frame, rng) else {
                return Ok(None);
            };
            let a = if want { a } else { nudge(&a, spec.near_miss_offset, rng) };
            return Ok(clamp_to_frame(a, frame).map(|a| (a, b)));
        }
        let a = random_shape(ka, spec, rng)?;
        return Ok(Some((free_placement(&a, frame, rng), b)));
    }
    let a = random_shape(ka, spec, rng)?;
    let inside = kind == RelationKind::PointInPolygon;
    let a = if want {
        contact_placement(&a, &b, inside, 0.0, frame, rng)
    } else if near_miss {
        contact_placement(&a, &b, inside, 3.0, frame, rng).map(|g| nudge(&g, spec.near_miss_offset, rng))
    } else {
        Some(free_placement(&a, frame, rng))
    };
    Ok(a.and_then(|a| clamp_to_frame(a, frame)).map(|a| (a, b)))
}

/// Draws `n_true` positive and `n_false` negative samples of `kind`, each
/// re-verified with [`relation`], in shuffled order. Shapes are placed by
/// rejection sampling; positives of `PolygonBordersPolygon` are built by
/// snapping a new polygon onto an edge of the other.
pub fn generate_pairs(
    kind: RelationKind,
    n_true: usize,
    n_false: usize,
    spec: &PairSpec,
    seed: u64,
) -> Result<Vec<PairSample>, EvalError> {
    let (lo, hi) = spec.near_miss_offset;
    if !(0.0..=1.0).contains(&spec.near_miss_fraction) || spec.max_attempts == 0 || !(lo > 0.0 && hi >= lo) {
        return Err(EvalError::Generator("bad pair spec".into()));
    }
    let mut rng = derive_rng(seed, &format!("pairs/{}", kind.name()));
    let mut out = Vec::with_capacity(n_true + n_false);
    for (want, count) in [(true, n_true), (false, n_false)] {
        for _ in 0..count {
            let near_miss = !want && rng.gen_bool(spec.near_miss_fraction);
            let mut found = None;
            for _ in 0..spec.max_attempts {
                if let Some((a, b)) = propose(kind, want, near_miss, spec, &mut rng)? {
                    let s = PairSample::new(kind, a, b)?;
                    if s.label == want {
                        found = Some(s);
                        break;
                    }
                }
            }
            out.push(found.ok_or_else(|| {
                EvalError::Generator(format!(
                    "rejection budget of {} exhausted for {} ({} case)",
                    spec.max_attempts,
                    kind.name(),
                    want
                ))
            })?);
        }
    }
    out.shuffle(&mut rng);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_and_verified_for_every_kind() {
        let spec = PairSpec::default();
        for kind in RelationKind::ALL {
            let s = generate_pairs(kind, 15, 15, &spec, 3).unwrap();
            assert_eq!(s.iter().filter(|p| p.label).count(), 15, "{}", kind.name());
            assert_eq!(s.len(), 30);
            let r = spec.frame.rect();
            for p in &s {
                assert_eq!(relation(kind, &p.a, &p.b).unwrap(), p.label);
                assert!(r.contains_rect(&p.a.bbox()) && r.contains_rect(&p.b.bbox()));
            }
        }
    }

    #[test]
    fn deterministic() {
        let spec = PairSpec::default();
        let a = generate_pairs(RelationKind::LineLineIntersect, 5, 5, &spec, 9).unwrap();
        let b = generate_pairs(RelationKind::LineLineIntersect, 5, 5, &spec, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn exhausted_budget_names_kind() {
        let spec = PairSpec {
            max_attempts: 1,
            near_miss_fraction: 0.0,
            ..PairSpec::default()
        };
        // A free point essentially never lands on a line.
        let err = generate_pairs(RelationKind::PointOnLineString, 0, 0, &spec, 1);
        assert!(err.unwrap().is_empty());
        let mut failed = false;
        for seed in 0..20 {
            if let Err(e) = generate_pairs(RelationKind::PolygonBordersPolygon, 5, 0, &spec, seed) {
                assert!(e.to_string().contains("polygon-borders-polygon"));
                failed = true;
                break;
            }
        }
        assert!(failed);
    }
}
