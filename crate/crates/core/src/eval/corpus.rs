use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{derive_rng, EvalError};
use crate::codecs::Feature;
use crate::geometry::{
    area, char_ratio, convex_hull, length, normalize_to_frame, orientation_angle, sinuosity, Frame,
    Geometry, LineString, Point2, Polygon, ScaleRange,
};

/// Random-walk LineString parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LineParams {
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Largest per-line standard deviation of the heading change between
    /// steps (radians); each line draws its own value in `[0, max_turn]`.
    pub max_turn: f64,
    /// Smallest extent (ROI units) of the normalized line's longer side.
    pub min_extent: f64,
}

impl Default for LineParams {
    fn default() -> Self {
        LineParams {
            min_vertices: 4,
            max_vertices: 16,
            max_turn: 0.8,
            min_extent: 15.0,
        }
    }
}

/// Star-shaped polygon parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PolygonParams {
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Per-polygon radial irregularity is drawn from
    /// `[min_irregularity, max_irregularity]` (within [0, 1)); radii are then
    /// drawn from `[1 - irregularity, 1]`.
    pub min_irregularity: f64,
    pub max_irregularity: f64,
    /// Largest stretch factor applied along one axis before rotation.
    pub max_elongation: f64,
    /// Fraction of polygons replaced by their convex hull.
    pub convex_fraction: f64,
    /// Fraction of the remaining polygons given a deep notch: a run of
    /// consecutive vertices pulled towards the centre.
    pub notch_fraction: f64,
    pub min_extent: f64,
}

impl Default for PolygonParams {
    fn default() -> Self {
        PolygonParams {
            min_vertices: 5,
            max_vertices: 14,
            min_irregularity: 0.3,
            max_irregularity: 0.9,
            max_elongation: 3.0,
            convex_fraction: 0.15,
            notch_fraction: 0.5,
            min_extent: 45.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusSpec {
    pub frame: Frame,
    pub n_lines: usize,
    pub n_polygons: usize,
    pub lines: LineParams,
    pub polygons: PolygonParams,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            frame: Frame::sized(100.0, 100.0).expect("valid frame"),
            n_lines: 1000,
            n_polygons: 1000,
            lines: LineParams::default(),
            polygons: PolygonParams::default(),
            seed: 0,
        }
    }
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<(), EvalError> {
        let bad = |m: &str| Err(EvalError::Generator(m.to_string()));
        let l = &self.lines;
        if l.min_vertices < 2 || l.max_vertices < l.min_vertices {
            return bad("line vertex range must satisfy 2 <= min <= max");
        }
        if !(l.max_turn >= 0.0 && l.max_turn.is_finite()) {
            return bad("max_turn must be finite and non-negative");
        }
        let p = &self.polygons;
        if p.min_vertices < 3 || p.max_vertices < p.min_vertices {
            return bad("polygon vertex range must satisfy 3 <= min <= max");
        }
        if !(0.0..1.0).contains(&p.max_irregularity) || !(0.0..=p.max_irregularity).contains(&p.min_irregularity) {
            return bad("irregularity range must satisfy 0 <= min <= max < 1");
        }
        if !(p.max_elongation >= 1.0 && p.max_elongation.is_finite()) {
            return bad("max_elongation must be >= 1");
        }
        if !(0.0..=1.0).contains(&p.convex_fraction) || !(0.0..=1.0).contains(&p.notch_fraction) {
            return bad("convex_fraction and notch_fraction must be in [0, 1]");
        }
        let side = self.frame.width().min(self.frame.height());
        for (name, e) in [("line", l.min_extent), ("polygon", p.min_extent)] {
            if !(e > 0.0 && e < side) {
                return bad(&format!("{name} min_extent must be in (0, {side})"));
            }
        }
        Ok(())
    }
}

/// Exact shape properties of a sample. Orientation is stored as
/// `(cos 2θ, sin 2θ)` so that θ and θ + π coincide.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Targets {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub area: Option<f64>,
    pub cos2theta: f64,
    pub sin2theta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sinuosity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub char: Option<f64>,
}

impl Targets {
    /// Computes the targets that apply to the kind of `g`.
    pub fn of(g: &Geometry) -> Result<Self, EvalError> {
        let theta = orientation_angle(g);
        let mut t = Targets {
            cos2theta: (2.0 * theta).cos(),
            sin2theta: (2.0 * theta).sin(),
            ..Default::default()
        };
        match g {
            Geometry::LineString(l) => {
                t.length = Some(length(g)?);
                t.sinuosity = Some(sinuosity(l));
            }
            Geometry::Polygon(p) => {
                t.area = Some(area(g)?);
                t.char = Some(char_ratio(p)?);
            }
            _ => {}
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertySample {
    pub geometry: Geometry,
    pub targets: Targets,
}

impl PropertySample {
    pub fn new(geometry: Geometry) -> Result<Self, EvalError> {
        let targets = Targets::of(&geometry)?;
        Ok(PropertySample { geometry, targets })
    }

    pub fn to_feature(&self) -> Feature {
        let mut f = Feature::new(self.geometry.clone());
        let json = serde_json::to_value(&self.targets).expect("targets serialize");
        if let serde_json::Value::Object(m) = json {
            for (k, v) in m {
                f.set_property(k, v);
            }
        }
        f
    }

    /// Rebuilds a sample from a feature, recomputing the targets from the
    /// geometry (stored target properties are ignored).
    pub fn from_feature(f: &Feature) -> Result<Self, EvalError> {
        Self::new(f.geometry.clone())
    }
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box–Muller; one draw per call keeps the stream simple to reason about.
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
}

/// A random walk with unit-ish steps whose heading drifts by a normal
/// increment of standard deviation `turn` per step.
pub fn random_walk<R: Rng + ?Sized>(rng: &mut R, n: usize, turn: f64) -> LineString {
    let mut heading = rng.gen_range(0.0..TAU);
    let mut p = Point2::new(0.0, 0.0);
    let mut pts = vec![p];
    for _ in 1..n {
        let step = rng.gen_range(0.5..1.5);
        p = Point2::new(p.x + step * heading.cos(), p.y + step * heading.sin());
        pts.push(p);
        heading += turn * normal(rng);
    }
    LineString::new(pts).expect("steps are non-zero")
}

/// Star-shaped polygon: `n` vertices at sorted, jittered angles with radii
/// in `[1 - irregularity, 1]`, stretched by `elongation` along x.
pub fn star_polygon<R: Rng + ?Sized>(rng: &mut R, n: usize, irregularity: f64, elongation: f64) -> Polygon {
    let step = TAU / n as f64;
    let ring: Vec<Point2> = (0..n)
        .map(|k| {
            let a = (k as f64 + rng.gen_range(-0.35..0.35)) * step;
            let r = rng.gen_range((1.0 - irregularity)..=1.0);
            Point2::new(elongation * r * a.cos(), r * a.sin())
        })
        .collect();
    Polygon::from_open_ring(ring).expect("star-shaped ring about the origin is simple")
}

/// Pulls a run of consecutive vertices of a star polygon (centred on the
/// origin, stretched by `elongation` along x) towards the centre.
fn notched<R: Rng + ?Sized>(star: &Polygon, elongation: f64, rng: &mut R) -> Polygon {
    let ring = &star.exterior()[..star.exterior().len() - 1];
    let n = ring.len();
    let width = rng.gen_range(1..=(n / 2).max(1));
    let start = rng.gen_range(0..n);
    let depth = rng.gen_range(0.05..0.4);
    let mut pts = ring.to_vec();
    for k in 0..width {
        let p = &mut pts[(start + k) % n];
        // Shrinking the radius in unstretched coordinates keeps the ring star-shaped.
        let (x, y) = (p.x / elongation, p.y);
        *p = Point2::new(x * depth * elongation, y * depth);
    }
    Polygon::from_open_ring(pts).unwrap_or_else(|_| star.clone())
}

fn extent(g: &Geometry) -> f64 {
    let b = g.bbox();
    b.width().max(b.height())
}

fn place<R: Rng + ?Sized>(g: &Geometry, frame: &Frame, min_extent: f64, rng: &mut R) -> Result<Geometry, EvalError> {
    let e = extent(g);
    let scale = ScaleRange {
        min: min_extent / e,
        max: f64::INFINITY,
    };
    normalize_to_frame(g, frame, scale, rng).map_err(|err| EvalError::Generator(format!("placement failed: {err}")))
}

pub fn random_line<R: Rng + ?Sized>(p: &LineParams, frame: &Frame, rng: &mut R) -> Result<Geometry, EvalError> {
    let n = rng.gen_range(p.min_vertices..=p.max_vertices);
    let turn = rng.gen_range(0.0..=p.max_turn);
    let raw = Geometry::LineString(random_walk(rng, n, turn));
    place(&raw, frame, p.min_extent, rng)
}

pub fn random_polygon<R: Rng + ?Sized>(p: &PolygonParams, frame: &Frame, rng: &mut R) -> Result<Geometry, EvalError> {
    let n = rng.gen_range(p.min_vertices..=p.max_vertices);
    let irr = rng.gen_range(p.min_irregularity..=p.max_irregularity);
    let el = rng.gen_range(1.0..=p.max_elongation);
    let star = star_polygon(rng, n, irr, el);
    let raw = if rng.gen_bool(p.convex_fraction) {
        let hull = convex_hull(&Geometry::Polygon(star.clone()));
        Polygon::from_open_ring(hull).map(Geometry::Polygon).unwrap_or(Geometry::Polygon(star))
    } else if rng.gen_bool(p.notch_fraction) {
        Geometry::Polygon(notched(&star, el, rng))
    } else {
        Geometry::Polygon(star)
    };
    place(&raw, frame, p.min_extent, rng)
}

/// Lines first, then polygons. Every sample lies inside the frame; the
/// result depends only on `spec`.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<PropertySample>, EvalError> {
    spec.validate()?;
    let mut rng = derive_rng(spec.seed, "corpus");
    let mut out = Vec::with_capacity(spec.n_lines + spec.n_polygons);
    for _ in 0..spec.n_lines {
        out.push(PropertySample::new(random_line(&spec.lines, &spec.frame, &mut rng)?)?);
    }
    for _ in 0..spec.n_polygons {
        out.push(PropertySample::new(random_polygon(&spec.polygons, &spec.frame, &mut rng)?)?);
    }
    Ok(out)
}
