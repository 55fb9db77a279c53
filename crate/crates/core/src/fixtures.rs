//! Small hand-built datasets used by the examples, the CLI defaults and the
//! tests.

use std::f64::consts::PI;

use crate::geometry::{Frame, Geometry, LineString, Point2, Polygon};

/// Frame and resolution of [`cluster_shapes`]: 100 x 100 at spacing 20, a
/// 5 x 5 grid (25-dimensional encodings).
pub const CLUSTER_FRAME: (f64, f64) = (100.0, 100.0);
pub const CLUSTER_RESOLUTION: f64 = 20.0;

fn hexagon(cx: f64, cy: f64, r: f64, rot: f64) -> Geometry {
    let ring = (0..6)
        .map(|k| {
            let a = rot + k as f64 * PI / 3.0;
            Point2::new(cx + r * a.cos(), cy + r * a.sin())
        })
        .collect();
    Geometry::Polygon(Polygon::from_open_ring(ring).expect("hexagon is a valid ring"))
}

fn line(a: (f64, f64), b: (f64, f64)) -> Geometry {
    Geometry::LineString(LineString::new(vec![a.into(), b.into()]).expect("two distinct points"))
}

/// Three hexagons, four points, three long horizontal lines, three short
/// horizontal lines and three vertical lines, tagged with their category.
///
/// With the MPP encoding on the [`CLUSTER_FRAME`] grid and `min_pts = 2`,
/// DBSCAN finds the five categories at `eps = 0.6`. Raising `eps` first
/// merges the long and short horizontal lines (single-link gap about 0.69),
/// then the points join them (about 0.92); every other gap exceeds 1.2.
pub fn cluster_shapes() -> Vec<(&'static str, Geometry)> {
    let mut out = vec![
        ("hexagon", hexagon(30.0, 70.0, 12.0, 0.0)),
        ("hexagon", hexagon(33.0, 68.0, 11.0, 0.2)),
        ("hexagon", hexagon(28.0, 72.0, 13.0, 0.4)),
    ];
    for (x, y) in [(49.0, 46.0), (52.0, 44.0), (47.0, 43.0), (51.0, 48.0)] {
        out.push(("point", Geometry::Point(Point2::new(x, y))));
    }
    for (a, b) in [((8.0, 25.0), (92.0, 25.0)), ((10.0, 27.0), (90.0, 27.0)), ((6.0, 23.0), (94.0, 23.0))] {
        out.push(("long-horizontal", line(a, b)));
    }
    for (a, b) in [((35.0, 25.0), (65.0, 25.0)), ((37.0, 27.0), (63.0, 27.0)), ((33.0, 23.0), (67.0, 23.0))] {
        out.push(("short-horizontal", line(a, b)));
    }
    for (a, b) in [((80.0, 10.0), (80.0, 50.0)), ((82.0, 12.0), (82.0, 48.0)), ((78.0, 8.0), (78.0, 52.0))] {
        out.push(("vertical", line(a, b)));
    }
    out
}

/// Frame and resolution of [`trajectory`]: 300 x 300 at spacing 100, a 3 x 3
/// grid.
pub const TRAJECTORY_FRAME: (f64, f64) = (300.0, 300.0);
pub const TRAJECTORY_RESOLUTION: f64 = 100.0;

/// `n` points evenly spaced by arc length along `path` (endpoints included).
pub fn sample_path(path: &[Point2], n: usize) -> Vec<Point2> {
    let seg_len: Vec<f64> = path.windows(2).map(|w| w[0].distance(w[1])).collect();
    let total: f64 = seg_len.iter().sum();
    (0..n)
        .map(|k| {
            let mut s = if n == 1 { 0.0 } else { total * k as f64 / (n - 1) as f64 };
            for (i, &l) in seg_len.iter().enumerate() {
                if s <= l || i == seg_len.len() - 1 {
                    let t = if l > 0.0 { (s / l).min(1.0) } else { 0.0 };
                    let (a, b) = (path[i], path[i + 1]);
                    return Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
                }
                s -= l;
            }
            path[0]
        })
        .collect()
}

/// The default continuity path: right along `y = 50` from `x = 30` to 250,
/// then up `x = 250` to `y = 250`.
pub fn trajectory_path() -> Vec<Point2> {
    vec![Point2::new(30.0, 50.0), Point2::new(250.0, 50.0), Point2::new(250.0, 250.0)]
}

/// 50 points along [`trajectory_path`]. No sample falls on a tile edge of
/// the [`TRAJECTORY_FRAME`] grid, and the path visits five tiles, so DIV
/// produces five distinct vectors while every MPP vector differs.
pub fn trajectory() -> Vec<Point2> {
    sample_path(&trajectory_path(), 50)
}

pub fn frame_of(size: (f64, f64)) -> Frame {
    Frame::sized(size.0, size.1).expect("fixture frame is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_endpoints_and_spacing() {
        let t = trajectory();
        assert_eq!(t.len(), 50);
        assert_eq!(t[0], Point2::new(30.0, 50.0));
        assert!(t[49].distance(Point2::new(250.0, 250.0)) < 1e-12);
        let step = 420.0 / 49.0;
        for w in t.windows(2) {
            assert!(w[0].distance(w[1]) <= step + 1e-9);
        }
    }

    #[test]
    fn cluster_shapes_are_valid() {
        let s = cluster_shapes();
        assert_eq!(s.len(), 16);
        for (_, g) in &s {
            assert!(g.validate().is_ok());
        }
    }
}
