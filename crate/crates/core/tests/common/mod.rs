//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use mppenc::encoding::{DenseEncoding, GridId};
use mppenc::eval::corpus::{random_line, random_polygon, LineParams, PolygonParams};
use mppenc::geometry::{
    normalize_to_frame, Frame, Geometry, LineString, MultiLineString, MultiPoint, MultiPolygon, Point2, Polygon,
    ScaleRange,
};
use rand::Rng;

fn point_in<R: Rng>(frame: &Frame, rng: &mut R) -> Point2 {
    Point2::new(
        rng.gen_range(frame.min_x()..frame.max_x()),
        rng.gen_range(frame.min_y()..frame.max_y()),
    )
}

fn polygon_part(g: Geometry) -> Polygon {
    match g {
        Geometry::Polygon(p) => p,
        _ => unreachable!("random_polygon returns polygons"),
    }
}

fn line_part(g: Geometry) -> LineString {
    match g {
        Geometry::LineString(l) => l,
        _ => unreachable!("random_line returns lines"),
    }
}

/// A polygon with one triangular hole, placed in `frame`.
pub fn holed_polygon<R: Rng>(frame: &Frame, rng: &mut R) -> Geometry {
    let n = rng.gen_range(5..12);
    let mut ext: Vec<Point2> = (0..n)
        .map(|k| {
            let a = k as f64 * std::f64::consts::TAU / n as f64;
            let r = rng.gen_range(0.7..1.0);
            Point2::new(r * a.cos(), r * a.sin())
        })
        .collect();
    ext.push(ext[0]);
    let h = rng.gen_range(0.1..0.4);
    let hole = vec![
        Point2::new(-h, -h),
        Point2::new(h, -h),
        Point2::new(0.0, h),
        Point2::new(-h, -h),
    ];
    let g = Geometry::Polygon(Polygon::new(ext, vec![hole]).expect("hole inside a ring of radius >= 0.7"));
    let scale = ScaleRange {
        min: 5.0,
        max: f64::INFINITY,
    };
    normalize_to_frame(&g, frame, scale, rng).expect("fits")
}

/// One random geometry of any of the six kinds, inside `frame`.
pub fn random_shape<R: Rng>(frame: &Frame, rng: &mut R) -> Geometry {
    let lp = LineParams {
        min_extent: 5.0,
        ..LineParams::default()
    };
    let pp = PolygonParams {
        min_extent: 5.0,
        ..PolygonParams::default()
    };
    match rng.gen_range(0..7) {
        0 => Geometry::Point(point_in(frame, rng)),
        1 => random_line(&lp, frame, rng).unwrap(),
        2 => random_polygon(&pp, frame, rng).unwrap(),
        3 => holed_polygon(frame, rng),
        4 => {
            let n = rng.gen_range(1..5);
            Geometry::MultiPoint(MultiPoint::new((0..n).map(|_| point_in(frame, rng)).collect()).unwrap())
        }
        5 => {
            let parts = (0..rng.gen_range(1..4)).map(|_| line_part(random_line(&lp, frame, rng).unwrap())).collect();
            Geometry::MultiLineString(MultiLineString::new(parts).unwrap())
        }
        _ => {
            let parts = (0..rng.gen_range(1..3))
                .map(|_| polygon_part(random_polygon(&pp, frame, rng).unwrap()))
                .collect();
            Geometry::MultiPolygon(MultiPolygon::new(parts).unwrap())
        }
    }
}

/// DBSCAN from first principles: core points are joined by union-find when
/// within eps; a non-core point within eps of some core joins the component
/// whose smallest core index is lowest; components are numbered by their
/// smallest core index.
pub fn dbscan_oracle(vs: &[DenseEncoding], eps: f64, min_pts: usize) -> Vec<i64> {
    let n = vs.len();
    let d = |i: usize, j: usize| -> f64 {
        vs[i].values().iter().zip(vs[j].values()).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    };
    let near = |i: usize, j: usize| d(i, j) <= eps;
    let core: Vec<bool> = (0..n).map(|i| (0..n).filter(|&j| near(i, j)).count() >= min_pts).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..n {
        for j in 0..i {
            if core[i] && core[j] && near(i, j) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                // Keep the smaller index as root.
                let (lo, hi) = (a.min(b), a.max(b));
                parent[hi] = lo;
            }
        }
    }
    let root: Vec<Option<usize>> = (0..n)
        .map(|i| {
            if core[i] {
                Some(find(&mut parent, i))
            } else {
                (0..n).filter(|&j| core[j] && near(i, j)).map(|j| find(&mut parent, j)).min()
            }
        })
        .collect();
    let mut roots: Vec<usize> = root.iter().flatten().copied().collect();
    roots.sort();
    roots.dedup();
    root.iter()
        .map(|r| match r {
            Some(r) => roots.binary_search(r).unwrap() as i64,
            None => -1,
        })
        .collect()
}

/// Cluster membership as a set of sets (noise points as singletons tagged
/// separately), ignoring numbering.
pub fn partition(labels: &[i64]) -> (BTreeSet<BTreeSet<usize>>, BTreeSet<usize>) {
    let mut clusters = std::collections::BTreeMap::<i64, BTreeSet<usize>>::new();
    let mut noise = BTreeSet::new();
    for (i, &l) in labels.iter().enumerate() {
        if l < 0 {
            noise.insert(i);
        } else {
            clusters.entry(l).or_default().insert(i);
        }
    }
    (clusters.into_values().collect(), noise)
}

/// Densely samples every segment and boundary of `g` at step `h`.
pub fn sample_boundary(g: &Geometry, h: f64) -> Vec<Point2> {
    let mut out = Vec::new();
    let mut seg = |a: Point2, b: Point2| {
        let n = (a.distance(b) / h).ceil().max(1.0) as usize;
        for k in 0..=n {
            let t = k as f64 / n as f64;
            out.push(Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
        }
    };
    let mut ring = |pts: &[Point2]| {
        for w in pts.windows(2) {
            seg(w[0], w[1]);
        }
    };
    match g {
        Geometry::Point(p) => out.push(*p),
        Geometry::MultiPoint(m) => out.extend(m.points()),
        Geometry::LineString(l) => ring(l.points()),
        Geometry::MultiLineString(m) => m.parts().iter().for_each(|l| ring(l.points())),
        Geometry::Polygon(p) => p.rings().for_each(|r| ring(r)),
        Geometry::MultiPolygon(m) => m.parts().iter().for_each(|p| p.rings().for_each(|r| ring(r))),
    }
    out
}

/// Even-odd ray casting over every ring; independent of the library's
/// predicates.
pub fn inside_polygon(rings: &[&[Point2]], p: Point2) -> bool {
    let mut inside = false;
    for ring in rings {
        for w in ring.windows(2) {
            let (a, b) = (w[0], w[1]);
            if (a.y > p.y) != (b.y > p.y) && p.x < a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x) {
                inside = !inside;
            }
        }
    }
    inside
}

/// Minimum distance by dense boundary sampling, zero inside polygons.
pub fn distance_oracle(g: &Geometry, p: Point2, h: f64) -> f64 {
    let polys: Vec<Vec<&[Point2]>> = match g {
        Geometry::Polygon(poly) => vec![poly.rings().collect()],
        Geometry::MultiPolygon(m) => m.parts().iter().map(|poly| poly.rings().collect()).collect(),
        _ => vec![],
    };
    if polys.iter().any(|rings| inside_polygon(rings, p)) {
        return 0.0;
    }
    sample_boundary(g, h).iter().map(|q| q.distance(p)).fold(f64::INFINITY, f64::min)
}

/// ROC-AUC by counting every positive/negative pair, ties as one half.
pub fn auc_pair_count(labels: &[bool], scores: &[f64]) -> f64 {
    let mut wins = 0.0;
    let mut pairs = 0.0;
    for (i, &li) in labels.iter().enumerate() {
        if !li {
            continue;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if lj {
                continue;
            }
            pairs += 1.0;
            if scores[i] > scores[j] {
                wins += 1.0;
            } else if scores[i] == scores[j] {
                wins += 0.5;
            }
        }
    }
    wins / pairs
}

/// The same closed ring started at vertex `k`.
pub fn rotate_ring(ring: &[Point2], k: usize) -> Vec<Point2> {
    let open = &ring[..ring.len() - 1];
    let k = k % open.len();
    let mut out: Vec<Point2> = open[k..].iter().chain(&open[..k]).copied().collect();
    out.push(out[0]);
    out
}

/// Adds a vertex inside one edge of a closed ring.
pub fn insert_collinear<R: Rng>(ring: &[Point2], rng: &mut R) -> Vec<Point2> {
    let i = rng.gen_range(0..ring.len() - 1);
    let (a, b) = (ring[i], ring[i + 1]);
    let t = rng.gen_range(0.1..0.9);
    let mid = Point2::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
    let mut out = ring.to_vec();
    out.insert(i + 1, mid);
    out
}

/// `p` with every ring started elsewhere, and `p` with one extra vertex on
/// each ring.
pub fn reshaped<R: Rng>(p: &Polygon, rng: &mut R) -> (Polygon, Polygon) {
    let mut rot = p.rings().map(|r| rotate_ring(r, rng.gen_range(1..r.len() - 1)));
    let rotated = Polygon::new(rot.next().unwrap(), rot.collect()).unwrap();
    let mut ins = p.rings().map(|r| insert_collinear(r, rng));
    let inserted = Polygon::new(ins.next().unwrap(), ins.collect()).unwrap();
    (rotated, inserted)
}

/// `n` vectors scattered around four random centres in the unit cube.
pub fn random_set<R: Rng>(rng: &mut R, n: usize, dim: usize) -> Vec<DenseEncoding> {
    let gid: GridId = serde_json::from_str("\"r\"").unwrap();
    let centres: Vec<Vec<f64>> = (0..4).map(|_| (0..dim).map(|_| rng.gen::<f64>()).collect()).collect();
    (0..n)
        .map(|_| {
            let c = &centres[rng.gen_range(0..centres.len())];
            DenseEncoding::new(c.iter().map(|&x| x + rng.gen_range(-0.15..0.15)).collect(), gid.clone())
        })
        .collect()
}
