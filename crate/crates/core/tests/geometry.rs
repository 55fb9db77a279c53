mod common;

use std::f64::consts::PI;

use common::{distance_oracle, inside_polygon, random_shape};
use mppenc::eval::corpus::star_polygon;
use mppenc::geometry::{
    area, char_ratio, convex_hull, farthest_pair, length, min_distance, normalize_to_frame, orientation_angle,
    relation, sinuosity, transform, AffineTransform, Frame, Geometry, LineString, Point2, Polygon, RelationKind,
    ScaleRange,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn frame() -> Frame {
    Frame::sized(100.0, 100.0).unwrap()
}

fn shoelace(ring: &[Point2]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| {
            let (a, b) = (ring[i], ring[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum::<f64>()
        .abs()
        / 2.0
}

#[test]
fn min_distance_matches_sampling_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let g = random_shape(&frame(), &mut rng);
        let p = Point2::new(rng.gen_range(-20.0..120.0), rng.gen_range(-20.0..120.0));
        let d = min_distance(&g, p);
        let o = distance_oracle(&g, p, 1e-3);
        assert!(d >= 0.0);
        assert!((d - o).abs() < 1e-3, "{g:?} {p:?}: {d} vs {o}");
    }
}

#[test]
fn segment_distance_against_fine_sampling() {
    let g = Geometry::line_string(vec![Point2::new(0.0, 0.0), Point2::new(10.0, 0.0)]).unwrap();
    let p = Point2::new(5.0, 3.0);
    assert_eq!(min_distance(&g, p), 3.0);
    let o = (0..=100_000)
        .map(|k| Point2::new(10.0 * k as f64 / 1e5, 0.0).distance(p))
        .fold(f64::INFINITY, f64::min);
    assert!((o - 3.0).abs() < 1e-9);
}

#[test]
fn polygon_containing_point_has_zero_distance() {
    let sq = Geometry::polygon(
        vec![(0.0, 0.0).into(), (4.0, 0.0).into(), (4.0, 4.0).into(), (0.0, 4.0).into(), (0.0, 0.0).into()],
        vec![],
    )
    .unwrap();
    assert_eq!(min_distance(&sq, Point2::new(1.0, 3.0)), 0.0);
    assert_eq!(min_distance(&sq, Point2::new(4.0, 2.0)), 0.0);
}

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Textbook segment intersection via four orientation tests.
fn segments_cross(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let (d1, d2, d3, d4) = (orient(c, d, a), orient(c, d, b), orient(a, b, c), orient(a, b, d));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

#[test]
fn line_line_intersect_matches_orientation_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut hits = 0;
    for _ in 0..100 {
        let pts: Vec<Point2> = (0..4)
            .map(|_| Point2::new(rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)))
            .collect();
        let a = Geometry::line_string(pts[..2].to_vec()).unwrap();
        let b = Geometry::line_string(pts[2..].to_vec()).unwrap();
        let want = segments_cross(pts[0], pts[1], pts[2], pts[3]);
        assert_eq!(relation(RelationKind::LineLineIntersect, &a, &b).unwrap(), want, "{pts:?}");
        hits += want as usize;
    }
    assert!(hits > 10 && hits < 90);
}

#[test]
fn borders_definition_cases() {
    let sq = |x0: f64| {
        Geometry::polygon(
            vec![
                (x0, 0.0).into(),
                (x0 + 1.0, 0.0).into(),
                (x0 + 1.0, 1.0).into(),
                (x0, 1.0).into(),
                (x0, 0.0).into(),
            ],
            vec![],
        )
        .unwrap()
    };
    let k = RelationKind::PolygonBordersPolygon;
    assert!(relation(k, &sq(0.0), &sq(1.0)).unwrap());
    assert!(!relation(k, &sq(0.0), &sq(0.99)).unwrap());
    let tri = Geometry::polygon(
        vec![(0.0, 0.0).into(), (4.0, 0.0).into(), (1.0, 3.0).into(), (0.0, 0.0).into()],
        vec![],
    )
    .unwrap();
    let c = tri.centroid();
    assert!(relation(RelationKind::PointInPolygon, &Geometry::Point(c), &tri).unwrap());
}

#[test]
fn length_and_area_basics() {
    let seg = Geometry::line_string(vec![Point2::new(0.0, 0.0), Point2::new(3.0, 4.0)]).unwrap();
    assert_eq!(length(&seg).unwrap(), 5.0);
    let unit = Geometry::polygon(
        vec![(0.0, 0.0).into(), (1.0, 0.0).into(), (1.0, 1.0).into(), (0.0, 1.0).into(), (0.0, 0.0).into()],
        vec![],
    )
    .unwrap();
    assert_eq!(area(&unit).unwrap(), 1.0);
    assert!(length(&unit).is_err());
    assert!(area(&seg).is_err());
}

fn monte_carlo_fraction(rings: &[&[Point2]], bbox: (Point2, Point2), n: usize, rng: &mut ChaCha8Rng) -> f64 {
    let inside = (0..n)
        .filter(|_| {
            let p = Point2::new(rng.gen_range(bbox.0.x..bbox.1.x), rng.gen_range(bbox.0.y..bbox.1.y));
            inside_polygon(rings, p)
        })
        .count();
    inside as f64 / n as f64
}

#[test]
fn twenty_gon_area_matches_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let poly = star_polygon(&mut rng, 20, 0.5, 1.5);
    let g = Geometry::Polygon(poly.clone());
    let bb = g.bbox();
    let frac = monte_carlo_fraction(&[poly.exterior()], (bb.min, bb.max), 1_000_000, &mut rng);
    let mc = frac * bb.width() * bb.height();
    let a = area(&g).unwrap();
    assert!((mc - a).abs() / a < 0.005, "{mc} vs {a}");
}

#[test]
fn star_with_half_hull_area_has_char_one_half() {
    // Four outer tips on the axes, inner vertices at (±a, ±a): area 4a, hull
    // area 2.
    let a = 0.25;
    let ring: Vec<Point2> = [(1.0, 0.0), (a, a), (0.0, 1.0), (-a, a), (-1.0, 0.0), (-a, -a), (0.0, -1.0), (a, -a)]
        .into_iter()
        .map(Point2::from)
        .collect();
    let star = Polygon::from_open_ring(ring).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let bbox = (Point2::new(-1.0, -1.0), Point2::new(1.0, 1.0));
    let star_area = 4.0 * monte_carlo_fraction(&[star.exterior()], bbox, 400_000, &mut rng);
    let hull: Vec<Point2> = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (1.0, 0.0)]
        .into_iter()
        .map(Point2::from)
        .collect();
    let hull_area = 4.0 * monte_carlo_fraction(&[&hull], bbox, 400_000, &mut rng);
    assert!((star_area / hull_area - 0.5).abs() < 0.01);
    assert!((char_ratio(&star).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn convex_polygon_has_char_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let star = star_polygon(&mut rng, 9, 0.6, 2.0);
        let hull = convex_hull(&Geometry::Polygon(star));
        let convex = Polygon::from_open_ring(hull).unwrap();
        assert!((char_ratio(&convex).unwrap() - 1.0).abs() < 1e-12);
    }
}

fn exhaustive_farthest(pts: &[Point2]) -> f64 {
    let mut best = 0.0f64;
    for a in pts {
        for b in pts {
            best = best.max(a.distance(*b));
        }
    }
    best
}

#[test]
fn farthest_pair_and_orientation_match_all_pairs_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let pts: Vec<Point2> = (0..50)
            .map(|_| Point2::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..60.0)))
            .collect();
        let g = Geometry::line_string(pts.clone()).unwrap();
        let (a, b) = farthest_pair(&g);
        assert_eq!(a.distance(b), exhaustive_farthest(&pts));
        assert!(pts.contains(&a) && pts.contains(&b));
        let want = (b.y - a.y).atan2(b.x - a.x).rem_euclid(PI);
        assert!((orientation_angle(&g) - want).abs() < 1e-12);
    }
}

#[test]
fn farthest_pair_ties_pick_smallest_pair() {
    let sq = Geometry::polygon(
        vec![(0.0, 0.0).into(), (1.0, 0.0).into(), (1.0, 1.0).into(), (0.0, 1.0).into(), (0.0, 0.0).into()],
        vec![],
    )
    .unwrap();
    assert_eq!(farthest_pair(&sq), (Point2::new(0.0, 0.0), Point2::new(1.0, 1.0)));
    let p = Geometry::point(2.0, 3.0).unwrap();
    assert_eq!(farthest_pair(&p), (Point2::new(2.0, 3.0), Point2::new(2.0, 3.0)));
    assert_eq!(orientation_angle(&p), 0.0);
}

#[test]
fn orientation_examples() {
    let seg = |a: (f64, f64), b: (f64, f64)| Geometry::line_string(vec![a.into(), b.into()]).unwrap();
    assert_eq!(orientation_angle(&seg((0.0, 0.0), (5.0, 0.0))), 0.0);
    assert!((orientation_angle(&seg((0.0, 0.0), (1.0, 1.0))) - PI / 4.0).abs() < 1e-15);
    assert!((orientation_angle(&seg((1.0, 1.0), (0.0, 0.0))) - PI / 4.0).abs() < 1e-15);
}

#[test]
fn sinuosity_examples() {
    let l = |pts: &[(f64, f64)]| LineString::new(pts.iter().map(|&p| p.into()).collect()).unwrap();
    assert_eq!(sinuosity(&l(&[(0.0, 0.0), (2.0, 0.0)])), 0.0);
    assert_eq!(sinuosity(&l(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 0.0)])), 1.0);
    let u = l(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]);
    assert!((sinuosity(&u) - (1.0 - (-2.0f64).exp())).abs() < 1e-12);
    assert!((sinuosity(&u) - 0.864665).abs() < 1e-6);
}

#[test]
fn transform_identity_and_full_turn() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let g = random_shape(&frame(), &mut rng);
        assert_eq!(transform(&g, &AffineTransform::identity()), g);
        let t = transform(&g, &AffineTransform::new(2.0 * PI, 1.0, 0.0, 0.0).unwrap());
        for (a, b) in g.vertices().iter().zip(t.vertices()) {
            assert!(a.distance(b) < 1e-9);
        }
    }
}

#[test]
fn normalized_shapes_stay_in_frame() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = Frame::new(-10.0, 5.0, 90.0, 55.0).unwrap();
    let shapes: Vec<Geometry> = (0..20).map(|_| random_shape(&frame(), &mut rng)).collect();
    for i in 0..10_000 {
        let g = normalize_to_frame(&shapes[i % shapes.len()], &f, ScaleRange::default(), &mut rng).unwrap();
        assert!(f.rect().contains_rect(&g.bbox()));
    }
}

#[test]
fn shape_too_large_for_frame_is_an_error() {
    let g = Geometry::line_string(vec![Point2::new(0.0, 0.0), Point2::new(10.0, 0.0)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let s = ScaleRange {
        min: 20.0,
        max: f64::INFINITY,
    };
    assert!(normalize_to_frame(&g, &frame(), s, &mut rng).is_err());
}

fn shape_strategy() -> impl Strategy<Value = Geometry> {
    any::<u64>().prop_map(|seed| random_shape(&frame(), &mut ChaCha8Rng::seed_from_u64(seed)))
}

fn polygon_strategy() -> impl Strategy<Value = Geometry> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let g = random_shape(&frame(), &mut rng);
            if matches!(g, Geometry::Polygon(_)) {
                return g;
            }
        }
    })
}

fn line_strategy() -> impl Strategy<Value = Geometry> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let g = random_shape(&frame(), &mut rng);
            if matches!(g, Geometry::LineString(_)) {
                return g;
            }
        }
    })
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_is_translation_invariant(g in shape_strategy(), px in -20.0..120.0f64, py in -20.0..120.0f64,
                                         dx in -50.0..50.0f64, dy in -50.0..50.0f64) {
        let p = Point2::new(px, py);
        let t = transform(&g, &AffineTransform::new(0.0, 1.0, dx, dy).unwrap());
        let d0 = min_distance(&g, p);
        let d1 = min_distance(&t, Point2::new(px + dx, py + dy));
        prop_assert!(d0 >= 0.0);
        prop_assert!((d0 - d1).abs() < 1e-9, "{} vs {}", d0, d1);
    }

    #[test]
    fn symmetric_relations(a in polygon_strategy(), b in polygon_strategy(), l1 in line_strategy(), l2 in line_strategy()) {
        for k in [RelationKind::PolygonIntersectsPolygon, RelationKind::PolygonBordersPolygon] {
            prop_assert_eq!(relation(k, &a, &b).unwrap(), relation(k, &b, &a).unwrap());
        }
        let k = RelationKind::LineLineIntersect;
        prop_assert_eq!(relation(k, &l1, &l2).unwrap(), relation(k, &l2, &l1).unwrap());
    }

    #[test]
    fn orientation_follows_rotation(g in shape_strategy(), theta in 0.0..(2.0 * PI)) {
        let (a, b) = farthest_pair(&g);
        prop_assume!(a.distance(b) > 1e-6);
        let r = transform(&g, &AffineTransform::new(theta, 1.0, 0.0, 0.0).unwrap());
        let want = (orientation_angle(&g) + theta).rem_euclid(PI);
        prop_assert!(angle_gap(orientation_angle(&r), want) < 1e-6);
    }

    #[test]
    fn shape_metrics_survive_similarity(l in line_strategy(), p in polygon_strategy(), theta in 0.0..(2.0 * PI),
                                        k in 0.1..10.0f64, dx in -100.0..100.0f64, dy in -100.0..100.0f64) {
        let t = AffineTransform::new(theta, k, dx, dy).unwrap();
        let (Geometry::LineString(l0), Geometry::LineString(l1)) = (&l, &transform(&l, &t)) else { unreachable!() };
        prop_assert!((sinuosity(l0) - sinuosity(l1)).abs() < 1e-9);
        let (Geometry::Polygon(p0), Geometry::Polygon(p1)) = (&p, &transform(&p, &t)) else { unreachable!() };
        prop_assert!((char_ratio(p0).unwrap() - char_ratio(p1).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn hull_area_bounds_polygon_area(p in polygon_strategy()) {
        let hull = convex_hull(&p);
        let a = area(&p).unwrap();
        prop_assert!(shoelace(&hull) >= a * (1.0 - 1e-12));
        let Geometry::Polygon(poly) = &p else { unreachable!() };
        let c = char_ratio(poly).unwrap();
        prop_assert!(c > 0.0 && c <= 1.0);
    }
}
