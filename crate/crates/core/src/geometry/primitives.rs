//! Segment-level kernels shared by distance, predicates and the encoders.

use super::{Point2, Rect};

/// Twice the signed area of triangle (a, b, c); positive when c is left of a→b.
#[inline]
pub(crate) fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Assumes c is collinear with a, b.
#[inline]
fn within_span(a: Point2, b: Point2, c: Point2) -> bool {
    c.x >= a.x.min(b.x) && c.x <= a.x.max(b.x) && c.y >= a.y.min(b.y) && c.y <= a.y.max(b.y)
}

/// Closed segment intersection, including touching and collinear overlap.
pub(crate) fn segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    (o1 == 0.0 && within_span(a, b, c))
        || (o2 == 0.0 && within_span(a, b, d))
        || (o3 == 0.0 && within_span(c, d, a))
        || (o4 == 0.0 && within_span(c, d, b))
}

/// Closest point on segment a→b to p.
#[inline]
pub(crate) fn closest_on_segment(p: Point2, a: Point2, b: Point2) -> Point2 {
    let ab = b.sub(a);
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return a;
    }
    let t = (p.sub(a).dot(ab) / len2).clamp(0.0, 1.0);
    a.add(ab.scale(t))
}

#[inline]
pub(crate) fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    p.distance(closest_on_segment(p, a, b))
}

/// Closed segment / closed rectangle intersection (Liang–Barsky clipping).
pub(crate) fn segment_intersects_rect(a: Point2, b: Point2, r: &Rect) -> bool {
    if r.contains_point(a) || r.contains_point(b) {
        return true;
    }
    let d = b.sub(a);
    let mut t0: f64 = 0.0;
    let mut t1: f64 = 1.0;
    for (p, q) in [
        (-d.x, a.x - r.min.x),
        (d.x, r.max.x - a.x),
        (-d.y, a.y - r.min.y),
        (d.y, r.max.y - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return false;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
            if t0 > t1 {
                return false;
            }
        }
    }
    true
}

/// Parameters along a→b where it meets the closed segment c→d. Collinear
/// overlaps (within `tol`) contribute the projections of c and d.
pub(crate) fn split_params(a: Point2, b: Point2, c: Point2, d: Point2, tol: f64, out: &mut Vec<f64>) {
    let r = b.sub(a);
    let s = d.sub(c);
    let rr = r.dot(r);
    if rr == 0.0 {
        return;
    }
    let denom = r.cross(s);
    let scale = rr.sqrt() * s.dot(s).sqrt();
    if denom.abs() > 1e-14 * scale {
        let ca = c.sub(a);
        let t = ca.cross(s) / denom;
        let u = ca.cross(r) / denom;
        let slack = tol / rr.sqrt();
        let uslack = if s.dot(s) > 0.0 { tol / s.dot(s).sqrt() } else { 0.0 };
        if t >= -slack && t <= 1.0 + slack && u >= -uslack && u <= 1.0 + uslack {
            out.push(t.clamp(0.0, 1.0));
        }
    } else {
        let len = rr.sqrt();
        let dist_c = orient(a, b, c).abs() / len;
        let dist_d = orient(a, b, d).abs() / len;
        if dist_c <= tol && dist_d <= tol {
            for q in [c, d] {
                let t = q.sub(a).dot(r) / rr;
                if (0.0..=1.0).contains(&t) {
                    out.push(t);
                }
            }
        }
    }
}
