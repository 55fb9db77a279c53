//! Recovering a point from its MPP encoding by intersecting exclusion
//! circles.
//!
//! Usage: cargo run --example decode_point [X] [Y]

use mppenc::encoding::{decode_point, exclusion_radius, make_grids, MppConfig};
use mppenc::geometry::{Frame, Geometry, Point2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let x: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(37.25);
    let y: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(81.5);

    let (refs, _) = make_grids(&Frame::sized(100.0, 100.0)?, 50.0)?;
    let cfg = MppConfig::new(refs);
    let p = Point2::new(x, y);
    let e = cfg.encode(&Geometry::Point(p))?;
    for (v, r) in e.values().iter().zip(cfg.grid().points()) {
        let d = exclusion_radius(*v, cfg.scale())?;
        println!("ref ({:>5}, {:>5})  value {v:.6}  radius {d:.6}", r.x, r.y);
    }
    let got = decode_point(&e, &cfg)?;
    println!(
        "encoded ({x}, {y}) -> decoded ({:.9}, {:.9}), error {:.1e}, residual {:.1e}",
        got.point.x,
        got.point.y,
        got.point.distance(p),
        got.residual
    );
    Ok(())
}
