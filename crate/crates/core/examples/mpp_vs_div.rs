//! Two geometries that DIV cannot tell apart but MPP can: points in the same
//! tile, and parallel lines crossing the same tiles.
//!
//! Usage: cargo run --example mpp_vs_div

use mppenc::codecs::parse_wkt;
use mppenc::encoding::{make_grids, DivConfig, MppConfig};
use mppenc::geometry::Frame;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let frame = Frame::sized(100.0, 100.0)?;
    let (refs, tiles) = make_grids(&frame, 25.0)?;
    let mpp = MppConfig::new(refs);
    let div = DivConfig::new(tiles);

    let pairs = [
        ("points in one tile", "POINT (30 30)", "POINT (45 40)"),
        ("parallel lines", "LINESTRING (5 60, 95 60)", "LINESTRING (5 70, 95 70)"),
        (
            "nested squares",
            "POLYGON ((30 30, 45 30, 45 45, 30 45, 30 30))",
            "POLYGON ((27 27, 48 27, 48 48, 27 48, 27 27))",
        ),
    ];
    println!("{:<20} {:>10} {:>10}", "pair", "mpp dist", "div dist");
    for (name, a, b) in pairs {
        let (ga, gb) = (parse_wkt(a)?, parse_wkt(b)?);
        let dm = mpp.encode(&ga)?.distance(&mpp.encode(&gb)?)?;
        let dd = div.encode(&ga)?.distance(&div.encode(&gb)?)?;
        println!("{name:<20} {dm:>10.4} {dd:>10.4}");
    }
    Ok(())
}
