//! Thresholding a fine MPP encoding: stored entries and the error it costs.
//!
//! Usage: cargo run --example sparse

use mppenc::codecs::parse_wkt;
use mppenc::encoding::{densify, make_grids, sparsify, MppConfig};
use mppenc::geometry::Frame;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (refs, _) = make_grids(&Frame::sized(100.0, 100.0)?, 6.25)?;
    let cfg = MppConfig::new(refs);
    let a = cfg.encode(&parse_wkt("LINESTRING (10 10, 40 35, 55 30)")?)?;
    let b = cfg.encode(&parse_wkt("POLYGON ((50 50, 70 50, 70 80, 50 80, 50 50))")?)?;
    let exact: f64 = a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum();

    println!("{:>10} {:>6} {:>6} {:>12} {:>12}", "threshold", "nnz a", "nnz b", "max drop", "dot");
    for t in [0.0, 0.01, (-3.0f64).exp(), 0.1, 0.5] {
        let (sa, sb) = (sparsify(&a, t)?, sparsify(&b, t)?);
        let drop = a
            .values()
            .iter()
            .zip(densify(&sa).values())
            .map(|(x, y)| x - y)
            .fold(0.0, f64::max);
        println!("{t:>10.4} {:>6} {:>6} {drop:>12.6} {:>12.6}", sa.nnz(), sb.nnz(), sa.dot(&sb)?);
    }
    println!("dense dot {exact:.6} over {} entries", a.len());
    Ok(())
}
