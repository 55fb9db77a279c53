//! A point moving along a path: MPP changes at every step, DIV only when the
//! point crosses into another tile.
//!
//! Usage: cargo run --example continuity [STEPS]

use std::collections::BTreeSet;

use mppenc::encoding::{make_grids, DivConfig, MppConfig};
use mppenc::fixtures::{frame_of, sample_path, trajectory_path, TRAJECTORY_FRAME, TRAJECTORY_RESOLUTION};
use mppenc::geometry::Geometry;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let steps: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(50);
    let (refs, tiles) = make_grids(&frame_of(TRAJECTORY_FRAME), TRAJECTORY_RESOLUTION)?;
    let (mpp, div) = (MppConfig::new(refs), DivConfig::new(tiles));

    let mut seen_mpp = BTreeSet::new();
    let mut seen_div = BTreeSet::new();
    let mut prev: Option<Vec<f64>> = None;
    for (k, p) in sample_path(&trajectory_path(), steps).into_iter().enumerate() {
        let g = Geometry::Point(p);
        let m = mpp.encode(&g)?.into_values();
        let d = div.encode(&g)?.into_values();
        let change = prev
            .as_ref()
            .map(|q| q.iter().zip(&m).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .unwrap_or(0.0);
        let tile = d.iter().position(|&v| v == 1.0).unwrap_or(0);
        println!("{k:>3} ({:>7.2}, {:>7.2})  tile {tile}  max mpp change {change:.4}", p.x, p.y);
        seen_mpp.insert(m.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        seen_div.insert(d.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        prev = Some(m);
    }
    println!("distinct vectors: mpp {}, div {}", seen_mpp.len(), seen_div.len());
    Ok(())
}
