//! MPP and DIV encodings of a point, a line and a polygon on a 400 x 300
//! frame with reference points every 100 units.
//!
//! Usage: cargo run --example encode_shapes

use mppenc::codecs::parse_wkt;
use mppenc::encoding::{make_grids, DenseEncoding, DivConfig, MppConfig, ReferenceGrid};
use mppenc::geometry::Frame;

/// Prints the vector as the grid it came from, top row first.
fn show(grid: &ReferenceGrid, e: &DenseEncoding) {
    for row in (0..grid.ny()).rev() {
        let cells: Vec<String> = (0..grid.nx())
            .map(|col| format!("{:6.3}", e.values()[row * grid.nx() + col]))
            .collect();
        println!("    {}", cells.join(" "));
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let frame = Frame::sized(400.0, 300.0)?;
    let (refs, tiles) = make_grids(&frame, 100.0)?;
    println!("grid {} ({} values)", refs.id(), refs.len());
    let mpp = MppConfig::new(refs.clone());
    let div = DivConfig::new(tiles);

    for wkt in [
        "POINT (130 210)",
        "LINESTRING (20 40, 180 90, 260 60, 380 250)",
        "POLYGON ((220 120, 330 140, 300 270, 200 240, 220 120))",
    ] {
        let g = parse_wkt(wkt)?;
        println!("\n{wkt}");
        println!("  mpp (s = {}):", mpp.scale());
        show(&refs, &mpp.encode(&g)?);
        println!("  div:");
        show(&refs, &div.encode(&g)?);
    }
    Ok(())
}
