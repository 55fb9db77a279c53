//! Reading and writing WKT and GeoJSON, including multi-part geometries and
//! feature properties.
//!
//! Usage: cargo run --example codecs

use mppenc::codecs::{parse_geojson, parse_wkt, write_geojson, write_wkt};
use mppenc::encoding::{make_grids, MppConfig};
use mppenc::geometry::Frame;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = parse_wkt("multipolygon (((0 0, 10 0, 10 10, 0 10, 0 0)), ((20 20, 30 20, 25 28, 20 20)))")?;
    println!("{}", write_wkt(&g));

    let doc = r#"{"type": "FeatureCollection", "features": [
        {"type": "Feature", "properties": {"name": "river", "lanes": null},
         "geometry": {"type": "MultiLineString", "coordinates": [[[0, 5], [40, 9.5]], [[45, 9], [90, 30, 12]]]}},
        {"type": "Feature", "properties": {"name": "well"},
         "geometry": {"type": "Point", "coordinates": [60.125, 70]}}]}"#;
    let features = parse_geojson(doc)?;
    for f in &features {
        println!(
            "{} {} dropped z: {}",
            f.property("name").and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
            f.geometry.kind(),
            f.warnings.dropped_dimensions
        );
    }

    // Multi-part geometries encode like any other: distance to the nearest part.
    let (refs, _) = make_grids(&Frame::sized(100.0, 100.0)?, 50.0)?;
    let cfg = MppConfig::new(refs);
    let mut out = Vec::new();
    for mut f in features {
        let e = cfg.encode(&f.geometry)?;
        f.set_property("mpp", e.values().to_vec());
        out.push(f);
    }
    print!("{}", write_geojson(&out));
    Ok(())
}
