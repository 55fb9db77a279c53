//! DBSCAN over MPP encodings of the built-in shape set, at several radii.
//!
//! Usage: cargo run --example cluster_shapes

use std::collections::BTreeMap;

use mppenc::clustering::{dbscan, DbscanParams};
use mppenc::encoding::{make_grids, MppConfig};
use mppenc::fixtures::{cluster_shapes, frame_of, CLUSTER_FRAME, CLUSTER_RESOLUTION};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (refs, _) = make_grids(&frame_of(CLUSTER_FRAME), CLUSTER_RESOLUTION)?;
    let cfg = MppConfig::new(refs);
    let shapes = cluster_shapes();
    let encodings = shapes.iter().map(|(_, g)| cfg.encode(g)).collect::<Result<Vec<_>, _>>()?;

    for eps in [0.6, 0.8, 1.0] {
        let labels = dbscan(&encodings, &DbscanParams::with_eps(eps)?)?;
        println!("eps {eps}: {} clusters, {} noise", labels.n_clusters(), labels.noise().len());
        let mut groups: BTreeMap<i64, Vec<&str>> = BTreeMap::new();
        for ((cat, _), &l) in shapes.iter().zip(&labels.labels) {
            let g = groups.entry(l).or_default();
            if !g.contains(cat) {
                g.push(cat);
            }
        }
        for (l, cats) in groups {
            println!("  {l:>2}: {}", cats.join(" + "));
        }
    }
    Ok(())
}
