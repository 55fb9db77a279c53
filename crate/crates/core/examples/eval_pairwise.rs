//! Probe-model relation detection from concatenated pair encodings.
//!
//! Usage: cargo run --release --example eval_pairwise [PAIRS_PER_RELATION] [SEED] [RESOLUTION]

use std::time::Instant;

use mppenc::encoding::Method;
use mppenc::eval::{generate_pairs, run_pairwise_experiment, PairSpec, PairwiseExperiment, TrainConfig};
use mppenc::geometry::{Frame, RelationKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1000);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let res: f64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(12.5);

    let spec = PairSpec::default();
    let t = Instant::now();
    let sets = RelationKind::ALL
        .iter()
        .map(|&k| Ok((k, generate_pairs(k, n / 2, n - n / 2, &spec, seed)?)))
        .collect::<Result<Vec<_>, mppenc::eval::EvalError>>()?;
    eprintln!("generated pairs in {:.1?}", t.elapsed());

    let exp = PairwiseExperiment {
        frame: Frame::sized(100.0, 100.0)?,
        methods: vec![Method::Mpp, Method::Div],
        resolutions: vec![res],
        train: TrainConfig {
            seed,
            ..TrainConfig::default()
        },
    };
    let t = Instant::now();
    let report = run_pairwise_experiment(&sets, &exp)?;
    println!("{:<34} {:>8} {:>8}", "relation", "mpp", "div");
    for (k, _) in &sets {
        let m = report.get(Method::Mpp, res, k.name()).unwrap();
        let d = report.get(Method::Div, res, k.name()).unwrap();
        println!("{:<34} {:>8.4} {:>8.4}", k.name(), m.value, d.value);
    }
    eprintln!("trained {} cells in {:.1?}", report.rows.len(), t.elapsed());
    Ok(())
}
