//! Probe-model property retrieval: MPP versus DIV across resolutions.
//!
//! Usage: cargo run --release --example eval_properties [N_PER_KIND] [SEED] [TASK,...]

use std::time::Instant;

use mppenc::encoding::Method;
use mppenc::eval::{
    generate_corpus, run_property_experiment, CorpusSpec, OrientationPooling, PropertyExperiment, PropertyTask,
    TrainConfig,
};
use mppenc::geometry::Frame;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1000);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let tasks: Vec<PropertyTask> = match args.next() {
        Some(list) => list
            .split(',')
            .map(|t| PropertyTask::from_name(t).ok_or(format!("unknown task '{t}'")))
            .collect::<Result<_, _>>()?,
        None => PropertyTask::ALL.to_vec(),
    };

    let corpus = generate_corpus(&CorpusSpec {
        n_lines: n,
        n_polygons: n,
        seed,
        ..CorpusSpec::default()
    })?;
    let exp = PropertyExperiment {
        frame: Frame::sized(100.0, 100.0)?,
        methods: vec![Method::Mpp, Method::Div],
        resolutions: vec![25.0, 12.5],
        tasks,
        train: TrainConfig {
            seed,
            ..TrainConfig::default()
        },
        pooling: OrientationPooling::Pooled,
    };
    let t = Instant::now();
    let report = run_property_experiment(&corpus, &exp)?;
    println!("{:<22} {:>6} {:>8} {:>8}", "task", "res", "mpp", "div");
    for &res in &exp.resolutions {
        for task in &exp.tasks {
            let m = report.get(Method::Mpp, res, task.name()).unwrap();
            let d = report.get(Method::Div, res, task.name()).unwrap();
            println!("{:<22} {:>6} {:>8.4} {:>8.4}", task.name(), res, m.value, d.value);
        }
    }
    eprintln!("trained {} cells in {:.1?}", report.rows.len(), t.elapsed());
    Ok(())
}
