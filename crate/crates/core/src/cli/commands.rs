use std::collections::HashSet;
use std::path::Path;

use serde_json::{json, Value};

use super::config::{pick, ConfigFile};
use super::svg::{bar_chart, Series};
use super::{CliError, Command, CommonArgs, Format, Output, Pooling};
use crate::clustering::{dbscan, DbscanParams};
use crate::codecs::{parse_geojson, parse_wkt, write_geojson, Feature};
use crate::encoding::io::{read_csv, write_csv, EncodedRow, EncodingDocument, GridInfo};
use crate::encoding::{decode_point, make_grids, DivConfig, Encoder, Method, MppConfig, ReferenceGrid};
use crate::eval::{
    generate_corpus, generate_pairs, run_pairwise_experiment, run_property_experiment, CorpusSpec, EvalReport,
    OrientationPooling, PairSample, PairSpec, PairwiseExperiment, PropertyExperiment, PropertySample, PropertyTask,
    TrainConfig,
};
use crate::fixtures;
use crate::geometry::{Frame, Geometry, GeometryKind, RelationKind};

const DEFAULT_FRAME: (f64, f64) = (100.0, 100.0);
const DEFAULT_RESOLUTION: f64 = 25.0;
const DEFAULT_EPS: f64 = 0.6;
const DEFAULT_PROPERTY_RESOLUTIONS: [f64; 2] = [25.0, 12.5];
const DEFAULT_PAIR_RESOLUTIONS: [f64; 1] = [12.5];
const DEFAULT_PAIRS: usize = 1000;

pub(super) struct Context<'a> {
    pub common: &'a CommonArgs,
    pub config: &'a ConfigFile,
}

/// What a command reports back for the manifest. `failure` is returned to
/// the caller after the manifest has been written.
pub(super) struct Outcome {
    pub seed: u64,
    pub config: Value,
    pub failure: Option<CliError>,
}

impl Context<'_> {
    fn seed(&self) -> u64 {
        pick(self.common.seed, self.config.seed, 0)
    }

    fn frame(&self, default: (f64, f64)) -> Result<Frame, CliError> {
        let (w, h) = match (&self.common.frame, self.config.frame) {
            (Some(v), _) => (v[0], v[1]),
            (None, Some([w, h])) => (w, h),
            (None, None) => default,
        };
        Ok(Frame::sized(w, h)?)
    }

    fn resolution(&self, default: f64) -> f64 {
        pick(self.common.resolution, self.config.resolution, default)
    }

    fn scale(&self) -> Option<f64> {
        self.common.scale.or(self.config.scale)
    }

    /// `--resolutions` > `--resolution` > config `resolutions` > config
    /// `resolution` > `default`.
    fn resolutions(&self, flag: &Option<Vec<f64>>, default: &[f64]) -> Vec<f64> {
        flag.clone()
            .or(self.common.resolution.map(|r| vec![r]))
            .or(self.config.resolutions.clone())
            .or(self.config.resolution.map(|r| vec![r]))
            .unwrap_or_else(|| default.to_vec())
    }

    fn methods(&self, flag: &Option<Vec<Method>>) -> Vec<Method> {
        pick(flag.clone(), self.config.methods.clone(), vec![Method::Mpp, Method::Div])
    }

    fn train(&self, epochs: Option<usize>) -> TrainConfig {
        let base = self.config.train.clone().unwrap_or_default();
        TrainConfig {
            seed: self.seed(),
            max_epochs: pick(epochs, self.config.epochs, base.max_epochs),
            ..base
        }
    }

    fn relations(&self, flag: &Option<Vec<String>>) -> Result<Vec<RelationKind>, CliError> {
        match flag.clone().or(self.config.relations.clone()) {
            None => Ok(RelationKind::ALL.to_vec()),
            Some(names) => names
                .iter()
                .map(|n| {
                    RelationKind::from_name(n).ok_or_else(|| {
                        let known: Vec<&str> = RelationKind::ALL.iter().map(|k| k.name()).collect();
                        CliError::Usage(format!("unknown relation '{n}' (expected one of {})", known.join(", ")))
                    })
                })
                .collect(),
        }
    }

    fn mpp(&self, refs: ReferenceGrid) -> Result<MppConfig, CliError> {
        Ok(match self.scale() {
            Some(s) => MppConfig::with_scale(refs, s)?,
            None => MppConfig::new(refs),
        })
    }
}

pub(super) fn dispatch(ctx: &Context, cmd: &Command, out: &mut Output) -> Result<Outcome, CliError> {
    match cmd {
        Command::Encode {
            input,
            method,
            threshold,
            format,
        } => encode(ctx, input, *method, *threshold, *format, out),
        Command::DecodePoint { input } => decode(ctx, input, out),
        Command::Cluster { input, eps, min_pts } => cluster(ctx, input.as_deref(), *eps, *min_pts, out),
        Command::Continuity { trajectory, steps } => continuity(ctx, trajectory.as_deref(), *steps, out),
        Command::GenCorpus {
            lines,
            polygons,
            pairs,
            relations,
        } => gen_corpus(ctx, *lines, *polygons, *pairs, relations, out),
        Command::EvalProperties {
            corpus,
            lines,
            polygons,
            resolutions,
            methods,
            tasks,
            pooling,
            epochs,
        } => eval_properties(
            ctx,
            corpus.as_deref(),
            (*lines, *polygons),
            resolutions,
            methods,
            tasks,
            *pooling,
            *epochs,
            out,
        ),
        Command::EvalPairwise {
            pairs_file,
            pairs,
            relations,
            resolutions,
            methods,
            epochs,
        } => eval_pairwise(ctx, pairs_file.as_deref(), *pairs, relations, resolutions, methods, *epochs, out),
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}

fn looks_like_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

/// Features of a GeoJSON file, or one feature per non-blank line of a WKT
/// file.
fn read_features(path: &Path) -> Result<Vec<Feature>, CliError> {
    let text = read_text(path)?;
    if looks_like_json(&text) {
        return Ok(parse_geojson(&text)?);
    }
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let g = parse_wkt(line)
            .map_err(|e| CliError::Data(format!("feature {} (line {}): {e}", out.len(), ln + 1)))?;
        out.push(Feature::new(g));
    }
    Ok(out)
}

fn encoder(method: Method, ctx: &Context, frame: &Frame, resolution: f64) -> Result<Box<dyn Encoder>, CliError> {
    let (refs, tiles) = make_grids(frame, resolution)?;
    Ok(match method {
        Method::Mpp => Box::new(ctx.mpp(refs)?),
        Method::Div => Box::new(DivConfig::new(tiles)),
    })
}

fn encode_all(enc: &dyn Encoder, geoms: &[(String, &Geometry)]) -> Result<Vec<EncodedRow>, CliError> {
    geoms
        .iter()
        .enumerate()
        .map(|(i, (id, g))| {
            let encoding = enc.encode(g).map_err(|e| CliError::Data(format!("feature {i}: {e}")))?;
            Ok(EncodedRow { id: id.clone(), encoding })
        })
        .collect()
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn encode(
    ctx: &Context,
    input: &Path,
    method: Option<Method>,
    threshold: Option<f64>,
    format: Option<Format>,
    out: &mut Output,
) -> Result<Outcome, CliError> {
    let method = pick(method, ctx.config.method, Method::Mpp);
    let frame = ctx.frame(DEFAULT_FRAME)?;
    let resolution = ctx.resolution(DEFAULT_RESOLUTION);
    let threshold = threshold.or(ctx.config.threshold);
    let config_format = match ctx.config.format.as_deref() {
        None => None,
        Some("csv") => Some(Format::Csv),
        Some("json") => Some(Format::Json),
        Some(f) => return Err(CliError::Data(format!("config: unknown format '{f}'"))),
    };
    let format = format
        .or(config_format)
        .unwrap_or(if threshold.is_some() { Format::Json } else { Format::Csv });
    if threshold.is_some() && format == Format::Csv {
        return Err(CliError::Usage("--threshold writes sparse rows and needs --format json".into()));
    }

    let features = read_features(input)?;
    let enc = encoder(method, ctx, &frame, resolution)?;
    let scale = (method == Method::Mpp).then(|| ctx.scale().unwrap_or(resolution));
    let geoms: Vec<(String, &Geometry)> =
        features.iter().enumerate().map(|(i, f)| (i.to_string(), &f.geometry)).collect();
    let rows = encode_all(enc.as_ref(), &geoms)?;
    out.phase("encode");

    let file = match format {
        Format::Csv => {
            out.write("encodings.csv", &write_csv(&rows, enc.dim())?)?;
            "encodings.csv"
        }
        Format::Json => {
            let (refs, _) = make_grids(&frame, resolution)?;
            let doc = EncodingDocument::from_rows(GridInfo::of(&refs), method, scale, &rows, threshold)?;
            out.write("encodings.json", &doc.to_json())?;
            "encodings.json"
        }
    };
    println!("encoded {} geometries ({}, {} values each) -> {}", rows.len(), method.name(), enc.dim(), out.dir().join(file).display());
    Ok(Outcome {
        seed: ctx.seed(),
        config: json!({
            "input": input.display().to_string(),
            "frame": frame,
            "resolution": resolution,
            "method": method,
            "scale": scale,
            "threshold": threshold,
            "format": format,
        }),
        failure: None,
    })
}

/// Rows of an encoding file with the grid they belong to: JSON documents
/// carry their grid, CSV files use the grid from flags and config.
fn read_encodings(
    ctx: &Context,
    path: &Path,
    default_frame: (f64, f64),
    default_resolution: f64,
) -> Result<(Vec<EncodedRow>, ReferenceGrid, Option<f64>, Option<Method>), CliError> {
    let text = read_text(path)?;
    if looks_like_json(&text) {
        let doc = EncodingDocument::from_json(&text)?;
        let (refs, _) = doc.grid.grids()?;
        Ok((doc.dense_rows()?, refs, doc.scale, Some(doc.method)))
    } else {
        let frame = ctx.frame(default_frame)?;
        let (refs, _) = make_grids(&frame, ctx.resolution(default_resolution))?;
        let rows = read_csv(&text, refs.id())?;
        if let Some(r) = rows.iter().find(|r| r.encoding.len() != refs.len()) {
            return Err(CliError::Data(format!(
                "row '{}' has {} values but the grid has {} cells",
                r.id,
                r.encoding.len(),
                refs.len()
            )));
        }
        Ok((rows, refs, None, None))
    }
}

fn decode(ctx: &Context, input: &Path, out: &mut Output) -> Result<Outcome, CliError> {
    let (rows, refs, doc_scale, method) = read_encodings(ctx, input, DEFAULT_FRAME, DEFAULT_RESOLUTION)?;
    if method == Some(Method::Div) {
        return Err(CliError::Data("decode-point needs MPP encodings, found DIV".into()));
    }
    let scale = ctx.scale().or(doc_scale).unwrap_or(refs.spacing());
    let grid = GridInfo::of(&refs);
    let cfg = MppConfig::with_scale(refs, scale)?;

    let mut features = Vec::new();
    let mut errors = String::from("id,error\n");
    let mut failed = 0usize;
    let mut max_residual = 0.0f64;
    for r in &rows {
        match decode_point(&r.encoding, &cfg) {
            Ok(d) => {
                let mut f = Feature::new(Geometry::Point(d.point));
                f.set_property("id", r.id.as_str());
                f.set_property("residual", d.residual);
                max_residual = max_residual.max(d.residual);
                features.push(f);
            }
            Err(e) => {
                failed += 1;
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record([r.id.as_str(), &e.to_string()])
                    .map_err(|e| CliError::Internal(e.to_string()))?;
                errors.push_str(&String::from_utf8(w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?).expect("utf-8"));
            }
        }
    }
    out.phase("decode");
    out.write("points.geojson", &write_geojson(&features))?;
    out.write("errors.csv", &errors)?;
    out.write(
        "summary.json",
        &pretty(&json!({
            "rows": rows.len(),
            "decoded": features.len(),
            "failed": failed,
            "max_residual": max_residual,
        })),
    )?;
    println!("decoded {} of {} rows, max residual {max_residual:e}", features.len(), rows.len());
    let failure = (failed > 0).then(|| CliError::Data(format!("{failed} rows could not be decoded (see errors.csv)")));
    Ok(Outcome {
        seed: ctx.seed(),
        config: json!({
            "input": input.display().to_string(),
            "grid": grid,
            "scale": scale,
        }),
        failure,
    })
}

fn cluster(
    ctx: &Context,
    input: Option<&Path>,
    eps: Option<f64>,
    min_pts: Option<usize>,
    out: &mut Output,
) -> Result<Outcome, CliError> {
    let params = DbscanParams::new(
        pick(eps, ctx.config.eps, DEFAULT_EPS),
        pick(min_pts, ctx.config.min_pts, DbscanParams::DEFAULT_MIN_PTS),
    )?;
    let (rows, grid, source) = match input {
        Some(path) => {
            let (rows, refs, _, _) = read_encodings(ctx, path, DEFAULT_FRAME, DEFAULT_RESOLUTION)?;
            (rows, GridInfo::of(&refs), path.display().to_string())
        }
        None => {
            let frame = ctx.frame(fixtures::CLUSTER_FRAME)?;
            let (refs, _) = make_grids(&frame, ctx.resolution(fixtures::CLUSTER_RESOLUTION))?;
            let grid = GridInfo::of(&refs);
            let enc = ctx.mpp(refs)?;
            let shapes = fixtures::cluster_shapes();
            let geoms: Vec<(String, &Geometry)> =
                shapes.iter().enumerate().map(|(i, (c, g))| (format!("{i}:{c}"), g)).collect();
            (encode_all(&enc, &geoms)?, grid, "built-in shapes".to_string())
        }
    };
    let vectors: Vec<_> = rows.iter().map(|r| r.encoding.clone()).collect();
    let labels = dbscan(&vectors, &params)?;
    out.phase("cluster");

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["id", "label"]).map_err(|e| CliError::Internal(e.to_string()))?;
    for (r, l) in rows.iter().zip(&labels.labels) {
        w.write_record([r.id.as_str(), &l.to_string()])
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let text = String::from_utf8(w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?).expect("utf-8");
    out.write("labels.csv", &text)?;
    let n_clusters = labels.n_clusters();
    let noise = labels.noise().len();
    out.write(
        "summary.json",
        &pretty(&json!({
            "vectors": rows.len(),
            "clusters": n_clusters,
            "noise": noise,
        })),
    )?;
    println!("clusters={n_clusters} noise={noise}");
    Ok(Outcome {
        seed: ctx.seed(),
        config: json!({
            "input": source,
            "grid": grid,
            "eps": params.eps(),
            "min_pts": params.min_pts(),
        }),
        failure: None,
    })
}

fn distinct(rows: &[EncodedRow]) -> usize {
    rows.iter()
        .map(|r| r.encoding.values().iter().map(|v| v.to_bits()).collect::<Vec<u64>>())
        .collect::<HashSet<_>>()
        .len()
}

fn continuity(
    ctx: &Context,
    trajectory: Option<&Path>,
    steps: Option<usize>,
    out: &mut Output,
) -> Result<Outcome, CliError> {
    let steps = pick(steps, ctx.config.steps, 50);
    if steps < 2 {
        return Err(CliError::Data("continuity needs at least 2 steps".into()));
    }
    let (path, frame, resolution, source) = match trajectory {
        None => (
            fixtures::trajectory_path(),
            ctx.frame(fixtures::TRAJECTORY_FRAME)?,
            ctx.resolution(fixtures::TRAJECTORY_RESOLUTION),
            "built-in trajectory".to_string(),
        ),
        Some(p) => {
            let features = read_features(p)?;
            let path = match features.first().map(|f| &f.geometry) {
                Some(Geometry::LineString(l)) => l.points().to_vec(),
                _ => return Err(CliError::Data(format!("{}: expected a LineString", p.display()))),
            };
            (path, ctx.frame(DEFAULT_FRAME)?, ctx.resolution(DEFAULT_RESOLUTION), p.display().to_string())
        }
    };
    let points = fixtures::sample_path(&path, steps);
    let (refs, tiles) = make_grids(&frame, resolution)?;
    let mpp = ctx.mpp(refs)?;
    let div = DivConfig::new(tiles);
    let geoms: Vec<Geometry> = points.iter().map(|p| Geometry::Point(*p)).collect();
    let named: Vec<(String, &Geometry)> = geoms.iter().enumerate().map(|(i, g)| (i.to_string(), g)).collect();
    let mpp_rows = encode_all(&mpp, &named)?;
    let div_rows = encode_all(&div, &named)?;
    out.phase("encode");

    // Largest amount by which an element change exceeds step length / s.
    let mut excess = f64::NEG_INFINITY;
    for k in 1..points.len() {
        let bound = points[k].distance(points[k - 1]) / mpp.scale();
        for (a, b) in mpp_rows[k].encoding.values().iter().zip(mpp_rows[k - 1].encoding.values()) {
            excess = excess.max((a - b).abs() - bound);
        }
    }
    let (mpp_unique, div_unique) = (distinct(&mpp_rows), distinct(&div_rows));
    out.write("mpp.csv", &write_csv(&mpp_rows, mpp.dim())?)?;
    out.write("div.csv", &write_csv(&div_rows, div.dim())?)?;
    out.write(
        "summary.json",
        &pretty(&json!({
            "steps": steps,
            "mpp_unique": mpp_unique,
            "div_unique": div_unique,
            "lipschitz_excess": excess,
        })),
    )?;
    println!("steps={steps} div_unique={div_unique} mpp_unique={mpp_unique} lipschitz_excess={excess:e}");
    Ok(Outcome {
        seed: ctx.seed(),
        config: json!({
            "trajectory": source,
            "steps": steps,
            "frame": frame,
            "resolution": resolution,
            "scale": mpp.scale(),
        }),
        failure: None,
    })
}

fn corpus_spec(ctx: &Context, frame: Frame, lines: Option<usize>, polygons: Option<usize>) -> CorpusSpec {
    let base = ctx.config.corpus.clone().unwrap_or_default();
    CorpusSpec {
        frame,
        n_lines: pick(lines, ctx.config.lines, base.n_lines),
        n_polygons: pick(polygons, ctx.config.polygons, base.n_polygons),
        seed: ctx.seed(),
        ..base
    }
}

fn pair_spec(ctx: &Context, frame: Frame) -> PairSpec {
    PairSpec {
        frame,
        ..ctx.config.pair_spec.clone().unwrap_or_default()
    }
}

fn make_pairs(
    kinds: &[RelationKind],
    n: usize,
    spec: &PairSpec,
    seed: u64,
) -> Result<Vec<(RelationKind, Vec<PairSample>)>, CliError> {
    kinds
        .iter()
        .map(|&k| Ok((k, generate_pairs(k, n / 2, n - n / 2, spec, seed)?)))
        .collect()
}

fn pairs_geojson(sets: &[(RelationKind, Vec<PairSample>)]) -> String {
    let features: Vec<Feature> = sets
        .iter()
        .flat_map(|(_, s)| s.iter())
        .enumerate()
        .flat_map(|(i, p)| p.to_features(i))
        .collect();
    write_geojson(&features)
}

fn gen_corpus(
    ctx: &Context,
    lines: Option<usize>,
    polygons: Option<usize>,
    pairs: Option<usize>,
    relations: &Option<Vec<String>>,
    out: &mut Output,
) -> Result<Outcome, CliError> {
    let frame = ctx.frame(DEFAULT_FRAME)?;
    let spec = corpus_spec(ctx, frame, lines, polygons);
    let n_pairs = pick(pairs, ctx.config.pairs, 0);
    let kinds = ctx.relations(relations)?;
    let pspec = pair_spec(ctx, frame);

    let corpus = generate_corpus(&spec)?;
    let features: Vec<Feature> = corpus.iter().map(PropertySample::to_feature).collect();
    out.write("corpus.geojson", &write_geojson(&features))?;
    out.phase("corpus");
    if n_pairs > 0 {
        let sets = make_pairs(&kinds, n_pairs, &pspec, ctx.seed())?;
        out.write("pairs.geojson", &pairs_geojson(&sets))?;
        out.phase("pairs");
    }
    println!(
        "wrote {} lines and {} polygons; {} pairs per relation",
        spec.n_lines, spec.n_polygons, n_pairs
    );
    Ok(Outcome {
        seed: ctx.seed(),
        config: json!({
            "corpus": spec,
            "pairs": n_pairs,
            "relations": kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
            "pair_spec": pspec,
        }),
        failure: None,
    })
}

fn res_label(r: f64) -> String {
    format!("{r}")
}

/// One chart per task: metric against resolution, one series per encoder.
fn write_charts(
    report: &EvalReport,
    methods: &[Method],
    resolutions: &[f64],
    tasks: &[String],
    y_label: &str,
    out: &mut Output,
) -> Result<(), CliError> {
    let cats: Vec<String> = resolutions.iter().map(|&r| res_label(r)).collect();
    for task in tasks {
        let series: Vec<Series> = methods
            .iter()
            .map(|&m| Series {
                name: m.name().to_uppercase(),
                values: resolutions
                    .iter()
                    .map(|&r| report.get(m, r, task).map(|row| row.value))
                    .collect(),
            })
            .collect();
        let svg = bar_chart(task, "resolution", y_label, &cats, &series);
        out.write(&format!("chart-{task}.svg"), &svg)?;
    }
    Ok(())
}

fn print_report(report: &EvalReport) {
    for r in &report.rows {
        println!("{:<4} {:>6} {:<34} {:<10} {:.4}", r.encoder.name(), r.resolution, r.task, r.metric, r.value);
    }
}

#[allow(clippy::too_many_arguments)]
fn eval_properties(
    ctx: &Context,
    corpus_file: Option<&Path>,
    (lines, polygons): (Option<usize>, Option<usize>),
    resolutions: &Option<Vec<f64>>,
    methods: &Option<Vec<Method>>,
    tasks: &Option<Vec<String>>,
    pooling: Option<Pooling>,
    epochs: Option<usize>,
    out: &mut Output,
) -> Result<Outcome, CliError> {
    let frame = ctx.frame(DEFAULT_FRAME)?;
    let tasks: Vec<PropertyTask> = match tasks.clone().or(ctx.config.tasks.clone()) {
        None => PropertyTask::ALL.to_vec(),
        Some(names) => names
            .iter()
            .map(|n| {
                PropertyTask::from_name(n).ok_or_else(|| {
                    let known: Vec<&str> = PropertyTask::ALL.iter().map(|t| t.name()).collect();
                    CliError::Usage(format!("unknown task '{n}' (expected one of {})", known.join(", ")))
                })
            })
            .collect::<Result<_, _>>()?,
    };
    let pooling = match pooling {
        Some(Pooling::Pooled) => OrientationPooling::Pooled,
        Some(Pooling::Mean) => OrientationPooling::Mean,
        None => ctx.config.pooling.unwrap_or_default(),
    };
    let exp = PropertyExperiment {
        frame,
        methods: ctx.methods(methods),
        resolutions: ctx.resolutions(resolutions, &DEFAULT_PROPERTY_RESOLUTIONS),
        tasks,
        train: ctx.train(epochs),
        pooling,
    };

    let (corpus, source) = match corpus_file {
        Some(p) => {
            let features = read_features(p)?;
            let samples = features
                .iter()
                .enumerate()
                .map(|(i, f)| match f.geometry.kind() {
                    GeometryKind::LineString | GeometryKind::Polygon => {
                        PropertySample::from_feature(f).map_err(|e| CliError::Data(format!("feature {i}: {e}")))
                    }
                    k => Err(CliError::Data(format!("feature {i}: {k} is not a LineString or Polygon"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            (samples, json!(p.display().to_string()))
        }
        None => {
            let spec = corpus_spec(ctx, frame, lines, polygons);
            (generate_corpus(&spec)?, serde_json::to_value(&spec).expect("spec serializes"))
        }
    };
    out.phase("corpus");
    let report = run_property_experiment(&corpus, &exp)?;
    out.phase("train");

    out.write("report.csv", &report.to_csv())?;
    out.write("training.json", &pretty(&report))?;
    let names: Vec<String> = exp.tasks.iter().map(|t| t.name().to_string()).collect();
    write_charts(&report, &exp.methods, &exp.resolutions, &names, "test R²", out)?;
    print_report(&report);
    Ok(Outcome {
        seed: ctx.seed(),
        config: json!({ "corpus": source, "experiment": exp }),
        failure: None,
    })
}

/// Pair sets from a file written by `gen-corpus`, grouped by relation in
/// `kinds` order.
fn read_pairs(path: &Path, kinds: &[RelationKind]) -> Result<Vec<(RelationKind, Vec<PairSample>)>, CliError> {
    let features = read_features(path)?;
    if features.len() % 2 != 0 {
        return Err(CliError::Data(format!("{}: odd number of pair features", path.display())));
    }
    let mut sets: Vec<(RelationKind, Vec<PairSample>)> = kinds.iter().map(|&k| (k, Vec::new())).collect();
    for (i, pair) in features.chunks(2).enumerate() {
        let roles = (
            pair[0].property("role").and_then(|v| v.as_str().map(String::from)),
            pair[1].property("role").and_then(|v| v.as_str().map(String::from)),
        );
        if roles != (Some("a".into()), Some("b".into())) {
            return Err(CliError::Data(format!("pair {i}: features must have roles 'a' then 'b'")));
        }
        let s = PairSample::from_features(&pair[0], &pair[1]).map_err(|e| CliError::Data(format!("pair {i}: {e}")))?;
        if let Some(set) = sets.iter_mut().find(|(k, _)| *k == s.kind) {
            set.1.push(s);
        }
    }
    if let Some((k, _)) = sets.iter().find(|(_, s)| s.is_empty()) {
        return Err(CliError::Data(format!("{}: no pairs for {}", path.display(), k.name())));
    }
    Ok(sets)
}

#[allow(clippy::too_many_arguments)]
fn eval_pairwise(
    ctx: &Context,
    pairs_file: Option<&Path>,
    pairs: Option<usize>,
    relations: &Option<Vec<String>>,
    resolutions: &Option<Vec<f64>>,
    methods: &Option<Vec<Method>>,
    epochs: Option<usize>,
    out: &mut Output,
) -> Result<Outcome, CliError> {
    let frame = ctx.frame(DEFAULT_FRAME)?;
    let kinds = ctx.relations(relations)?;
    let exp = PairwiseExperiment {
        frame,
        methods: ctx.methods(methods),
        resolutions: ctx.resolutions(resolutions, &DEFAULT_PAIR_RESOLUTIONS),
        train: ctx.train(epochs),
    };
    let (sets, source) = match pairs_file {
        Some(p) => (read_pairs(p, &kinds)?, json!(p.display().to_string())),
        None => {
            let n = pick(pairs, ctx.config.pairs, DEFAULT_PAIRS);
            let spec = pair_spec(ctx, frame);
            let source = json!({ "pairs": n, "pair_spec": spec });
            (make_pairs(&kinds, n, &spec, ctx.seed())?, source)
        }
    };
    out.phase("pairs");
    let report = run_pairwise_experiment(&sets, &exp)?;
    out.phase("train");

    out.write("report.csv", &report.to_csv())?;
    out.write("training.json", &pretty(&report))?;
    let names: Vec<String> = kinds.iter().map(|k| k.name().to_string()).collect();
    write_charts(&report, &exp.methods, &exp.resolutions, &names, "test ROC AUC", out)?;
    print_report(&report);
    Ok(Outcome {
        seed: ctx.seed(),
        config: json!({
            "pairs": source,
            "relations": names,
            "experiment": exp,
        }),
        failure: None,
    })
}
