use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::corpus::PropertySample;
use super::metrics::{pooled_r2, r2, roc_auc};
use super::pairs::PairSample;
use super::probe::{train_probe, Split, Task, TrainConfig, TrainSummary};
use super::{derive_seed, EvalError};
use crate::encoding::{make_grids, DivConfig, Encoder, Method, MppConfig};
use crate::geometry::{Frame, Geometry, GeometryKind, RelationKind};

pub const REPORT_HEADER: &str = "encoder,resolution,task,metric,value,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropertyTask {
    LineLength,
    LineOrientation,
    LineSinuosity,
    PolygonArea,
    PolygonOrientation,
    PolygonChar,
}

impl PropertyTask {
    pub const ALL: [PropertyTask; 6] = [
        PropertyTask::LineLength,
        PropertyTask::LineOrientation,
        PropertyTask::LineSinuosity,
        PropertyTask::PolygonArea,
        PropertyTask::PolygonOrientation,
        PropertyTask::PolygonChar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyTask::LineLength => "line-length",
            PropertyTask::LineOrientation => "line-orientation",
            PropertyTask::LineSinuosity => "line-sinuosity",
            PropertyTask::PolygonArea => "polygon-area",
            PropertyTask::PolygonOrientation => "polygon-orientation",
            PropertyTask::PolygonChar => "polygon-char",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }

    pub fn kind(self) -> GeometryKind {
        match self {
            PropertyTask::LineLength | PropertyTask::LineOrientation | PropertyTask::LineSinuosity => {
                GeometryKind::LineString
            }
            _ => GeometryKind::Polygon,
        }
    }

    fn is_orientation(self) -> bool {
        matches!(self, PropertyTask::LineOrientation | PropertyTask::PolygonOrientation)
    }

    /// Target series for the task: one, or `cos 2θ` and `sin 2θ`.
    fn targets(self, s: &PropertySample) -> Vec<f64> {
        let t = &s.targets;
        let missing = || panic!("sample of the wrong kind for {}", self.name());
        match self {
            PropertyTask::LineLength => vec![t.length.unwrap_or_else(missing)],
            PropertyTask::LineSinuosity => vec![t.sinuosity.unwrap_or_else(missing)],
            PropertyTask::PolygonArea => vec![t.area.unwrap_or_else(missing)],
            PropertyTask::PolygonChar => vec![t.char.unwrap_or_else(missing)],
            PropertyTask::LineOrientation | PropertyTask::PolygonOrientation => vec![t.cos2theta, t.sin2theta],
        }
    }
}

/// How the two orientation models are combined into one score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrientationPooling {
    /// Residual and total sums of squares added across both series.
    #[default]
    Pooled,
    /// Arithmetic mean of the two R² values.
    Mean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyExperiment {
    pub frame: Frame,
    pub methods: Vec<Method>,
    pub resolutions: Vec<f64>,
    pub tasks: Vec<PropertyTask>,
    pub train: TrainConfig,
    #[serde(default)]
    pub pooling: OrientationPooling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseExperiment {
    pub frame: Frame,
    pub methods: Vec<Method>,
    pub resolutions: Vec<f64>,
    pub train: TrainConfig,
}

/// One report cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub encoder: Method,
    pub resolution: f64,
    pub task: String,
    pub metric: String,
    pub value: f64,
    pub seed: u64,
    /// One entry per trained model (two for orientation tasks).
    pub training: Vec<TrainSummary>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
}

impl EvalReport {
    /// `encoder,resolution,task,metric,value,seed`, one line per row, values
    /// at full round-trip precision.
    pub fn to_csv(&self) -> String {
        let mut s = String::from(REPORT_HEADER);
        s.push('\n');
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.encoder.name(),
                r.resolution,
                r.task,
                r.metric,
                r.value,
                r.seed
            ));
        }
        s
    }

    pub fn get(&self, encoder: Method, resolution: f64, task: &str) -> Option<&EvalRow> {
        self.rows
            .iter()
            .find(|r| r.encoder == encoder && r.resolution == resolution && r.task == task)
    }
}

fn encoder_for(method: Method, frame: &Frame, resolution: f64) -> Result<Box<dyn Encoder>, EvalError> {
    let (refs, tiles) = make_grids(frame, resolution)?;
    Ok(match method {
        Method::Mpp => Box::new(MppConfig::new(refs)),
        Method::Div => Box::new(DivConfig::new(tiles)),
    })
}

/// Encodes each group of geometries and concatenates the group encodings
/// row-wise: row `i` is `[enc(groups[0][i]), enc(groups[1][i]), ...]`.
pub fn encode_matrix(enc: &dyn Encoder, groups: &[Vec<&Geometry>]) -> Result<Array2<f64>, EvalError> {
    let n = groups.first().map_or(0, Vec::len);
    let d = enc.dim();
    let width = d * groups.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = Vec::with_capacity(width);
            for g in groups {
                row.extend_from_slice(enc.encode(g[i])?.values());
            }
            Ok(row)
        })
        .collect::<Result<_, EvalError>>()?;
    Ok(Array2::from_shape_vec((n, width), rows.concat()).expect("rows have equal width"))
}

fn cell_seed(master: u64, task: &str, resolution: f64) -> u64 {
    derive_seed(master, &format!("{task}@{resolution}"))
}

struct Cell {
    encoder: Method,
    resolution: f64,
    task_index: usize,
}

fn cells(methods: &[Method], resolutions: &[f64], n_tasks: usize) -> Vec<Cell> {
    let mut out = Vec::new();
    for &encoder in methods {
        for &resolution in resolutions {
            for task_index in 0..n_tasks {
                out.push(Cell {
                    encoder,
                    resolution,
                    task_index,
                });
            }
        }
    }
    out
}

fn check_matrix(methods: &[Method], resolutions: &[f64], n_tasks: usize, frame: &Frame) -> Result<(), EvalError> {
    if methods.is_empty() || resolutions.is_empty() || n_tasks == 0 {
        return Err(EvalError::Config("experiment matrix is empty".into()));
    }
    for &r in resolutions {
        make_grids(frame, r)?;
    }
    Ok(())
}

/// Trains one probe per (encoder, resolution, task) cell and reports test R².
///
/// The split and initialization seeds depend on the task and resolution but
/// not on the encoder, so MPP and DIV are compared on identical data splits
/// and starting weights.
pub fn run_property_experiment(corpus: &[PropertySample], exp: &PropertyExperiment) -> Result<EvalReport, EvalError> {
    exp.train.validate()?;
    check_matrix(&exp.methods, &exp.resolutions, exp.tasks.len(), &exp.frame)?;
    let by_kind = |k: GeometryKind| -> Vec<&PropertySample> {
        corpus.iter().filter(|s| s.geometry.kind() == k).collect()
    };
    let lines = by_kind(GeometryKind::LineString);
    let polys = by_kind(GeometryKind::Polygon);
    let samples_for = |t: PropertyTask| if t.kind() == GeometryKind::LineString { &lines } else { &polys };

    // Encode each (method, resolution, kind) once.
    let mut encoded: Vec<((Method, u64, GeometryKind), Array2<f64>)> = Vec::new();
    for &m in &exp.methods {
        for &r in &exp.resolutions {
            let enc = encoder_for(m, &exp.frame, r)?;
            for k in [GeometryKind::LineString, GeometryKind::Polygon] {
                if exp.tasks.iter().any(|t| t.kind() == k) {
                    let gs: Vec<&Geometry> = by_kind(k).iter().map(|s| &s.geometry).collect();
                    encoded.push(((m, r.to_bits(), k), encode_matrix(enc.as_ref(), &[gs])?));
                }
            }
        }
    }
    let lookup = |m: Method, r: f64, k: GeometryKind| {
        &encoded.iter().find(|(key, _)| *key == (m, r.to_bits(), k)).expect("encoded above").1
    };

    let rows = cells(&exp.methods, &exp.resolutions, exp.tasks.len())
        .into_par_iter()
        .map(|c| {
            let task = exp.tasks[c.task_index];
            let samples = samples_for(task);
            let x = lookup(c.encoder, c.resolution, task.kind());
            let seed = cell_seed(exp.train.seed, task.name(), c.resolution);
            let split = Split::new(samples.len(), &exp.train, derive_seed(exp.train.seed, task.name()))?;
            let series: Vec<Vec<f64>> = {
                let per_sample: Vec<Vec<f64>> = samples.iter().map(|s| task.targets(s)).collect();
                (0..per_sample[0].len())
                    .map(|j| per_sample.iter().map(|v| v[j]).collect())
                    .collect()
            };
            let mut fits = Vec::new();
            for (j, y) in series.iter().enumerate() {
                fits.push(train_probe(x, y, Task::Regression, &split, &exp.train, derive_seed(seed, &j.to_string()))?);
            }
            let (metric, value) = if task.is_orientation() {
                let pairs: Vec<(&[f64], &[f64])> =
                    fits.iter().map(|f| (f.test_true.as_slice(), f.test_pred.as_slice())).collect();
                match exp.pooling {
                    OrientationPooling::Pooled => ("pooled_r2", pooled_r2(&pairs)?),
                    OrientationPooling::Mean => {
                        let a = r2(pairs[0].0, pairs[0].1)?;
                        let b = r2(pairs[1].0, pairs[1].1)?;
                        ("mean_r2", (a + b) / 2.0)
                    }
                }
            } else {
                ("r2", r2(&fits[0].test_true, &fits[0].test_pred)?)
            };
            Ok(EvalRow {
                encoder: c.encoder,
                resolution: c.resolution,
                task: task.name().to_string(),
                metric: metric.to_string(),
                value,
                seed,
                training: fits.into_iter().map(|f| f.summary).collect(),
            })
        })
        .collect::<Result<Vec<_>, EvalError>>()?;
    Ok(EvalReport { rows })
}

/// Trains one binary probe per (encoder, resolution, relation) cell on the
/// concatenated encodings of each pair and reports test ROC-AUC.
pub fn run_pairwise_experiment(
    sets: &[(RelationKind, Vec<PairSample>)],
    exp: &PairwiseExperiment,
) -> Result<EvalReport, EvalError> {
    exp.train.validate()?;
    check_matrix(&exp.methods, &exp.resolutions, sets.len(), &exp.frame)?;
    for (kind, samples) in sets {
        if samples.iter().any(|s| s.kind != *kind) {
            return Err(EvalError::Data(format!("mixed relation kinds in the {} set", kind.name())));
        }
    }
    let rows = cells(&exp.methods, &exp.resolutions, sets.len())
        .into_par_iter()
        .map(|c| {
            let (kind, samples) = &sets[c.task_index];
            let enc = encoder_for(c.encoder, &exp.frame, c.resolution)?;
            let a: Vec<&Geometry> = samples.iter().map(|s| &s.a).collect();
            let b: Vec<&Geometry> = samples.iter().map(|s| &s.b).collect();
            let x = encode_matrix(enc.as_ref(), &[a, b])?;
            let y: Vec<f64> = samples.iter().map(|s| if s.label { 1.0 } else { 0.0 }).collect();
            let seed = cell_seed(exp.train.seed, kind.name(), c.resolution);
            let split = Split::new(samples.len(), &exp.train, derive_seed(exp.train.seed, kind.name()))?;
            let fit = train_probe(&x, &y, Task::Binary, &split, &exp.train, seed)?;
            let labels: Vec<bool> = fit.test_true.iter().map(|&v| v == 1.0).collect();
            Ok(EvalRow {
                encoder: c.encoder,
                resolution: c.resolution,
                task: kind.name().to_string(),
                metric: "roc_auc".to_string(),
                value: roc_auc(&labels, &fit.test_pred)?,
                seed,
                training: vec![fit.summary],
            })
        })
        .collect::<Result<Vec<_>, EvalError>>()?;
    Ok(EvalReport { rows })
}
