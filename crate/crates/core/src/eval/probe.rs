//! The probe model: a [in, 128, 128, 1] multilayer perceptron trained with
//! Adam on mini-batches.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis, Zip};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{derive_rng, EvalError};

pub const HIDDEN: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    /// Mean squared error on a real target.
    Regression,
    /// Binary cross-entropy on a sigmoid output; the model emits logits.
    Binary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub train_fraction: f64,
    pub val_fraction: f64,
    pub test_fraction: f64,
    pub max_epochs: usize,
    /// Stop after this many epochs without a new best validation loss.
    pub patience: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            train_fraction: 0.6,
            val_fraction: 0.2,
            test_fraction: 0.2,
            max_epochs: 300,
            patience: 50,
            batch_size: 256,
            learning_rate: 1e-3,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), EvalError> {
        let f = [self.train_fraction, self.val_fraction, self.test_fraction];
        if f.iter().any(|&x| !(x > 0.0 && x < 1.0)) || (f.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(EvalError::Config("split fractions must be positive and sum to 1".into()));
        }
        if self.max_epochs == 0 || self.batch_size == 0 {
            return Err(EvalError::Config("max_epochs and batch_size must be at least 1".into()));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(EvalError::Config("learning_rate must be positive".into()));
        }
        Ok(())
    }
}

/// Weights are stored input-major (`w[i][j]` connects input `i` to unit `j`).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeModel {
    pub task: Task,
    pub w: [Array2<f64>; 3],
    pub b: [Array1<f64>; 3],
}

struct Cache {
    z1: Array2<f64>,
    h1: Array2<f64>,
    z2: Array2<f64>,
    h2: Array2<f64>,
}

impl ProbeModel {
    /// He-uniform weights, zero biases.
    pub fn new<R: Rng + ?Sized>(input: usize, task: Task, rng: &mut R) -> Self {
        let mut layer = |fan_in: usize, fan_out: usize| {
            let lim = (6.0 / fan_in as f64).sqrt();
            Array2::from_shape_fn((fan_in, fan_out), |_| rng.gen_range(-lim..lim))
        };
        let w = [layer(input, HIDDEN), layer(HIDDEN, HIDDEN), layer(HIDDEN, 1)];
        let b = [Array1::zeros(HIDDEN), Array1::zeros(HIDDEN), Array1::zeros(1)];
        ProbeModel { task, w, b }
    }

    pub fn input_dim(&self) -> usize {
        self.w[0].nrows()
    }

    pub fn n_params(&self) -> usize {
        self.w.iter().map(|w| w.len()).sum::<usize>() + self.b.iter().map(|b| b.len()).sum::<usize>()
    }

    fn forward_cached(&self, x: ArrayView2<f64>) -> (Array1<f64>, Cache) {
        let z1 = x.dot(&self.w[0]) + &self.b[0];
        let h1 = z1.mapv(|v| v.max(0.0));
        let z2 = h1.dot(&self.w[1]) + &self.b[1];
        let h2 = z2.mapv(|v| v.max(0.0));
        let out = (h2.dot(&self.w[2]) + &self.b[2]).index_axis_move(Axis(1), 0);
        (out, Cache { z1, h1, z2, h2 })
    }

    /// Raw outputs: predictions for regression, logits for binary tasks.
    pub fn forward(&self, x: ArrayView2<f64>) -> Array1<f64> {
        self.forward_cached(x).0
    }

    /// Mean loss over the rows of `x`.
    pub fn loss(&self, x: ArrayView2<f64>, y: ArrayView1<f64>) -> f64 {
        mean_loss(self.task, self.forward(x).view(), y)
    }

    /// Mean loss and its gradient with respect to every parameter.
    pub fn loss_and_grad(&self, x: ArrayView2<f64>, y: ArrayView1<f64>) -> (f64, Gradients) {
        let n = x.nrows() as f64;
        let (out, c) = self.forward_cached(x);
        let loss = mean_loss(self.task, out.view(), y);
        let dout: Array1<f64> = match self.task {
            Task::Regression => Zip::from(&out).and(y).map_collect(|&o, &t| 2.0 * (o - t) / n),
            Task::Binary => Zip::from(&out).and(y).map_collect(|&o, &t| (sigmoid(o) - t) / n),
        };
        let dout2 = dout.insert_axis(Axis(1));
        let gw3 = c.h2.t().dot(&dout2);
        let gb3 = dout2.sum_axis(Axis(0));
        let mut d2 = dout2.dot(&self.w[2].t());
        Zip::from(&mut d2).and(&c.z2).for_each(|d, &z| {
            if z <= 0.0 {
                *d = 0.0
            }
        });
        let gw2 = c.h1.t().dot(&d2);
        let gb2 = d2.sum_axis(Axis(0));
        let mut d1 = d2.dot(&self.w[1].t());
        Zip::from(&mut d1).and(&c.z1).for_each(|d, &z| {
            if z <= 0.0 {
                *d = 0.0
            }
        });
        let gw1 = x.t().dot(&d1);
        let gb1 = d1.sum_axis(Axis(0));
        (
            loss,
            Gradients {
                w: [gw1, gw2, gw3],
                b: [gb1, gb2, gb3],
            },
        )
    }

    /// All parameters in a fixed order (w1, b1, w2, b2, w3, b3).
    pub fn params(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.n_params());
        for l in 0..3 {
            v.extend(self.w[l].iter());
            v.extend(self.b[l].iter());
        }
        v
    }

    pub fn set_params(&mut self, v: &[f64]) {
        assert_eq!(v.len(), self.n_params());
        let mut it = v.iter();
        for l in 0..3 {
            self.w[l].iter_mut().for_each(|p| *p = *it.next().unwrap());
            self.b[l].iter_mut().for_each(|p| *p = *it.next().unwrap());
        }
    }
}

#[derive(Debug, Clone)]
pub struct Gradients {
    pub w: [Array2<f64>; 3],
    pub b: [Array1<f64>; 3],
}

impl Gradients {
    /// Flattened in the same order as [`ProbeModel::params`].
    pub fn flatten(&self) -> Vec<f64> {
        let mut v = Vec::new();
        for l in 0..3 {
            v.extend(self.w[l].iter());
            v.extend(self.b[l].iter());
        }
        v
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn mean_loss(task: Task, out: ArrayView1<f64>, y: ArrayView1<f64>) -> f64 {
    let n = out.len() as f64;
    match task {
        Task::Regression => Zip::from(out).and(y).fold(0.0, |acc, &o, &t| acc + (o - t) * (o - t)) / n,
        Task::Binary => Zip::from(out).and(y).fold(0.0, |acc, &o, &t| acc + softplus(o) - t * o) / n,
    }
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
    lr: f64,
}

impl Adam {
    const B1: f64 = 0.9;
    const B2: f64 = 0.999;
    const EPS: f64 = 1e-8;

    fn new(n: usize, lr: f64) -> Self {
        Adam {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
            lr,
        }
    }

    fn step(&mut self, model: &mut ProbeModel, g: &Gradients) {
        self.t += 1;
        let c1 = 1.0 - Self::B1.powi(self.t);
        let c2 = 1.0 - Self::B2.powi(self.t);
        let lr = self.lr;
        let mut k = 0;
        let mut update = |p: &mut f64, g: f64, m: &mut [f64], v: &mut [f64]| {
            m[k] = Self::B1 * m[k] + (1.0 - Self::B1) * g;
            v[k] = Self::B2 * v[k] + (1.0 - Self::B2) * g * g;
            *p -= lr * (m[k] / c1) / ((v[k] / c2).sqrt() + Self::EPS);
            k += 1;
        };
        for l in 0..3 {
            Zip::from(&mut model.w[l])
                .and(&g.w[l])
                .for_each(|p, &gi| update(p, gi, &mut self.m, &mut self.v));
            Zip::from(&mut model.b[l])
                .and(&g.b[l])
                .for_each(|p, &gi| update(p, gi, &mut self.m, &mut self.v));
        }
    }
}

/// Row indices of a deterministic train / validation / test split.
#[derive(Debug, Clone, PartialEq)]
pub struct Split {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

impl Split {
    pub fn new(n: usize, cfg: &TrainConfig, seed: u64) -> Result<Self, EvalError> {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut derive_rng(seed, "split"));
        let n_train = (n as f64 * cfg.train_fraction).round() as usize;
        let n_val = (n as f64 * cfg.val_fraction).round() as usize;
        let n_val = n_val.min(n.saturating_sub(n_train));
        let split = Split {
            train: idx[..n_train].to_vec(),
            val: idx[n_train..n_train + n_val].to_vec(),
            test: idx[n_train + n_val..].to_vec(),
        };
        if split.train.len() < 10 || split.val.len() < 10 || split.test.len() < 10 {
            return Err(EvalError::Data(format!(
                "need at least 10 samples per split, got {}/{}/{}",
                split.train.len(),
                split.val.len(),
                split.test.len()
            )));
        }
        Ok(split)
    }
}

/// How a training run went.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainSummary {
    pub epochs_run: usize,
    pub best_epoch: usize,
    pub best_val_loss: f64,
    pub final_train_loss: f64,
    pub final_val_loss: f64,
}

/// Output of [`train_probe`]: the validation-selected model and its
/// predictions on the test rows, in the original target units.
#[derive(Debug, Clone)]
pub struct TrainedProbe {
    pub model: ProbeModel,
    pub summary: TrainSummary,
    pub test_pred: Vec<f64>,
    pub test_true: Vec<f64>,
    /// Validation predictions of the final-epoch model (original units).
    pub final_val_pred: Vec<f64>,
    pub best_val_pred: Vec<f64>,
    pub val_true: Vec<f64>,
}

fn gather(x: &Array2<f64>, rows: &[usize]) -> Array2<f64> {
    x.select(Axis(0), rows)
}

/// Trains a probe on `(x, y)` with the given split.
///
/// Regression targets are standardized with the training mean and standard
/// deviation; reported predictions are mapped back. `init_seed` drives the
/// weight initialization and batch order.
pub fn train_probe(
    x: &Array2<f64>,
    y: &[f64],
    task: Task,
    split: &Split,
    cfg: &TrainConfig,
    init_seed: u64,
) -> Result<TrainedProbe, EvalError> {
    cfg.validate()?;
    if x.nrows() != y.len() {
        return Err(EvalError::Data(format!("{} inputs but {} targets", x.nrows(), y.len())));
    }
    let ytr_raw: Vec<f64> = split.train.iter().map(|&i| y[i]).collect();
    let (mu, sigma) = match task {
        Task::Regression => {
            let m = ytr_raw.iter().sum::<f64>() / ytr_raw.len() as f64;
            let var = ytr_raw.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / ytr_raw.len() as f64;
            (m, if var > 0.0 { var.sqrt() } else { 1.0 })
        }
        Task::Binary => (0.0, 1.0),
    };
    let scaled = |rows: &[usize]| Array1::from_iter(rows.iter().map(|&i| (y[i] - mu) / sigma));
    let (xtr, xva, xte) = (gather(x, &split.train), gather(x, &split.val), gather(x, &split.test));
    let (ytr, yva) = (scaled(&split.train), scaled(&split.val));

    let mut rng = derive_rng(init_seed, "train");
    let mut model = ProbeModel::new(x.ncols(), task, &mut rng);
    let mut adam = Adam::new(model.n_params(), cfg.learning_rate);
    let mut best = model.clone();
    let mut best_val = model.loss(xva.view(), yva.view());
    let mut best_epoch = 0;
    let mut order: Vec<usize> = (0..xtr.nrows()).collect();
    let mut epochs_run = 0;
    let mut last_train = f64::NAN;
    let mut last_val = best_val;
    for epoch in 1..=cfg.max_epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for chunk in order.chunks(cfg.batch_size) {
            let xb = xtr.select(Axis(0), chunk);
            let yb = ytr.select(Axis(0), chunk);
            let (loss, g) = model.loss_and_grad(xb.view(), yb.view());
            if !loss.is_finite() {
                return Err(EvalError::Diverged {
                    epoch,
                    detail: format!("training loss {loss} on a batch of {}", chunk.len()),
                });
            }
            total += loss * chunk.len() as f64;
            adam.step(&mut model, &g);
        }
        epochs_run = epoch;
        last_train = total / xtr.nrows() as f64;
        last_val = model.loss(xva.view(), yva.view());
        if !last_val.is_finite() {
            return Err(EvalError::Diverged {
                epoch,
                detail: format!("validation loss {last_val}"),
            });
        }
        if last_val < best_val {
            best_val = last_val;
            best_epoch = epoch;
            best = model.clone();
        } else if epoch - best_epoch >= cfg.patience {
            break;
        }
    }
    let unscale = |v: Array1<f64>| -> Vec<f64> { v.iter().map(|p| p * sigma + mu).collect() };
    let final_val_pred = unscale(model.forward(xva.view()));
    let best_val_pred = unscale(best.forward(xva.view()));
    let test_pred = unscale(best.forward(xte.view()));
    Ok(TrainedProbe {
        summary: TrainSummary {
            epochs_run,
            best_epoch,
            best_val_loss: best_val,
            final_train_loss: last_train,
            final_val_loss: last_val,
        },
        test_true: split.test.iter().map(|&i| y[i]).collect(),
        val_true: split.val.iter().map(|&i| y[i]).collect(),
        model: best,
        test_pred,
        final_val_pred,
        best_val_pred,
    })
}

/// Relative error `|a - n| / max(|a| + |n|, floor)` between analytic and
/// central-difference gradients over the parameters at `indices`, as one
/// vector norm.
pub fn gradient_check(
    model: &ProbeModel,
    x: ArrayView2<f64>,
    y: ArrayView1<f64>,
    indices: &[usize],
    h: f64,
) -> f64 {
    let analytic = model.loss_and_grad(x, y).1.flatten();
    let base = model.params();
    let mut probe = model.clone();
    let (mut diff, mut norm) = (0.0, 0.0);
    for &i in indices {
        let mut p = base.clone();
        p[i] = base[i] + h;
        probe.set_params(&p);
        let up = probe.loss(x, y);
        p[i] = base[i] - h;
        probe.set_params(&p);
        let down = probe.loss(x, y);
        let numeric = (up - down) / (2.0 * h);
        diff += (analytic[i] - numeric).powi(2);
        norm += analytic[i].powi(2) + numeric.powi(2);
    }
    if norm == 0.0 {
        return 0.0;
    }
    diff.sqrt() / norm.sqrt()
}
