//! Evaluation harness: synthetic corpora and relation pairs, the probe
//! model, metrics, and the experiment matrix that ties them together.

pub mod corpus;
mod experiment;
pub mod metrics;
pub mod pairs;
pub mod probe;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::encoding::EncodingError;
use crate::geometry::GeometryError;

pub use corpus::{generate_corpus, CorpusSpec, PropertySample, Targets};
pub use experiment::{
    encode_matrix, run_pairwise_experiment, run_property_experiment, EvalReport, EvalRow, OrientationPooling,
    PairwiseExperiment, PropertyExperiment, PropertyTask, REPORT_HEADER,
};
pub use metrics::{angle_from_cos_sin, pooled_r2, r2, roc_auc};
pub use pairs::{generate_pairs, PairSample, PairSpec};
pub use probe::{train_probe, ProbeModel, Split, Task, TrainConfig, TrainSummary};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid data: {0}")]
    Data(String),
    #[error("generator error: {0}")]
    Generator(String),
    #[error("metric error: {0}")]
    Metric(String),
    #[error("training diverged at epoch {epoch}: {detail}")]
    Diverged { epoch: usize, detail: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the sub-stream named `key` under `seed`. Distinct keys give
/// unrelated streams; the mapping never changes between runs.
pub fn derive_seed(seed: u64, key: &str) -> u64 {
    let mut h = splitmix64(seed);
    for b in key.bytes() {
        h = splitmix64(h ^ b as u64);
    }
    h
}

pub fn derive_rng(seed: u64, key: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, key))
}
