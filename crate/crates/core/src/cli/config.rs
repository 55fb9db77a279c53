//! JSON config files. Every field is optional; command-line flags override
//! whatever is set here, and built-in defaults fill the rest.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::CliError;
use crate::encoding::Method;
use crate::eval::{CorpusSpec, OrientationPooling, PairSpec, TrainConfig};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// `[width, height]` of a frame anchored at the origin.
    pub frame: Option<[f64; 2]>,
    pub resolution: Option<f64>,
    pub resolutions: Option<Vec<f64>>,
    pub scale: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub method: Option<Method>,
    pub methods: Option<Vec<Method>>,
    pub threshold: Option<f64>,
    pub format: Option<String>,
    pub eps: Option<f64>,
    pub min_pts: Option<usize>,
    pub steps: Option<usize>,
    pub lines: Option<usize>,
    pub polygons: Option<usize>,
    pub pairs: Option<usize>,
    pub tasks: Option<Vec<String>>,
    pub relations: Option<Vec<String>>,
    pub pooling: Option<OrientationPooling>,
    pub epochs: Option<usize>,
    /// Shape-generator parameters for property corpora.
    pub corpus: Option<CorpusSpec>,
    /// Shape-generator parameters for relation pairs.
    pub pair_spec: Option<PairSpec>,
    pub train: Option<TrainConfig>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Data(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Data(format!("config {}: {e}", path.display())))
    }
}

/// First of `flag`, `config`, `default`.
pub fn pick<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}
