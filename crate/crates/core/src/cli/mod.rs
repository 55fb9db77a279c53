//! The batch commands behind the `mppenc` binary.
//!
//! Every command writes its artifacts into one output directory (`--out`,
//! default `out`) together with `manifest.json`, which records the resolved
//! configuration, and `timings.json`. All files except `timings.json` are
//! byte-identical across runs with the same inputs and seed.
//!
//! Exit codes: 0 success, 1 usage, 2 data or validation error, 3 internal
//! error.

mod commands;
pub mod config;
pub mod svg;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::clustering::ClusterError;
use crate::codecs::CodecError;
use crate::encoding::io::IoError;
use crate::encoding::{EncodingError, Method};
use crate::eval::EvalError;
use crate::geometry::GeometryError;

pub use config::ConfigFile;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

macro_rules! data_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Data(e.to_string())
            }
        }
    )*};
}
data_error!(EvalError, EncodingError, CodecError, IoError, ClusterError, GeometryError);

#[derive(Debug, Parser)]
#[command(name = "mppenc", version, about = "MPP and DIV encodings of vector geometries")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Frame size; the frame spans [0, W] x [0, H].
    #[arg(long, global = true, num_args = 2, value_names = ["W", "H"])]
    pub frame: Option<Vec<f64>>,
    /// Grid spacing.
    #[arg(long, global = true)]
    pub resolution: Option<f64>,
    /// MPP kernel scale (defaults to the grid spacing).
    #[arg(long, global = true)]
    pub scale: Option<f64>,
    /// Master random seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode every geometry of a WKT (one per line) or GeoJSON file.
    Encode {
        input: PathBuf,
        #[arg(long)]
        method: Option<Method>,
        /// Write sparse JSON rows, dropping values below the threshold.
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Recover point coordinates from MPP encodings (CSV or JSON).
    DecodePoint { input: PathBuf },
    /// DBSCAN over encodings; without INPUT, clusters the built-in shape set.
    Cluster {
        input: Option<PathBuf>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        min_pts: Option<usize>,
    },
    /// Encode points sampled along a path and count distinct vectors.
    Continuity {
        /// WKT or GeoJSON LineString; defaults to the built-in trajectory.
        #[arg(long)]
        trajectory: Option<PathBuf>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Write a synthetic property corpus and, optionally, relation pairs as GeoJSON.
    GenCorpus {
        #[arg(long)]
        lines: Option<usize>,
        #[arg(long)]
        polygons: Option<usize>,
        /// Balanced pairs per relation (0 skips pair generation).
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        relations: Option<Vec<String>>,
    },
    /// Probe-model retrieval of shape properties.
    EvalProperties {
        /// GeoJSON corpus; generated from the seed when absent.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        lines: Option<usize>,
        #[arg(long)]
        polygons: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        resolutions: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<Method>>,
        #[arg(long, value_delimiter = ',')]
        tasks: Option<Vec<String>>,
        #[arg(long, value_enum)]
        pooling: Option<Pooling>,
        #[arg(long)]
        epochs: Option<usize>,
    },
    /// Probe-model detection of pairwise relations.
    EvalPairwise {
        /// GeoJSON pairs file from gen-corpus; generated when absent.
        #[arg(long)]
        pairs_file: Option<PathBuf>,
        /// Balanced pairs per relation.
        #[arg(long)]
        pairs: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        relations: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',')]
        resolutions: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<Method>>,
        #[arg(long)]
        epochs: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Pooling {
    Pooled,
    Mean,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Encode { .. } => "encode",
            Command::DecodePoint { .. } => "decode-point",
            Command::Cluster { .. } => "cluster",
            Command::Continuity { .. } => "continuity",
            Command::GenCorpus { .. } => "gen-corpus",
            Command::EvalProperties { .. } => "eval-properties",
            Command::EvalPairwise { .. } => "eval-pairwise",
        }
    }
}

/// Collects a command's artifacts in its output directory.
pub struct Output {
    dir: PathBuf,
    written: Vec<String>,
    started: Instant,
    phases: Vec<(String, f64)>,
}

impl Output {
    fn new(dir: PathBuf) -> Self {
        Output {
            dir,
            written: Vec::new(),
            started: Instant::now(),
            phases: Vec::new(),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Writes `name` (a bare file name) inside the output directory.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        debug_assert!(!name.contains(['/', '\\']) && name != ".." && name != ".");
        std::fs::create_dir_all(&self.dir)
            .map_err(|e| CliError::Internal(format!("cannot create {}: {e}", self.dir.display())))?;
        let path = self.dir.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(name.to_string());
        Ok(())
    }

    /// Records the time since the previous phase ended.
    pub fn phase(&mut self, name: &str) {
        let done: f64 = self.phases.iter().map(|p| p.1).sum();
        self.phases
            .push((name.to_string(), self.started.elapsed().as_secs_f64() - done));
    }

    fn finish(mut self, subcommand: &str, seed: u64, config: Value) -> Result<(), CliError> {
        let mut outputs = self.written.clone();
        outputs.push("manifest.json".into());
        outputs.push("timings.json".into());
        let manifest = json!({
            "tool": "mppenc",
            "version": env!("CARGO_PKG_VERSION"),
            "subcommand": subcommand,
            "seed": seed,
            "config": config,
            "outputs": outputs,
        });
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        self.write("manifest.json", &text)?;
        let phases: serde_json::Map<String, Value> =
            self.phases.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let timings = json!({
            "total_seconds": self.started.elapsed().as_secs_f64(),
            "phases": phases,
        });
        let mut text = serde_json::to_string_pretty(&timings).expect("timings serialize");
        text.push('\n');
        self.write("timings.json", &text)
    }
}

/// Runs a parsed command line.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.common.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let out_dir = config::pick(cli.common.out.clone(), config.out.clone(), PathBuf::from("out"));
    let mut out = Output::new(out_dir);
    let name = cli.command.name();
    let ctx = commands::Context {
        common: &cli.common,
        config: &config,
    };
    let outcome = commands::dispatch(&ctx, &cli.command, &mut out)?;
    out.finish(name, outcome.seed, outcome.config)?;
    match outcome.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// Parses `args` (including the program name), runs the command and maps
/// the outcome to an exit code. Panics are reported as internal errors.
pub fn main_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
        Err(_) => {
            eprintln!("error: internal failure");
            ExitCode::from(3)
        }
    }
}
