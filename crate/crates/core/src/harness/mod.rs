//! Seeded experiments: configuration, trial loop, summaries and output files.

mod config;
mod experiment;
mod presets;
mod snapshot_io;
mod theory;

use thiserror::Error;

use crate::diffusion::DiffusionError;
use crate::graph::GraphError;
use crate::localization::LocalizationError;
use crate::metrics::MetricsError;

pub use config::{DcCcMode, DiffusionSpec, ExperimentConfig, GraphSpec, TPolicy};
pub use experiment::{
    mean_stderr, resolve_t, run_experiment, run_on_graph, scan_t_for_size, summarize,
    thread_count, CellSummary, ExperimentOutput, TrialRecord, CSV_HEADER, SUMMARY_HEADER,
};
pub use presets::{preset, PRESETS};
pub use snapshot_io::{read_snapshot, write_snapshot, SnapshotFile};
pub use theory::{compute_theory_bounds, max_pairwise_distance, TheoryBounds};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("snapshot line {line}: {message}")]
    Snapshot { line: usize, message: String },
    #[error("no t in 1..={max_t} gives a median outbreak size in [{lo}, {hi}]; adjust q, m or the size range")]
    NoFeasibleT { lo: usize, hi: usize, max_t: u32 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Diffusion(#[from] DiffusionError),
    #[error(transparent)]
    Localization(#[from] LocalizationError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
