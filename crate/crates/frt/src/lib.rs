//! Fisher randomization tests for average (weak) null hypotheses in
//! randomized experiments.
//!
//! The pipeline: validate a dataset, pick a contrast hypothesis, impute the
//! full science table under the compatible sharp null, then re-randomize the
//! assignment and rank the observed studentized statistic against its
//! randomization distribution. Asymptotic reference distributions, limit-law
//! weights, confidence-region inversion, and a simulation harness round out
//! the toolkit.

pub mod asymptotics;
pub mod contrast;
pub mod engine;
pub mod error;
pub mod impute;
pub mod inference;
pub mod linalg;
pub mod model;
pub mod sim;
pub mod stats;

pub use contrast::{
    complete_contrast, model_matrix, preset_contrast, ContrastPreset, Hypothesis, ModelMatrix2K,
    Orientation,
};
pub use error::{FrtError, Result};
pub use impute::{aggregate_clusters, impute, solve_z, ImputationVector, ScienceTable};
pub use model::{group_summaries, stratum_summaries, Design, ExperimentDataset, GroupSummaries, RawUnit};
pub use stats::StatisticKind;
