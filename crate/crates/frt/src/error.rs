//! Error types shared across the crate.

use thiserror::Error;

/// Errors surfaced by dataset validation, hypothesis construction, and the
/// test engine.
#[derive(Debug, Clone, Error)]
pub enum FrtError {
    #[error("arm {arm} has {count} units; at least {required} required")]
    ArmTooSmall {
        arm: String,
        count: usize,
        required: usize,
    },

    #[error("stratum {stratum}, arm {arm} has {count} units; at least {required} required")]
    StratumCellTooSmall {
        stratum: String,
        arm: String,
        count: usize,
        required: usize,
    },

    #[error("cluster {cluster} mixes treatments {first} and {second}")]
    MixedClusterTreatment {
        cluster: String,
        first: String,
        second: String,
    },

    #[error("outcome dimension mismatch: expected {expected}, unit {unit} has {found}")]
    DimensionMismatch {
        unit: String,
        expected: usize,
        found: usize,
    },

    #[error("dataset mixes strata and clusters; analyze one design at a time")]
    UnsupportedDesign,

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("arm {arm} has (numerically) zero within-group variance; consider jitter")]
    DegenerateVariance { arm: String },

    #[error("contrast rows are linearly dependent")]
    RankDeficient,

    #[error("matrix is not a contrast: rows must sum to zero")]
    NotContrast,

    #[error("{count} assignments exceed the enumeration cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },

    #[error("doses are constant; the trend contrast row is identically zero")]
    BadDoses,

    #[error("linear system for the imputation vector is ill-conditioned (cond ~ {cond:.2e})")]
    IllConditioned { cond: f64 },

    #[error("per-stratum targets do not average to the global target (gap {gap:.3e})")]
    StratumTargetMismatch { gap: f64 },

    #[error("covariance matrix for the contrast is singular or near-singular")]
    SingularCovariance,

    #[error("denominator matrix in the limit law is singular")]
    SingularDenominator,

    #[error("{degenerate} of {total} randomization draws were degenerate (limit {limit:.1}%)")]
    TooManyDegenerateDraws {
        degenerate: usize,
        total: usize,
        limit: f64,
    },

    #[error("statistic {statistic} is not supported here: {reason}")]
    UnsupportedStatistic {
        statistic: &'static str,
        reason: &'static str,
    },

    #[error("statistic requires a single-row contrast (m = 1), got m = {m}")]
    RequiresScalarContrast { m: usize },

    #[error("statistic requires a zero null target")]
    NonzeroTarget,

    #[error("statistic requires scalar outcomes (d = 1), dataset has d = {dim}")]
    RequiresScalarOutcome { dim: usize },

    #[error("invalid population spec: {0}")]
    InvalidPopulation(String),

    #[error("invalid hypothesis: {0}")]
    InvalidHypothesis(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, FrtError>;
