//! Experiment data model: per-unit records, design validation, and the
//! per-arm sufficient statistics every test statistic consumes.
//!
//! Treatment labels are normalized to contiguous arm indices `0..J` at
//! ingestion (numeric labels sort numerically, anything else
//! lexicographically); the original labels are kept for reporting. The same
//! normalization applies to strata and clusters.

use std::collections::BTreeMap;

use crate::error::{FrtError, Result};
use crate::linalg::CholScratch;

/// Experimental design of a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Design {
    /// Completely randomized experiment.
    Cre,
    /// Stratified (block) randomized experiment.
    Sre,
    /// Cluster-randomized experiment (analyzed on cluster aggregates).
    ClusterCre,
}

/// One unit as parsed from an input file, before validation.
#[derive(Debug, Clone, Default)]
pub struct RawUnit {
    pub id: Option<String>,
    pub treatment: String,
    pub outcome: Vec<f64>,
    pub stratum: Option<String>,
    pub cluster: Option<String>,
}

/// A validated dataset with normalized arm/stratum/cluster indices.
#[derive(Debug, Clone)]
pub struct ExperimentDataset {
    design: Design,
    n_arms: usize,
    dim: usize,
    arms: Vec<usize>,
    outcomes: Vec<f64>, // n_units x dim, row-major
    strata: Option<Vec<usize>>,
    n_strata: usize,
    clusters: Option<Vec<usize>>,
    n_clusters: usize,
    unit_ids: Vec<String>,
    arm_labels: Vec<String>,
    stratum_labels: Vec<String>,
    cluster_labels: Vec<String>,
}

/// Sorts distinct labels numerically when they all parse as numbers,
/// lexicographically otherwise, and returns (ordered labels, label -> index).
fn normalize_labels(values: &[String]) -> (Vec<String>, BTreeMap<String, usize>) {
    let mut distinct: Vec<String> = Vec::new();
    for v in values {
        if !distinct.contains(v) {
            distinct.push(v.clone());
        }
    }
    let all_numeric = distinct.iter().all(|s| s.trim().parse::<f64>().is_ok());
    if all_numeric {
        distinct.sort_by(|a, b| {
            let (x, y) = (
                a.trim().parse::<f64>().unwrap(),
                b.trim().parse::<f64>().unwrap(),
            );
            x.partial_cmp(&y).unwrap()
        });
    } else {
        distinct.sort();
    }
    let index = distinct
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    (distinct, index)
}

impl ExperimentDataset {
    /// Validates raw units and builds a dataset, inferring J, H, and d.
    pub fn from_units(units: Vec<RawUnit>) -> Result<Self> {
        if units.is_empty() {
            return Err(FrtError::EmptyDataset);
        }
        let dim = units[0].outcome.len();
        if dim == 0 {
            return Err(FrtError::DimensionMismatch {
                unit: units[0].id.clone().unwrap_or_else(|| "unit 0".into()),
                expected: 1,
                found: 0,
            });
        }
        for (i, u) in units.iter().enumerate() {
            if u.outcome.len() != dim {
                return Err(FrtError::DimensionMismatch {
                    unit: u.id.clone().unwrap_or_else(|| format!("unit {i}")),
                    expected: dim,
                    found: u.outcome.len(),
                });
            }
        }

        let has_strata = units.iter().any(|u| u.stratum.is_some());
        let has_clusters = units.iter().any(|u| u.cluster.is_some());
        if has_strata && has_clusters {
            return Err(FrtError::UnsupportedDesign);
        }
        if has_strata && !units.iter().all(|u| u.stratum.is_some()) {
            return Err(FrtError::Invalid(
                "some units carry a stratum and some do not".into(),
            ));
        }
        if has_clusters && !units.iter().all(|u| u.cluster.is_some()) {
            return Err(FrtError::Invalid(
                "some units carry a cluster and some do not".into(),
            ));
        }

        let treatments: Vec<String> = units.iter().map(|u| u.treatment.clone()).collect();
        let (arm_labels, arm_index) = normalize_labels(&treatments);
        let n_arms = arm_labels.len();
        if n_arms < 2 {
            return Err(FrtError::Invalid(
                "dataset needs at least two treatment arms".into(),
            ));
        }

        let arms: Vec<usize> = treatments.iter().map(|t| arm_index[t]).collect();
        let mut outcomes = Vec::with_capacity(units.len() * dim);
        for u in &units {
            outcomes.extend_from_slice(&u.outcome);
        }
        let unit_ids: Vec<String> = units
            .iter()
            .enumerate()
            .map(|(i, u)| u.id.clone().unwrap_or_else(|| format!("u{i}")))
            .collect();

        let (strata, stratum_labels) = if has_strata {
            let raw: Vec<String> = units.iter().map(|u| u.stratum.clone().unwrap()).collect();
            let (labels, index) = normalize_labels(&raw);
            (Some(raw.iter().map(|s| index[s]).collect()), labels)
        } else {
            (None, Vec::new())
        };
        let (clusters, cluster_labels) = if has_clusters {
            let raw: Vec<String> = units.iter().map(|u| u.cluster.clone().unwrap()).collect();
            let (labels, index) = normalize_labels(&raw);
            (Some(raw.iter().map(|s| index[s]).collect()), labels)
        } else {
            (None, Vec::new())
        };

        let design = if has_strata {
            Design::Sre
        } else if has_clusters {
            Design::ClusterCre
        } else {
            Design::Cre
        };

        let data = Self {
            design,
            n_arms,
            dim,
            arms,
            outcomes,
            n_strata: stratum_labels.len(),
            strata,
            n_clusters: cluster_labels.len(),
            clusters,
            unit_ids,
            arm_labels,
            stratum_labels,
            cluster_labels,
        };
        data.check_invariants()?;
        Ok(data)
    }

    fn check_invariants(&self) -> Result<()> {
        let required = self.min_arm_size();
        let mut counts = vec![0usize; self.n_arms];
        for &a in &self.arms {
            counts[a] += 1;
        }
        for (j, &c) in counts.iter().enumerate() {
            if c < required {
                return Err(FrtError::ArmTooSmall {
                    arm: self.arm_labels[j].clone(),
                    count: c,
                    required,
                });
            }
        }

        if let Some(strata) = &self.strata {
            let mut cells = vec![0usize; self.n_strata * self.n_arms];
            for (i, &h) in strata.iter().enumerate() {
                cells[h * self.n_arms + self.arms[i]] += 1;
            }
            for h in 0..self.n_strata {
                for j in 0..self.n_arms {
                    let c = cells[h * self.n_arms + j];
                    if c < required {
                        return Err(FrtError::StratumCellTooSmall {
                            stratum: self.stratum_labels[h].clone(),
                            arm: self.arm_labels[j].clone(),
                            count: c,
                            required,
                        });
                    }
                }
            }
        }

        if let Some(clusters) = &self.clusters {
            let mut seen: Vec<Option<usize>> = vec![None; self.n_clusters];
            for (i, &c) in clusters.iter().enumerate() {
                match seen[c] {
                    None => seen[c] = Some(self.arms[i]),
                    Some(a) if a != self.arms[i] => {
                        return Err(FrtError::MixedClusterTreatment {
                            cluster: self.cluster_labels[c].clone(),
                            first: self.arm_labels[a].clone(),
                            second: self.arm_labels[self.arms[i]].clone(),
                        });
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Minimum units per arm (and per stratum-arm cell): 2 for scalar
    /// outcomes, d + 1 for d-dimensional ones so sample covariances can be
    /// non-singular.
    pub fn min_arm_size(&self) -> usize {
        2usize.max(self.dim + 1)
    }

    pub fn design(&self) -> Design {
        self.design
    }

    pub fn n_units(&self) -> usize {
        self.unit_ids.len()
    }

    pub fn n_arms(&self) -> usize {
        self.n_arms
    }

    /// Outcome dimension d.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_strata(&self) -> usize {
        if self.strata.is_some() {
            self.n_strata
        } else {
            1
        }
    }

    pub fn n_clusters(&self) -> usize {
        self.n_clusters
    }

    /// Arm index (0-based) of each unit.
    pub fn arms(&self) -> &[usize] {
        &self.arms
    }

    /// Stratum index of each unit, if stratified.
    pub fn strata(&self) -> Option<&[usize]> {
        self.strata.as_deref()
    }

    pub fn clusters(&self) -> Option<&[usize]> {
        self.clusters.as_deref()
    }

    pub fn outcome(&self, unit: usize) -> &[f64] {
        &self.outcomes[unit * self.dim..(unit + 1) * self.dim]
    }

    pub fn outcomes_flat(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn unit_ids(&self) -> &[String] {
        &self.unit_ids
    }

    pub fn arm_labels(&self) -> &[String] {
        &self.arm_labels
    }

    pub fn stratum_labels(&self) -> &[String] {
        &self.stratum_labels
    }

    pub fn cluster_labels(&self) -> &[String] {
        &self.cluster_labels
    }

    /// Per-arm unit counts N_j.
    pub fn arm_sizes(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_arms];
        for &a in &self.arms {
            counts[a] += 1;
        }
        counts
    }

    /// Per-(stratum, arm) cell counts, one row per stratum.
    pub fn cell_sizes(&self) -> Vec<Vec<usize>> {
        match &self.strata {
            None => vec![self.arm_sizes()],
            Some(strata) => {
                let mut cells = vec![vec![0usize; self.n_arms]; self.n_strata];
                for (i, &h) in strata.iter().enumerate() {
                    cells[h][self.arms[i]] += 1;
                }
                cells
            }
        }
    }

    /// Applies `f` to every outcome coordinate, returning a new dataset.
    /// Used by the CLI jitter transform.
    pub fn map_outcomes(&self, mut f: impl FnMut(usize, usize, f64) -> f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n_units() {
            for k in 0..self.dim {
                let v = out.outcomes[i * self.dim + k];
                out.outcomes[i * self.dim + k] = f(i, k, v);
            }
        }
        out
    }
}

/// Convenience constructors used heavily by tests and the simulation harness.
impl ExperimentDataset {
    /// Scalar CRE from 1-based arm labels and outcomes.
    pub fn scalar_cre(arms: &[usize], y: &[f64]) -> Result<Self> {
        assert_eq!(arms.len(), y.len());
        Self::from_units(
            arms.iter()
                .zip(y)
                .map(|(&a, &v)| RawUnit {
                    treatment: a.to_string(),
                    outcome: vec![v],
                    ..Default::default()
                })
                .collect(),
        )
    }

    /// Vector-outcome CRE.
    pub fn vector_cre(arms: &[usize], y: &[Vec<f64>]) -> Result<Self> {
        assert_eq!(arms.len(), y.len());
        Self::from_units(
            arms.iter()
                .zip(y)
                .map(|(&a, v)| RawUnit {
                    treatment: a.to_string(),
                    outcome: v.clone(),
                    ..Default::default()
                })
                .collect(),
        )
    }

    /// Scalar SRE from 1-based arm and stratum labels.
    pub fn scalar_sre(arms: &[usize], y: &[f64], strata: &[usize]) -> Result<Self> {
        assert_eq!(arms.len(), y.len());
        assert_eq!(arms.len(), strata.len());
        Self::from_units(
            arms.iter()
                .zip(y)
                .zip(strata)
                .map(|((&a, &v), &h)| RawUnit {
                    treatment: a.to_string(),
                    outcome: vec![v],
                    stratum: Some(h.to_string()),
                    ..Default::default()
                })
                .collect(),
        )
    }

    /// Scalar cluster-randomized dataset.
    pub fn scalar_clustered(arms: &[usize], y: &[f64], clusters: &[&str]) -> Result<Self> {
        assert_eq!(arms.len(), y.len());
        assert_eq!(arms.len(), clusters.len());
        Self::from_units(
            arms.iter()
                .zip(y)
                .zip(clusters)
                .map(|((&a, &v), &c)| RawUnit {
                    treatment: a.to_string(),
                    outcome: vec![v],
                    cluster: Some(c.to_string()),
                    ..Default::default()
                })
                .collect(),
        )
    }
}

/// Per-arm counts, mean vectors, and unbiased covariances, plus the grand
/// mean of the observed outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummaries {
    dim: usize,
    counts: Vec<usize>,
    means: Vec<f64>, // J x d
    covs: Vec<f64>,  // J x d x d
    total: usize,
    grand_mean: Vec<f64>,
}

impl GroupSummaries {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_arms(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, j: usize) -> usize {
        self.counts[j]
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn mean(&self, j: usize) -> &[f64] {
        &self.means[j * self.dim..(j + 1) * self.dim]
    }

    /// All arm means as one arm-major vector of length J*d.
    pub fn means_flat(&self) -> &[f64] {
        &self.means
    }

    pub fn cov(&self, j: usize) -> &[f64] {
        let dd = self.dim * self.dim;
        &self.covs[j * dd..(j + 1) * dd]
    }

    pub fn covs_flat(&self) -> &[f64] {
        &self.covs
    }

    /// Scalar variance of arm j; panics unless d = 1.
    pub fn var(&self, j: usize) -> f64 {
        assert_eq!(self.dim, 1);
        self.covs[j]
    }

    /// Grand mean of the observed outcomes.
    pub fn grand_mean(&self) -> &[f64] {
        &self.grand_mean
    }

    /// The conservative covariance estimator N * blockdiag(S_j / N_j) as a
    /// dense dJ x dJ matrix.
    pub fn d_hat(&self) -> nalgebra::DMatrix<f64> {
        let (d, j_arms) = (self.dim, self.n_arms());
        let n = self.total as f64;
        let mut out = nalgebra::DMatrix::zeros(d * j_arms, d * j_arms);
        for j in 0..j_arms {
            let nj = self.counts[j] as f64;
            let cov = self.cov(j);
            for a in 0..d {
                for b in 0..d {
                    out[(j * d + a, j * d + b)] = n * cov[a * d + b] / nj;
                }
            }
        }
        out
    }

    /// Builds summaries directly from parts. The engine uses this to wrap its
    /// scratch buffers; everyone else should go through [`group_summaries`].
    pub fn from_parts(
        dim: usize,
        counts: Vec<usize>,
        means: Vec<f64>,
        covs: Vec<f64>,
        grand_mean: Vec<f64>,
    ) -> Self {
        let total = counts.iter().sum();
        Self {
            dim,
            counts,
            means,
            covs,
            total,
            grand_mean,
        }
    }
}

/// Two-pass mean/covariance of the units listed in `members`.
fn summarize_group(data: &ExperimentDataset, members: &[usize], mean: &mut [f64], cov: &mut [f64]) {
    let d = data.dim();
    let n = members.len() as f64;
    mean.fill(0.0);
    for &i in members {
        for (k, v) in data.outcome(i).iter().enumerate() {
            mean[k] += v;
        }
    }
    for v in mean.iter_mut() {
        *v /= n;
    }
    cov.fill(0.0);
    for &i in members {
        let y = data.outcome(i);
        for a in 0..d {
            let da = y[a] - mean[a];
            for b in 0..=a {
                cov[a * d + b] += da * (y[b] - mean[b]);
            }
        }
    }
    for a in 0..d {
        for b in 0..=a {
            let v = cov[a * d + b] / (n - 1.0);
            cov[a * d + b] = v;
            cov[b * d + a] = v;
        }
    }
}

fn degeneracy_check(data: &ExperimentDataset, label: &str, cov: &[f64], dim: usize) -> Result<()> {
    if dim == 1 {
        if cov[0] <= 0.0 {
            return Err(FrtError::DegenerateVariance { arm: label.into() });
        }
        return Ok(());
    }
    let _ = data;
    let zero = vec![0.0; dim];
    CholScratch::new()
        .quad_form_inv(cov, &zero, dim)
        .map(|_| ())
        .map_err(|_| FrtError::DegenerateVariance { arm: label.into() })
}

/// Pooled (per-arm) summaries of a dataset, ignoring strata.
pub fn group_summaries(data: &ExperimentDataset) -> Result<GroupSummaries> {
    let (j_arms, d) = (data.n_arms(), data.dim());
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); j_arms];
    for (i, &a) in data.arms().iter().enumerate() {
        members[a].push(i);
    }
    let mut means = vec![0.0; j_arms * d];
    let mut covs = vec![0.0; j_arms * d * d];
    for j in 0..j_arms {
        summarize_group(
            data,
            &members[j],
            &mut means[j * d..(j + 1) * d],
            &mut covs[j * d * d..(j + 1) * d * d],
        );
        degeneracy_check(
            data,
            &data.arm_labels()[j],
            &covs[j * d * d..(j + 1) * d * d],
            d,
        )?;
    }
    let n = data.n_units() as f64;
    let mut grand = vec![0.0; d];
    for i in 0..data.n_units() {
        for (k, v) in data.outcome(i).iter().enumerate() {
            grand[k] += v;
        }
    }
    for v in grand.iter_mut() {
        *v /= n;
    }
    Ok(GroupSummaries::from_parts(
        d,
        members.iter().map(Vec::len).collect(),
        means,
        covs,
        grand,
    ))
}

/// Per-stratum summaries with their weights omega_h = N_h / N.
pub fn stratum_summaries(data: &ExperimentDataset) -> Result<Vec<(f64, GroupSummaries)>> {
    let strata = match data.strata() {
        None => return Ok(vec![(1.0, group_summaries(data)?)]),
        Some(s) => s,
    };
    let (j_arms, d, n_str) = (data.n_arms(), data.dim(), data.n_strata());
    let mut out = Vec::with_capacity(n_str);
    for h in 0..n_str {
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); j_arms];
        let mut stratum_size = 0usize;
        for (i, &hi) in strata.iter().enumerate() {
            if hi == h {
                members[data.arms()[i]].push(i);
                stratum_size += 1;
            }
        }
        let mut means = vec![0.0; j_arms * d];
        let mut covs = vec![0.0; j_arms * d * d];
        let mut grand = vec![0.0; d];
        for j in 0..j_arms {
            summarize_group(
                data,
                &members[j],
                &mut means[j * d..(j + 1) * d],
                &mut covs[j * d * d..(j + 1) * d * d],
            );
            degeneracy_check(
                data,
                &format!("{}/{}", data.stratum_labels()[h], data.arm_labels()[j]),
                &covs[j * d * d..(j + 1) * d * d],
                d,
            )?;
        }
        for (i, &hi) in strata.iter().enumerate() {
            if hi == h {
                for (k, v) in data.outcome(i).iter().enumerate() {
                    grand[k] += v;
                }
            }
        }
        for v in grand.iter_mut() {
            *v /= stratum_size as f64;
        }
        out.push((
            stratum_size as f64 / data.n_units() as f64,
            GroupSummaries::from_parts(
                d,
                members.iter().map(Vec::len).collect(),
                means,
                covs,
                grand,
            ),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn minimal_legal_cre() {
        let d = ExperimentDataset::scalar_cre(&[1, 1, 2, 2], &[1.0, 3.0, 0.0, 2.0]).unwrap();
        assert_eq!(d.n_arms(), 2);
        assert_eq!(d.design(), Design::Cre);
    }

    #[test]
    fn small_arm_rejected() {
        let err = ExperimentDataset::scalar_cre(&[1, 1, 2], &[1.0, 2.0, 3.0]).unwrap_err();
        assert!(matches!(err, FrtError::ArmTooSmall { .. }));
    }

    #[test]
    fn sparse_stratum_cell_rejected() {
        // stratum 1 holds arms (1, 2) once each
        let err = ExperimentDataset::scalar_sre(
            &[1, 2, 1, 1, 2, 2],
            &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            &[1, 1, 2, 2, 2, 2],
        )
        .unwrap_err();
        assert!(matches!(err, FrtError::StratumCellTooSmall { .. }));
    }

    #[test]
    fn mixed_cluster_treatment_rejected() {
        let err = ExperimentDataset::scalar_clustered(
            &[1, 2, 2, 1],
            &[1.0, 2.0, 3.0, 4.0],
            &["a", "a", "b", "b"],
        )
        .unwrap_err();
        assert!(matches!(err, FrtError::MixedClusterTreatment { .. }));
    }

    #[test]
    fn vector_arm_needs_d_plus_one() {
        let y = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0], vec![0.0, 0.0]];
        let err = ExperimentDataset::vector_cre(&[1, 1, 2, 2], &y).unwrap_err();
        assert!(matches!(err, FrtError::ArmTooSmall { .. }));
    }

    #[test]
    fn labels_sort_numerically() {
        let d = ExperimentDataset::scalar_cre(&[10, 10, 2, 2], &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(d.arm_labels(), &["2".to_string(), "10".to_string()]);
        assert_eq!(d.arms(), &[1, 1, 0, 0]);
    }

    #[test]
    fn two_point_variance() {
        let d = ExperimentDataset::scalar_cre(&[1, 1, 2, 2], &[1.0, 3.0, 0.0, 2.0]).unwrap();
        let s = group_summaries(&d).unwrap();
        assert_relative_eq!(s.mean(0)[0], 2.0);
        assert_relative_eq!(s.var(0), 2.0);
    }

    #[test]
    fn constant_group_is_degenerate() {
        let d = ExperimentDataset::scalar_cre(&[1, 1, 2, 2], &[5.0, 5.0, 0.0, 2.0]).unwrap();
        assert!(matches!(
            group_summaries(&d),
            Err(FrtError::DegenerateVariance { .. })
        ));
    }

    #[test]
    fn grand_mean_is_count_weighted_arm_mean() {
        let d =
            ExperimentDataset::scalar_cre(&[1, 1, 1, 2, 2], &[1.0, 2.0, 3.0, 10.0, 20.0]).unwrap();
        let s = group_summaries(&d).unwrap();
        let weighted: f64 = (0..2)
            .map(|j| s.count(j) as f64 / s.total() as f64 * s.mean(j)[0])
            .sum();
        assert_relative_eq!(s.grand_mean()[0], weighted, epsilon = 1e-14);
        assert_relative_eq!(s.grand_mean()[0], 36.0 / 5.0, epsilon = 1e-14);
    }

    #[test]
    fn d_hat_diagonal_matches_display() {
        let d = ExperimentDataset::scalar_cre(&[1, 1, 1, 2, 2], &[1.0, 2.0, 4.0, 10.0, 20.0])
            .unwrap();
        let s = group_summaries(&d).unwrap();
        let dh = s.d_hat();
        for j in 0..2 {
            assert_relative_eq!(
                dh[(j, j)],
                5.0 * s.var(j) / s.count(j) as f64,
                epsilon = 1e-14
            );
        }
        assert_eq!(dh[(0, 1)], 0.0);
    }

    #[test]
    fn charness_moments_round_trip() {
        // Synthetic arms matched to the reported first two moments.
        let (means, vars): ([f64; 3], [f64; 3]) = ([-0.029, 0.054, 0.640], [0.152, 0.386, 1.489]);
        let mut arms = Vec::new();
        let mut ys = Vec::new();
        for j in 0..3 {
            let base: Vec<f64> = (0..40).map(|i| i as f64).collect();
            let m = base.iter().sum::<f64>() / 40.0;
            let sv = base.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / 39.0;
            for v in &base {
                arms.push(j + 1);
                ys.push(means[j] + (v - m) / sv.sqrt() * vars[j].sqrt());
            }
        }
        let d = ExperimentDataset::scalar_cre(&arms, &ys).unwrap();
        let s = group_summaries(&d).unwrap();
        for j in 0..3 {
            assert_relative_eq!(s.mean(j)[0], means[j], epsilon = 1e-10);
            assert_relative_eq!(s.var(j), vars[j], epsilon = 1e-10);
            assert_eq!(s.count(j), 40);
        }
    }

    proptest! {
        #[test]
        fn summaries_invariant_to_unit_order(seed in 0u64..500) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = 12;
            let arms: Vec<usize> = (0..n).map(|i| i % 3 + 1).collect();
            let y: Vec<f64> = (0..n).map(|i| (i as f64) * 0.7 + ((i * i) % 5) as f64).collect();
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut rng);
            let base = ExperimentDataset::scalar_cre(&arms, &y).unwrap();
            let shuffled = ExperimentDataset::scalar_cre(
                &idx.iter().map(|&i| arms[i]).collect::<Vec<_>>(),
                &idx.iter().map(|&i| y[i]).collect::<Vec<_>>(),
            ).unwrap();
            let (a, b) = (group_summaries(&base).unwrap(), group_summaries(&shuffled).unwrap());
            for j in 0..3 {
                prop_assert!((a.mean(j)[0] - b.mean(j)[0]).abs() < 1e-12);
                prop_assert!((a.var(j) - b.var(j)).abs() < 1e-12);
            }
        }

        #[test]
        fn summaries_affine_equivariant(a in 0.1f64..5.0, b in -10.0f64..10.0) {
            let arms = [1, 1, 1, 2, 2, 2];
            let y = [1.0, 2.0, 4.5, -1.0, 0.0, 3.0];
            let d0 = ExperimentDataset::scalar_cre(&arms, &y).unwrap();
            let d1 = ExperimentDataset::scalar_cre(
                &arms,
                &y.iter().map(|v| a * v + b).collect::<Vec<_>>(),
            ).unwrap();
            let (s0, s1) = (group_summaries(&d0).unwrap(), group_summaries(&d1).unwrap());
            for j in 0..2 {
                prop_assert!((s1.mean(j)[0] - (a * s0.mean(j)[0] + b)).abs() < 1e-10);
                prop_assert!((s1.var(j) - a * a * s0.var(j)).abs() < 1e-10);
            }
        }
    }
}
