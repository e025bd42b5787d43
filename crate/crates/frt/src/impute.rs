//! Science-table imputation under the compatible sharp null.
//!
//! Solving stack(C, C~, 1')^{-1} stack(x, x~, 0) gives the strict-additivity
//! offsets z; every missing potential outcome is then
//! Y*_i(j) = Y_i^obs + z_j - z_{W_i}. Stratified designs solve one z per
//! stratum, vector outcomes one z row per coordinate, and cluster designs
//! first collapse to cluster totals.

use nalgebra::{DMatrix, DVector};

use crate::contrast::Hypothesis;
use crate::error::{FrtError, Result};
use crate::model::{Design, ExperimentDataset, RawUnit};

const ILL_CONDITIONED: f64 = 1e12;
const SOLVE_TOL: f64 = 1e-8;

/// The strict-additivity offsets, one row per outcome coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ImputationVector {
    /// d x J: entry (k, j) shifts coordinate k under arm j.
    pub z: DMatrix<f64>,
}

/// Solves the per-coordinate linear systems for z at the hypothesis' global
/// target.
pub fn solve_z(h: &Hypothesis) -> Result<ImputationVector> {
    solve_z_for_target(h, h.target())
}

/// Solves for z at an arbitrary stacked target (used per stratum).
pub fn solve_z_for_target(h: &Hypothesis, target: &[f64]) -> Result<ImputationVector> {
    let (j, d) = (h.n_arms(), h.dim());
    let mut z = DMatrix::zeros(d, j);
    let mut offset = 0usize;
    for (k, block) in h.blocks().iter().enumerate() {
        let mk = block.c.nrows();
        let x_k = &target[offset..offset + mk];
        offset += mk;

        let mut a = DMatrix::zeros(j, j);
        let mut rhs = DVector::zeros(j);
        for r in 0..mk {
            for c in 0..j {
                a[(r, c)] = block.c[(r, c)];
            }
            rhs[r] = x_k[r];
        }
        for r in 0..block.c_tilde.nrows() {
            for c in 0..j {
                a[(mk + r, c)] = block.c_tilde[(r, c)];
            }
            rhs[mk + r] = block.x_tilde[r];
        }
        for c in 0..j {
            a[(j - 1, c)] = 1.0;
        }

        let svd = a.clone().svd(false, false);
        let (smax, smin) = (
            svd.singular_values.max(),
            svd.singular_values.min(),
        );
        if !(smin > 0.0) || smax / smin > ILL_CONDITIONED {
            return Err(FrtError::IllConditioned {
                cond: if smin > 0.0 { smax / smin } else { f64::INFINITY },
            });
        }
        let lu = a.clone().lu();
        let sol = lu.solve(&rhs).ok_or(FrtError::IllConditioned {
            cond: f64::INFINITY,
        })?;
        let resid = (&a * &sol - &rhs).amax();
        if resid > SOLVE_TOL * (1.0 + rhs.amax()) {
            return Err(FrtError::IllConditioned { cond: smax / smin });
        }
        for c in 0..j {
            z[(k, c)] = sol[c];
        }
    }
    Ok(ImputationVector { z })
}

/// The imputed N x J table of potential outcomes, stored as per-unit base
/// values plus per-stratum additivity offsets.
#[derive(Debug, Clone)]
pub struct ScienceTable {
    n_units: usize,
    n_arms: usize,
    dim: usize,
    /// b_i = Y_i^obs - z_{., W_i}; Y*_i(j) = b_i + z_{., j}.
    base: Vec<f64>,
    /// One d x J offset matrix per stratum (a single entry for a CRE).
    z_by_stratum: Vec<DMatrix<f64>>,
    /// Stratum of each unit (all zero for a CRE).
    strata: Vec<usize>,
}

impl ScienceTable {
    pub fn n_units(&self) -> usize {
        self.n_units
    }

    pub fn n_arms(&self) -> usize {
        self.n_arms
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn base_of(&self, unit: usize) -> &[f64] {
        &self.base[unit * self.dim..(unit + 1) * self.dim]
    }

    pub fn stratum_of(&self, unit: usize) -> usize {
        self.strata[unit]
    }

    pub fn z(&self, stratum: usize) -> &DMatrix<f64> {
        &self.z_by_stratum[stratum]
    }

    /// Imputed potential outcome Y*_i(j).
    pub fn outcome(&self, unit: usize, arm: usize) -> Vec<f64> {
        let z = &self.z_by_stratum[self.strata[unit]];
        self.base_of(unit)
            .iter()
            .enumerate()
            .map(|(k, b)| b + z[(k, arm)])
            .collect()
    }

    /// Column mean of arm j over all units (coordinate vector).
    pub fn column_mean(&self, arm: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for i in 0..self.n_units {
            for (k, v) in self.outcome(i, arm).iter().enumerate() {
                out[k] += v;
            }
        }
        for v in &mut out {
            *v /= self.n_units as f64;
        }
        out
    }
}

/// Imputes the full science table for `data` under the sharp null compatible
/// with `h` (FRT step 2). Stratified datasets are imputed stratum by stratum
/// at the targets `h.stratum_target(h)`, which must average back to the
/// global target.
pub fn impute(data: &ExperimentDataset, h: &Hypothesis) -> Result<ScienceTable> {
    if h.n_arms() != data.n_arms() {
        return Err(FrtError::InvalidHypothesis(format!(
            "hypothesis is over {} arms, dataset has {}",
            h.n_arms(),
            data.n_arms()
        )));
    }
    if h.dim() != data.dim() {
        return Err(FrtError::InvalidHypothesis(format!(
            "hypothesis is over {}-dimensional outcomes, dataset has {}",
            h.dim(),
            data.dim()
        )));
    }

    let n_strata = data.n_strata();
    if let Some(targets) = h.stratum_targets() {
        if targets.len() != n_strata {
            return Err(FrtError::InvalidHypothesis(format!(
                "{} stratum targets for {} strata",
                targets.len(),
                n_strata
            )));
        }
        // sum_h omega_h x_[h] must reproduce x.
        let n = data.n_units() as f64;
        let mut sizes = vec![0usize; n_strata];
        if let Some(strata) = data.strata() {
            for &s in strata {
                sizes[s] += 1;
            }
        } else {
            sizes[0] = data.n_units();
        }
        let mut gap = 0.0f64;
        for (r, &x_r) in h.target().iter().enumerate() {
            let avg: f64 = (0..n_strata)
                .map(|s| sizes[s] as f64 / n * targets[s][r])
                .sum();
            gap = gap.max((avg - x_r).abs());
        }
        if gap > SOLVE_TOL * (1.0 + h.target().iter().fold(0.0f64, |m, v| m.max(v.abs()))) {
            return Err(FrtError::StratumTargetMismatch { gap });
        }
    }

    let mut z_by_stratum = Vec::with_capacity(n_strata);
    for s in 0..n_strata {
        z_by_stratum.push(solve_z_for_target(h, h.stratum_target(s))?.z);
    }

    let (n, d) = (data.n_units(), data.dim());
    let strata: Vec<usize> = match data.strata() {
        Some(s) => s.to_vec(),
        None => vec![0; n],
    };
    let mut base = Vec::with_capacity(n * d);
    for i in 0..n {
        let z = &z_by_stratum[strata[i]];
        let arm = data.arms()[i];
        for (k, y) in data.outcome(i).iter().enumerate() {
            base.push(y - z[(k, arm)]);
        }
    }
    Ok(ScienceTable {
        n_units: n,
        n_arms: data.n_arms(),
        dim: d,
        base,
        z_by_stratum,
        strata,
    })
}

/// A cluster-randomized dataset collapsed to cluster totals.
#[derive(Debug, Clone)]
pub struct AggregatedClusters {
    /// CRE over clusters; outcomes are within-cluster sums.
    pub data: ExperimentDataset,
    /// Unit count of the original dataset.
    pub n_original_units: usize,
    /// Cluster count L.
    pub n_clusters: usize,
}

impl AggregatedClusters {
    /// Testing H(C, x) on unit means becomes H(C, s x) on cluster totals.
    pub fn target_scale(&self) -> f64 {
        self.n_original_units as f64 / self.n_clusters as f64
    }
}

/// Sums outcomes within clusters and returns the cluster-level CRE.
pub fn aggregate_clusters(data: &ExperimentDataset) -> Result<AggregatedClusters> {
    let clusters = data
        .clusters()
        .ok_or_else(|| FrtError::Invalid("dataset has no clusters".into()))?;
    let (d, l) = (data.dim(), data.n_clusters());
    let mut totals = vec![0.0; l * d];
    let mut arm_of = vec![usize::MAX; l];
    for (i, &c) in clusters.iter().enumerate() {
        arm_of[c] = data.arms()[i];
        for (k, v) in data.outcome(i).iter().enumerate() {
            totals[c * d + k] += v;
        }
    }
    let units: Vec<RawUnit> = (0..l)
        .map(|c| RawUnit {
            id: Some(data.cluster_labels()[c].clone()),
            treatment: data.arm_labels()[arm_of[c]].clone(),
            outcome: totals[c * d..(c + 1) * d].to_vec(),
            stratum: None,
            cluster: None,
        })
        .collect();
    Ok(AggregatedClusters {
        data: ExperimentDataset::from_units(units)?,
        n_original_units: data.n_units(),
        n_clusters: l,
    })
}

/// Runs cluster aggregation when the design asks for it, rescaling the
/// hypothesis target; otherwise passes the inputs through.
pub fn prepare_for_engine(
    data: &ExperimentDataset,
    h: &Hypothesis,
) -> Result<(ExperimentDataset, Hypothesis)> {
    if data.design() == Design::ClusterCre {
        let agg = aggregate_clusters(data)?;
        let scaled = h.scale_target(agg.target_scale());
        Ok((agg.data, scaled))
    } else {
        Ok((data.clone(), h.clone()))
    }
}
