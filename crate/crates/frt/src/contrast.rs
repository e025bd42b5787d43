//! Contrast matrices and null hypotheses.
//!
//! A hypothesis bundles a full-row-rank contrast C (rows orthogonal to 1_J),
//! its target x, and a completion C~ whose rows span the rest of the
//! orthogonal complement of 1_J. For vector outcomes the hypothesis is
//! assembled coordinate by coordinate and stacked over the arm-major mean
//! vector of length dJ, which keeps cross-coordinate comparisons
//! unrepresentable by construction.

use nalgebra::DMatrix;

use crate::error::{FrtError, Result};

/// Relative tolerance for the contrast condition ||C 1||_inf <= tol * ||C||_inf.
const CONTRAST_TOL: f64 = 1e-10;

/// Absolute residual below which a completion candidate is considered
/// dependent on the basis built so far.
const COMPLETION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Orientation {
    /// Equality null C Ybar = x, tested two-sided through quadratic forms.
    TwoSided,
    /// Inequality null C Ybar >= x, tested one-sided through t statistics.
    OneSidedGe,
}

/// Hypothesis piece for one outcome coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateBlock {
    /// m_k x J contrast (possibly zero rows).
    pub c: DMatrix<f64>,
    /// Length-m_k target.
    pub x: Vec<f64>,
    /// (J - 1 - m_k) x J completion, rows orthonormal.
    pub c_tilde: DMatrix<f64>,
    /// Completion target; zero unless a caller overrides it.
    pub x_tilde: Vec<f64>,
}

/// A testable null hypothesis over the arm means.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypothesis {
    n_arms: usize,
    blocks: Vec<CoordinateBlock>,
    orientation: Orientation,
    /// Per-stratum targets x_[h] (stacked over blocks); SRE only.
    stratum_targets: Option<Vec<Vec<f64>>>,
    stacked_c: DMatrix<f64>,
    stacked_x: Vec<f64>,
}

fn stack_blocks(n_arms: usize, blocks: &[CoordinateBlock]) -> (DMatrix<f64>, Vec<f64>) {
    let d = blocks.len();
    let m: usize = blocks.iter().map(|b| b.c.nrows()).sum();
    let mut c = DMatrix::zeros(m, d * n_arms);
    let mut x = Vec::with_capacity(m);
    let mut row = 0;
    for (k, b) in blocks.iter().enumerate() {
        for r in 0..b.c.nrows() {
            for j in 0..n_arms {
                c[(row, j * d + k)] = b.c[(r, j)];
            }
            x.push(b.x[r]);
            row += 1;
        }
    }
    (c, x)
}

impl Hypothesis {
    /// Scalar-outcome hypothesis from a contrast matrix and target.
    pub fn new(c: DMatrix<f64>, x: Vec<f64>) -> Result<Self> {
        Self::from_blocks(vec![(c, x)])
    }

    /// Scalar-outcome hypothesis with an explicit completion (used by the
    /// factorial preset, where the unused model-matrix rows complete C).
    pub fn with_completion(c: DMatrix<f64>, x: Vec<f64>, c_tilde: DMatrix<f64>) -> Result<Self> {
        let n_arms = c.ncols();
        validate_contrast(&c)?;
        if c.nrows() + c_tilde.nrows() + 1 != n_arms {
            return Err(FrtError::InvalidHypothesis(format!(
                "completion must have {} rows, got {}",
                n_arms - c.nrows() - 1,
                c_tilde.nrows()
            )));
        }
        let x_tilde = vec![0.0; c_tilde.nrows()];
        let block = CoordinateBlock {
            c,
            x,
            c_tilde,
            x_tilde,
        };
        let (stacked_c, stacked_x) = stack_blocks(n_arms, std::slice::from_ref(&block));
        Ok(Self {
            n_arms,
            blocks: vec![block],
            orientation: Orientation::TwoSided,
            stratum_targets: None,
            stacked_c,
            stacked_x,
        })
    }

    /// Vector-outcome hypothesis from per-coordinate (C_k, x_k) pairs; a pair
    /// with zero rows leaves that coordinate unconstrained beyond the sharp
    /// null of no effect.
    pub fn from_blocks(blocks: Vec<(DMatrix<f64>, Vec<f64>)>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(FrtError::InvalidHypothesis("no contrast blocks".into()));
        }
        let n_arms = blocks[0].0.ncols();
        if blocks.iter().any(|(c, _)| c.ncols() != n_arms) {
            return Err(FrtError::InvalidHypothesis(
                "blocks disagree on the number of arms".into(),
            ));
        }
        if blocks.iter().all(|(c, _)| c.nrows() == 0) {
            return Err(FrtError::InvalidHypothesis(
                "at least one block must have a row".into(),
            ));
        }
        let mut built = Vec::with_capacity(blocks.len());
        for (c, x) in blocks {
            if x.len() != c.nrows() {
                return Err(FrtError::InvalidHypothesis(format!(
                    "target length {} does not match {} contrast rows",
                    x.len(),
                    c.nrows()
                )));
            }
            if c.nrows() > 0 {
                validate_contrast(&c)?;
            }
            let c_tilde = complete_contrast_impl(&c, n_arms)?;
            let x_tilde = vec![0.0; c_tilde.nrows()];
            built.push(CoordinateBlock {
                c,
                x,
                c_tilde,
                x_tilde,
            });
        }
        let (stacked_c, stacked_x) = stack_blocks(n_arms, &built);
        Ok(Self {
            n_arms,
            blocks: built,
            orientation: Orientation::TwoSided,
            stratum_targets: None,
            stacked_c,
            stacked_x,
        })
    }

    pub fn orient(mut self, orientation: Orientation) -> Result<Self> {
        if orientation == Orientation::OneSidedGe && self.m() != 1 {
            return Err(FrtError::InvalidHypothesis(
                "one-sided hypotheses need m = 1; use the Bonferroni runner for m > 1".into(),
            ));
        }
        self.orientation = orientation;
        Ok(self)
    }

    /// Replaces the target x, keeping contrasts and completions. The new
    /// target is split across blocks in stacking order.
    pub fn with_target(&self, x: &[f64]) -> Result<Self> {
        if x.len() != self.m() {
            return Err(FrtError::InvalidHypothesis(format!(
                "target length {} does not match m = {}",
                x.len(),
                self.m()
            )));
        }
        let mut out = self.clone();
        let mut off = 0;
        for b in &mut out.blocks {
            let mk = b.c.nrows();
            b.x = x[off..off + mk].to_vec();
            off += mk;
        }
        out.stacked_x = x.to_vec();
        out.stratum_targets = None;
        Ok(out)
    }

    /// Sets per-stratum targets x_[h] (stacked order). Their
    /// weighted average must equal x, which `impute` checks against the data.
    pub fn with_stratum_targets(mut self, targets: Vec<Vec<f64>>) -> Result<Self> {
        if targets.iter().any(|t| t.len() != self.m()) {
            return Err(FrtError::InvalidHypothesis(
                "each stratum target must have length m".into(),
            ));
        }
        self.stratum_targets = Some(targets);
        Ok(self)
    }

    /// Multiplies every target by `s` (cluster aggregation rescales x to
    /// N x / L).
    pub fn scale_target(&self, s: f64) -> Self {
        let mut out = self.clone();
        for b in &mut out.blocks {
            for v in &mut b.x {
                *v *= s;
            }
            for v in &mut b.x_tilde {
                *v *= s;
            }
        }
        for v in &mut out.stacked_x {
            *v *= s;
        }
        if let Some(ts) = &mut out.stratum_targets {
            for t in ts {
                for v in t {
                    *v *= s;
                }
            }
        }
        out
    }

    pub fn n_arms(&self) -> usize {
        self.n_arms
    }

    /// Outcome dimension this hypothesis addresses.
    pub fn dim(&self) -> usize {
        self.blocks.len()
    }

    /// Total row count m of the stacked contrast.
    pub fn m(&self) -> usize {
        self.stacked_x.len()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn blocks(&self) -> &[CoordinateBlock] {
        &self.blocks
    }

    /// Stacked m x dJ contrast over the arm-major mean vector.
    pub fn contrast(&self) -> &DMatrix<f64> {
        &self.stacked_c
    }

    pub fn target(&self) -> &[f64] {
        &self.stacked_x
    }

    pub fn stratum_targets(&self) -> Option<&[Vec<f64>]> {
        self.stratum_targets.as_deref()
    }

    /// Stacked target for stratum h: explicit x_[h] if set, else x itself
    /// (which always satisfies the averaging constraint).
    pub fn stratum_target(&self, h: usize) -> &[f64] {
        match &self.stratum_targets {
            Some(t) => &t[h],
            None => &self.stacked_x,
        }
    }
}

fn validate_contrast(c: &DMatrix<f64>) -> Result<()> {
    let scale = c.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return Err(FrtError::NotContrast);
    }
    for r in 0..c.nrows() {
        let s: f64 = c.row(r).iter().sum();
        if s.abs() > CONTRAST_TOL * scale {
            return Err(FrtError::NotContrast);
        }
    }
    Ok(())
}

/// Modified Gram-Schmidt completion: returns a (J - m - 1) x J matrix with
/// orthonormal rows orthogonal to the rows of C and to 1_J. Candidates are
/// seeded from the standard basis in index order, so the result is
/// deterministic. Fails with `RankDeficient` when C's rows are dependent.
pub fn complete_contrast(c: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    validate_contrast(c)?;
    complete_contrast_impl(c, c.ncols())
}

fn complete_contrast_impl(c: &DMatrix<f64>, n_arms: usize) -> Result<DMatrix<f64>> {
    let j = n_arms;
    let m = c.nrows();
    if m + 1 > j {
        return Err(FrtError::RankDeficient);
    }

    // Orthonormal basis of span{1_J, rows of C}.
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(j);
    basis.push(vec![1.0 / (j as f64).sqrt(); j]);
    for r in 0..m {
        let mut v: Vec<f64> = c.row(r).iter().cloned().collect();
        let norm0 = norm(&v);
        for b in &basis {
            let dot = dot(&v, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= dot * bi;
            }
        }
        let norm1 = norm(&v);
        if norm1 <= 1e-10 * norm0.max(1.0) {
            return Err(FrtError::RankDeficient);
        }
        for vi in &mut v {
            *vi /= norm1;
        }
        basis.push(v);
    }

    // Extend with standard-basis seeds to fill the orthogonal complement.
    let want = j - m - 1;
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(want);
    for seed in 0..j {
        if rows.len() == want {
            break;
        }
        let mut v = vec![0.0; j];
        v[seed] = 1.0;
        for b in basis.iter().chain(rows.iter()) {
            let dot = dot(&v, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= dot * bi;
            }
        }
        // Second orthogonalization pass for numerical hygiene.
        for b in basis.iter().chain(rows.iter()) {
            let dot = dot(&v, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= dot * bi;
            }
        }
        let n1 = norm(&v);
        if n1 > COMPLETION_TOL {
            for vi in &mut v {
                *vi /= n1;
            }
            rows.push(v);
        }
    }
    debug_assert_eq!(rows.len(), want);
    Ok(DMatrix::from_fn(want, j, |r, cidx| rows[r][cidx]))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// The +/-1 model matrix of a 2^K factorial design: K main-effect rows, then
/// interactions grouped by order, ending with the K-way interaction. Rows are
/// mutually orthogonal and orthogonal to 1.
#[derive(Debug, Clone)]
pub struct ModelMatrix2K {
    k: u32,
    rows: Vec<Vec<i32>>,
    labels: Vec<String>,
}

impl ModelMatrix2K {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n_arms(&self) -> usize {
        1 << self.k
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Row g_i, 1-based as in the factorial-effect indexing.
    pub fn row(&self, idx1: usize) -> &[i32] {
        &self.rows[idx1 - 1]
    }

    pub fn label(&self, idx1: usize) -> &str {
        &self.labels[idx1 - 1]
    }

    pub fn rows(&self) -> &[Vec<i32>] {
        &self.rows
    }

    /// Rows `effects` (1-based) as a float contrast matrix.
    pub fn contrast_rows(&self, effects: &[usize]) -> DMatrix<f64> {
        let j = self.n_arms();
        DMatrix::from_fn(effects.len(), j, |r, c| self.rows[effects[r] - 1][c] as f64)
    }
}

/// Builds the 2^K model matrix; `cap` bounds the arm count 2^K.
pub fn model_matrix(k: u32, cap: usize) -> Result<ModelMatrix2K> {
    if k == 0 {
        return Err(FrtError::Invalid("factor count must be positive".into()));
    }
    let j: usize = 1usize
        .checked_shl(k)
        .ok_or(FrtError::CapExceeded {
            count: u128::MAX,
            cap: cap as u128,
        })?;
    if j > cap {
        return Err(FrtError::CapExceeded {
            count: j as u128,
            cap: cap as u128,
        });
    }

    // Main effects: (-1 repeated 2^{K-f}, +1 repeated 2^{K-f}) repeated 2^{f-1} times.
    let mut mains: Vec<Vec<i32>> = Vec::with_capacity(k as usize);
    for f in 1..=k {
        let half = 1usize << (k - f);
        let mut row = Vec::with_capacity(j);
        while row.len() < j {
            row.extend(std::iter::repeat(-1).take(half));
            row.extend(std::iter::repeat(1).take(half));
        }
        mains.push(row);
    }

    let mut rows = mains.clone();
    let mut labels: Vec<String> = (1..=k).map(|f| f.to_string()).collect();
    // Interactions by order, each order in lexicographic subset order.
    for order in 2..=k {
        for combo in combinations(k as usize, order as usize) {
            let mut row = vec![1i32; j];
            for &f in &combo {
                for (r, m) in row.iter_mut().zip(&mains[f]) {
                    *r *= m;
                }
            }
            labels.push(
                combo
                    .iter()
                    .map(|f| (f + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(":"),
            );
            rows.push(row);
        }
    }
    Ok(ModelMatrix2K { k, rows, labels })
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.clone());
        // advance to next lexicographic combination
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - r {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for k in i + 1..r {
            idx[k] = idx[k - 1] + 1;
        }
    }
}

/// Built-in contrast families selectable from the CLI.
#[derive(Debug, Clone, PartialEq)]
pub enum ContrastPreset {
    /// All-arms equality: C = (1_{J-1}, -I_{J-1}).
    Anova,
    /// First arm versus second arm.
    TreatmentControl,
    /// Dose trend row a_j - a_+ N_j / N.
    Trend { doses: Vec<f64> },
    /// Selected rows of the 2^K model matrix; the unused rows complete C.
    FactorialSubset { k: u32, effects: Vec<usize> },
}

/// Builds the preset hypothesis (x = 0) for a design with the given arm sizes.
pub fn preset_contrast(preset: &ContrastPreset, arm_sizes: &[usize]) -> Result<Hypothesis> {
    let j = arm_sizes.len();
    match preset {
        ContrastPreset::Anova => {
            if j < 2 {
                return Err(FrtError::Invalid("anova needs at least two arms".into()));
            }
            let mut c = DMatrix::zeros(j - 1, j);
            for r in 0..j - 1 {
                c[(r, 0)] = 1.0;
                c[(r, r + 1)] = -1.0;
            }
            Hypothesis::new(c, vec![0.0; j - 1])
        }
        ContrastPreset::TreatmentControl => {
            if j < 2 {
                return Err(FrtError::Invalid(
                    "treatment-control needs at least two arms".into(),
                ));
            }
            let mut c = DMatrix::zeros(1, j);
            c[(0, 0)] = 1.0;
            c[(0, 1)] = -1.0;
            Hypothesis::new(c, vec![0.0])
        }
        ContrastPreset::Trend { doses } => {
            if doses.len() != j {
                return Err(FrtError::Invalid(format!(
                    "{} doses for {} arms",
                    doses.len(),
                    j
                )));
            }
            let n: f64 = arm_sizes.iter().sum::<usize>() as f64;
            let a_plus: f64 = doses.iter().sum();
            let row: Vec<f64> = doses
                .iter()
                .zip(arm_sizes)
                .map(|(&a, &nj)| a - a_plus * nj as f64 / n)
                .collect();
            let scale = row.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let dose_scale = doses.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
            if scale <= 1e-12 * dose_scale {
                return Err(FrtError::BadDoses);
            }
            Hypothesis::new(DMatrix::from_row_slice(1, j, &row), vec![0.0])
        }
        ContrastPreset::FactorialSubset { k, effects } => {
            let g = model_matrix(*k, j.max(1 << *k))?;
            if g.n_arms() != j {
                return Err(FrtError::Invalid(format!(
                    "2^{k} = {} arms expected, dataset has {j}",
                    g.n_arms()
                )));
            }
            if effects.is_empty() {
                return Err(FrtError::Invalid("empty factorial subset".into()));
            }
            if effects.iter().any(|&e| e == 0 || e > g.n_rows()) {
                return Err(FrtError::Invalid(format!(
                    "factorial effects must be in 1..={}",
                    g.n_rows()
                )));
            }
            let c = g.contrast_rows(effects);
            // Natural completion: the model-matrix rows outside the subset.
            let rest: Vec<usize> = (1..=g.n_rows()).filter(|i| !effects.contains(i)).collect();
            let mut c_tilde = g.contrast_rows(&rest);
            let scale = 1.0 / (j as f64).sqrt();
            c_tilde.iter_mut().for_each(|v| *v *= scale);
            Hypothesis::with_completion(c, vec![0.0; effects.len()], c_tilde)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mat(rows: &[&[f64]]) -> DMatrix<f64> {
        DMatrix::from_fn(rows.len(), rows[0].len(), |r, c| rows[r][c])
    }

    #[test]
    fn completion_empty_when_m_is_j_minus_1() {
        let c = mat(&[&[1.0, -1.0]]);
        assert_eq!(complete_contrast(&c).unwrap().nrows(), 0);
    }

    #[test]
    fn completion_orthogonality_j3() {
        let c = mat(&[&[1.0, -1.0, 0.0]]);
        let ct = complete_contrast(&c).unwrap();
        assert_eq!(ct.nrows(), 1);
        // orthogonal to C and to 1, i.e. proportional to (1, 1, -2)
        assert_relative_eq!(ct.row(0).iter().sum::<f64>(), 0.0, epsilon = 1e-12);
        assert_relative_eq!((ct.clone() * c.transpose())[(0, 0)], 0.0, epsilon = 1e-12);
        let dir = ct[(0, 0)] / 1.0;
        assert_relative_eq!(ct[(0, 1)], dir, epsilon = 1e-12);
        assert_relative_eq!(ct[(0, 2)], -2.0 * dir, epsilon = 1e-12);
    }

    #[test]
    fn completion_of_factorial_mains_is_interaction() {
        let g = model_matrix(2, 64).unwrap();
        let c = g.contrast_rows(&[1, 2]);
        let ct = complete_contrast(&c).unwrap();
        assert_eq!(ct.nrows(), 1);
        // proportional to g3 = (1, -1, -1, 1)
        let g3 = [1.0, -1.0, -1.0, 1.0];
        let scale = ct[(0, 0)] / g3[0];
        for j in 0..4 {
            assert_relative_eq!(ct[(0, j)], scale * g3[j], epsilon = 1e-12);
        }
    }

    #[test]
    fn dependent_rows_rejected() {
        let c = mat(&[&[1.0, -1.0, 0.0], &[2.0, -2.0, 0.0]]);
        assert!(matches!(complete_contrast(&c), Err(FrtError::RankDeficient)));
    }

    #[test]
    fn non_contrast_rejected() {
        let c = mat(&[&[1.0, 1.0, 0.0]]);
        assert!(matches!(complete_contrast(&c), Err(FrtError::NotContrast)));
    }

    #[test]
    fn model_matrix_k2_matches_construction() {
        let g = model_matrix(2, 64).unwrap();
        assert_eq!(g.rows(), &[
            vec![-1, -1, 1, 1],
            vec![-1, 1, -1, 1],
            vec![1, -1, -1, 1],
        ]);
        assert_eq!(g.label(3), "1:2");
    }

    #[test]
    fn model_matrix_k1() {
        let g = model_matrix(1, 64).unwrap();
        assert_eq!(g.rows(), &[vec![-1, 1]]);
    }

    #[test]
    fn model_matrix_orthogonality_k3_exact() {
        let g = model_matrix(3, 64).unwrap();
        assert_eq!(g.n_rows(), 7);
        for a in 0..7 {
            assert_eq!(g.rows()[a].iter().sum::<i32>(), 0);
            for b in 0..7 {
                let dot: i32 = g.rows()[a]
                    .iter()
                    .zip(&g.rows()[b])
                    .map(|(x, y)| x * y)
                    .sum();
                assert_eq!(dot, if a == b { 8 } else { 0 });
            }
        }
    }

    #[test]
    fn model_matrix_cap() {
        assert!(matches!(
            model_matrix(9, 256),
            Err(FrtError::CapExceeded { .. })
        ));
    }

    #[test]
    fn anova_preset_spans_contrast_space() {
        let h = preset_contrast(&ContrastPreset::Anova, &[5, 5, 5]).unwrap();
        assert_eq!(h.contrast(), &mat(&[&[1.0, -1.0, 0.0], &[1.0, 0.0, -1.0]]));
        assert_eq!(h.contrast().rank(1e-12), 2);
    }

    #[test]
    fn trend_preset_balanced_doses_123() {
        let h = preset_contrast(
            &ContrastPreset::Trend {
                doses: vec![1.0, 2.0, 3.0],
            },
            &[7, 7, 7],
        )
        .unwrap();
        // a+ N_j / N = 2 for every arm, so the row is (-1, 0, 1)
        let c = h.contrast();
        assert_relative_eq!(c[(0, 0)], -1.0, epsilon = 1e-12);
        assert_relative_eq!(c[(0, 1)], 0.0, epsilon = 1e-12);
        assert_relative_eq!(c[(0, 2)], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn trend_constant_doses_rejected() {
        let err = preset_contrast(
            &ContrastPreset::Trend {
                doses: vec![2.0, 2.0, 2.0],
            },
            &[5, 5, 5],
        )
        .unwrap_err();
        assert!(matches!(err, FrtError::BadDoses));
    }

    #[test]
    fn factorial_preset_uses_model_rows() {
        let h = preset_contrast(
            &ContrastPreset::FactorialSubset {
                k: 2,
                effects: vec![1, 2],
            },
            &[4, 4, 4, 4],
        )
        .unwrap();
        let g = model_matrix(2, 64).unwrap();
        assert_eq!(h.contrast(), &g.contrast_rows(&[1, 2]));
        // completion proportional to g3
        let b = &h.blocks()[0];
        assert_eq!(b.c_tilde.nrows(), 1);
        let scale = b.c_tilde[(0, 0)];
        for j in 0..4 {
            assert_relative_eq!(
                b.c_tilde[(0, j)],
                scale * g.row(3)[j] as f64 / g.row(3)[0] as f64,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn vector_assembly_matches_worked_example() {
        // J = 3, d = 2: same ANOVA hypothesis entry by entry
        let c1 = mat(&[&[1.0, -1.0, 0.0], &[1.0, 0.0, -1.0]]);
        let h = Hypothesis::from_blocks(vec![
            (c1.clone(), vec![0.0, 0.0]),
            (c1.clone(), vec![0.0, 0.0]),
        ])
        .unwrap();
        let expect = mat(&[
            &[1.0, 0.0, -1.0, 0.0, 0.0, 0.0],
            &[1.0, 0.0, 0.0, 0.0, -1.0, 0.0],
            &[0.0, 1.0, 0.0, -1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0, 0.0, -1.0],
        ]);
        assert_eq!(h.contrast(), &expect);

        // different hypotheses entry by entry
        let h2 = Hypothesis::from_blocks(vec![
            (mat(&[&[1.0, -1.0, 0.0]]), vec![0.0]),
            (mat(&[&[0.0, 1.0, -1.0]]), vec![0.0]),
        ])
        .unwrap();
        let expect2 = mat(&[
            &[1.0, 0.0, -1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0, 0.0, -1.0],
        ]);
        assert_eq!(h2.contrast(), &expect2);
    }

    #[test]
    fn single_block_equals_scalar_hypothesis() {
        let c = mat(&[&[1.0, -1.0]]);
        let h = Hypothesis::from_blocks(vec![(c.clone(), vec![0.5])]).unwrap();
        let hs = Hypothesis::new(c, vec![0.5]).unwrap();
        assert_eq!(h.contrast(), hs.contrast());
        assert_eq!(h.target(), hs.target());
    }

    #[test]
    fn one_sided_needs_single_row() {
        let h = preset_contrast(&ContrastPreset::Anova, &[4, 4, 4]).unwrap();
        assert!(h.orient(Orientation::OneSidedGe).is_err());
    }
}
