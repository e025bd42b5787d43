//! Test statistics evaluated from group summaries.
//!
//! Everything here consumes per-arm counts/means/covariances rather than raw
//! data, so the permutation engine can reuse incremental summaries. The
//! studentized X^2 is the workhorse; B, F, and the Huber-White variant are
//! provided for comparison, and signed t statistics cover one-sided and
//! trend tests. All quadratic forms go through a factorization with a
//! condition guard instead of explicit inverses.

use nalgebra::DMatrix;

use crate::contrast::Hypothesis;
use crate::error::{FrtError, Result};
use crate::linalg::CholScratch;
use crate::model::GroupSummaries;

/// Which statistic to feed the randomization test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum StatisticKind {
    /// Studentized Wald statistic with the conservative covariance estimate.
    X2,
    /// Box-type statistic N Ybar' M Ybar / tr(M D); x = 0 only.
    Box,
    /// Classical OLS F with the pooled variance.
    F,
    /// Wald statistic with the Huber-White covariance.
    X2Hw,
    /// Signed t for inequality nulls C Ybar >= x; large when the data
    /// undershoot the target.
    T,
    /// max(t, 0).
    TPlus,
    /// Dose-trend t, oriented to reject for large C Ybar.
    Trend,
    /// X^2 for stratified designs; identical to X2 when H = 1.
    StratifiedX2,
}

impl StatisticKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::X2 => "x2",
            Self::Box => "box",
            Self::F => "f",
            Self::X2Hw => "x2hw",
            Self::T => "t",
            Self::TPlus => "tplus",
            Self::Trend => "trend",
            Self::StratifiedX2 => "stratified-x2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "x2" => Self::X2,
            "box" => Self::Box,
            "f" => Self::F,
            "x2hw" => Self::X2Hw,
            "t" => Self::T,
            "tplus" => Self::TPlus,
            "trend" => Self::Trend,
            "stratified-x2" => Self::StratifiedX2,
            _ => return None,
        })
    }

    /// One-sided statistics reject in their own upper tail; the engine uses
    /// plain >= exceedance either way because orientation is baked into the
    /// statistic's sign.
    pub fn one_sided(self) -> bool {
        matches!(self, Self::T | Self::TPlus | Self::Trend)
    }
}

impl std::fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Group summaries of one stratum with its weight omega_h = N_h / N.
#[derive(Debug, Clone, Default)]
pub(crate) struct SummaryFrame {
    pub weight: f64,
    pub counts: Vec<usize>,
    pub means: Vec<f64>, // J x d
    pub covs: Vec<f64>,  // J x d x d
}

impl SummaryFrame {
    pub fn from_summaries(weight: f64, s: &GroupSummaries) -> Self {
        Self {
            weight,
            counts: s.counts().to_vec(),
            means: s.means_flat().to_vec(),
            covs: s.covs_flat().to_vec(),
        }
    }
}

/// Reusable buffers for statistic evaluation.
#[derive(Debug, Default, Clone)]
pub(crate) struct StatScratch {
    chol: CholScratch,
    g: Vec<f64>,
    v: Vec<f64>,
}

/// Precompiled statistic: contrast data flattened once, then evaluated
/// allocation-free per draw.
#[derive(Debug, Clone)]
pub(crate) struct StatContext {
    pub kind: StatisticKind,
    m: usize,
    d: usize,
    j: usize,
    c: Vec<f64>, // m x (d * j), row-major
    x: Vec<f64>,
    proj: Option<Vec<f64>>, // J x J projection onto the row space of C (Box)
}

impl StatContext {
    pub fn new(kind: StatisticKind, h: &Hypothesis) -> Result<Self> {
        let (m, d, j) = (h.m(), h.dim(), h.n_arms());
        match kind {
            StatisticKind::Box | StatisticKind::F | StatisticKind::X2Hw | StatisticKind::Trend
                if d != 1 =>
            {
                return Err(FrtError::RequiresScalarOutcome { dim: d });
            }
            StatisticKind::T | StatisticKind::TPlus | StatisticKind::Trend if m != 1 => {
                return Err(FrtError::RequiresScalarContrast { m });
            }
            StatisticKind::Box if h.target().iter().any(|&v| v != 0.0) => {
                return Err(FrtError::NonzeroTarget);
            }
            _ => {}
        }
        let cmat = h.contrast();
        let mut c = Vec::with_capacity(m * d * j);
        for r in 0..m {
            for col in 0..d * j {
                c.push(cmat[(r, col)]);
            }
        }
        let proj = if kind == StatisticKind::Box {
            let cct = cmat * cmat.transpose();
            let inv = cct
                .try_inverse()
                .ok_or(FrtError::RankDeficient)?;
            let p: DMatrix<f64> = cmat.transpose() * inv * cmat;
            Some(p.iter().cloned().collect::<Vec<f64>>())
        } else {
            None
        };
        Ok(Self {
            kind,
            m,
            d,
            j,
            c,
            x: h.target().to_vec(),
            proj,
        })
    }

    #[inline]
    fn c_at(&self, row: usize, arm: usize, coord: usize) -> f64 {
        self.c[row * self.d * self.j + arm * self.d + coord]
    }

    /// v = sum_h w_h C mu_h - x.
    fn contrast_gap(&self, frames: &[SummaryFrame], v: &mut Vec<f64>) {
        v.clear();
        v.extend_from_slice(&self.x);
        for t in v.iter_mut() {
            *t = -*t;
        }
        for f in frames {
            for r in 0..self.m {
                let mut acc = 0.0;
                for arm in 0..self.j {
                    for k in 0..self.d {
                        acc += self.c_at(r, arm, k) * f.means[arm * self.d + k];
                    }
                }
                v[r] += f.weight * acc;
            }
        }
    }

    /// G = sum_h w_h^2 C blockdiag(S_hj / n_hj) C'.
    fn studentized_gram(&self, frames: &[SummaryFrame], g: &mut Vec<f64>) {
        let (m, d, j) = (self.m, self.d, self.j);
        g.clear();
        g.resize(m * m, 0.0);
        for f in frames {
            let w2 = f.weight * f.weight;
            for arm in 0..j {
                let nj = f.counts[arm] as f64;
                let cov = &f.covs[arm * d * d..(arm + 1) * d * d];
                for a in 0..m {
                    for b in 0..=a {
                        let mut acc = 0.0;
                        for p in 0..d {
                            let cap = self.c_at(a, arm, p);
                            if cap == 0.0 {
                                continue;
                            }
                            for q in 0..d {
                                acc += cap * cov[p * d + q] * self.c_at(b, arm, q);
                            }
                        }
                        g[a * m + b] += w2 * acc / nj;
                    }
                }
            }
        }
        for a in 0..m {
            for b in 0..a {
                g[b * m + a] = g[a * m + b];
            }
        }
    }

    /// Evaluates the statistic on per-stratum frames. Multi-stratum input is
    /// only meaningful for the X^2 family.
    pub fn eval(&self, frames: &[SummaryFrame], s: &mut StatScratch) -> Result<f64> {
        let value = match self.kind {
            StatisticKind::X2 | StatisticKind::StratifiedX2 => {
                self.contrast_gap(frames, &mut s.v);
                self.studentized_gram(frames, &mut s.g);
                s.chol.quad_form_inv(&s.g, &s.v, self.m)?
            }
            StatisticKind::Box => {
                let f = &frames[0];
                let proj = self.proj.as_ref().expect("projection built in new()");
                let mut num = 0.0;
                for a in 0..self.j {
                    for b in 0..self.j {
                        num += f.means[a] * proj[a * self.j + b] * f.means[b];
                    }
                }
                let mut den = 0.0;
                for arm in 0..self.j {
                    den += proj[arm * self.j + arm] * f.covs[arm] / f.counts[arm] as f64;
                }
                if !(den > 0.0) {
                    return Err(FrtError::SingularCovariance);
                }
                num / den
            }
            StatisticKind::F => {
                let f = &frames[0];
                let n: usize = f.counts.iter().sum();
                let mut sigma2 = 0.0;
                for arm in 0..self.j {
                    sigma2 += (f.counts[arm] as f64 - 1.0) * f.covs[arm];
                }
                sigma2 /= (n - self.j) as f64;
                if !(sigma2 > 0.0) {
                    return Err(FrtError::SingularCovariance);
                }
                self.contrast_gap(frames, &mut s.v);
                let m = self.m;
                s.g.clear();
                s.g.resize(m * m, 0.0);
                for arm in 0..self.j {
                    let nj = f.counts[arm] as f64;
                    for a in 0..m {
                        for b in 0..=a {
                            s.g[a * m + b] +=
                                sigma2 * self.c_at(a, arm, 0) * self.c_at(b, arm, 0) / nj;
                        }
                    }
                }
                for a in 0..m {
                    for b in 0..a {
                        s.g[b * m + a] = s.g[a * m + b];
                    }
                }
                s.chol.quad_form_inv(&s.g, &s.v, m)? / m as f64
            }
            StatisticKind::X2Hw => {
                let f = &frames[0];
                self.contrast_gap(frames, &mut s.v);
                let m = self.m;
                s.g.clear();
                s.g.resize(m * m, 0.0);
                for arm in 0..self.j {
                    let nj = f.counts[arm] as f64;
                    let scale = (nj - 1.0) * f.covs[arm] / (nj * nj);
                    for a in 0..m {
                        for b in 0..=a {
                            s.g[a * m + b] += scale * self.c_at(a, arm, 0) * self.c_at(b, arm, 0);
                        }
                    }
                }
                for a in 0..m {
                    for b in 0..a {
                        s.g[b * m + a] = s.g[a * m + b];
                    }
                }
                s.chol.quad_form_inv(&s.g, &s.v, m)?
            }
            StatisticKind::T | StatisticKind::TPlus | StatisticKind::Trend => {
                self.contrast_gap(frames, &mut s.v);
                self.studentized_gram(frames, &mut s.g);
                let var = s.g[0];
                if !(var > 0.0) {
                    return Err(FrtError::SingularCovariance);
                }
                let se = var.sqrt();
                match self.kind {
                    // t = (x - C mu) / se rejects H: C Ybar >= x for large t.
                    StatisticKind::T => -s.v[0] / se,
                    StatisticKind::TPlus => (-s.v[0] / se).max(0.0),
                    // trend rejects for large C mu.
                    _ => s.v[0] / se,
                }
            }
        };
        if !value.is_finite() {
            return Err(FrtError::SingularCovariance);
        }
        Ok(value)
    }
}

fn frames_of(summaries: &[(f64, GroupSummaries)]) -> Vec<SummaryFrame> {
    summaries
        .iter()
        .map(|(w, s)| SummaryFrame::from_summaries(*w, s))
        .collect()
}

/// Evaluates `kind` on (possibly stratified) summaries.
pub fn evaluate(
    kind: StatisticKind,
    summaries: &[(f64, GroupSummaries)],
    h: &Hypothesis,
) -> Result<f64> {
    if summaries.len() > 1 && !matches!(kind, StatisticKind::X2 | StatisticKind::StratifiedX2) {
        return Err(FrtError::UnsupportedStatistic {
            statistic: kind.name(),
            reason: "only the X^2 family handles stratified summaries",
        });
    }
    let ctx = StatContext::new(kind, h)?;
    ctx.eval(&frames_of(summaries), &mut StatScratch::default())
}

/// Studentized Wald statistic, Wald covariance C D-hat C'.
pub fn x2(summaries: &GroupSummaries, h: &Hypothesis) -> Result<f64> {
    evaluate(
        StatisticKind::StratifiedX2,
        std::slice::from_ref(&(1.0, summaries.clone())),
        h,
    )
}

/// Stratified X^2 over per-stratum summaries weighted by omega_h.
pub fn stratified_x2(summaries: &[(f64, GroupSummaries)], h: &Hypothesis) -> Result<f64> {
    evaluate(StatisticKind::StratifiedX2, summaries, h)
}

/// Box-type statistic; requires x = 0.
pub fn box_stat(summaries: &GroupSummaries, h: &Hypothesis) -> Result<f64> {
    evaluate(StatisticKind::Box, &[(1.0, summaries.clone())], h)
}

/// Classical F statistic from the one-way OLS fit.
pub fn f_stat(summaries: &GroupSummaries, h: &Hypothesis) -> Result<f64> {
    evaluate(StatisticKind::F, &[(1.0, summaries.clone())], h)
}

/// Wald statistic under the Huber-White covariance.
pub fn x2_hw(summaries: &GroupSummaries, h: &Hypothesis) -> Result<f64> {
    evaluate(StatisticKind::X2Hw, &[(1.0, summaries.clone())], h)
}

/// Signed t for the inequality null C Ybar >= x (m = 1).
pub fn t_stat(summaries: &GroupSummaries, h: &Hypothesis) -> Result<f64> {
    evaluate(StatisticKind::T, &[(1.0, summaries.clone())], h)
}

/// Truncated t_+ = max(t, 0).
pub fn t_plus(summaries: &GroupSummaries, h: &Hypothesis) -> Result<f64> {
    evaluate(StatisticKind::TPlus, &[(1.0, summaries.clone())], h)
}

/// Builds the dose-trend contrast from the summaries' arm counts and returns
/// the trend-oriented t.
pub fn trend_t(summaries: &GroupSummaries, doses: &[f64]) -> Result<f64> {
    let h = crate::contrast::preset_contrast(
        &crate::contrast::ContrastPreset::Trend {
            doses: doses.to_vec(),
        },
        summaries.counts(),
    )?;
    evaluate(StatisticKind::Trend, &[(1.0, summaries.clone())], &h)
}
