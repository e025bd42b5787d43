//! Small dense helpers used on the hot path.
//!
//! The permutation loop evaluates quadratic forms v' G^{-1} v for tiny
//! symmetric positive definite G (m <= dJ). A hand-rolled Cholesky over flat
//! slices keeps that loop allocation-free; everything cold (eigenvalues,
//! Gram-Schmidt) goes through nalgebra instead.

use crate::error::{FrtError, Result};

/// Condition-estimate threshold beyond which a Gram matrix is treated as
/// singular.
pub const SINGULAR_COND: f64 = 1e12;

/// Reusable scratch for Cholesky solves of m x m systems.
#[derive(Debug, Default, Clone)]
pub struct CholScratch {
    l: Vec<f64>,
    y: Vec<f64>,
}

impl CholScratch {
    pub fn new() -> Self {
        Self::default()
    }

    fn resize(&mut self, m: usize) {
        self.l.resize(m * m, 0.0);
        self.y.resize(m, 0.0);
    }

    /// Computes v' G^{-1} v for symmetric positive definite `g` (row-major,
    /// m x m). Fails with `SingularCovariance` when the factorization breaks
    /// down or the diagonal-pivot condition estimate exceeds
    /// [`SINGULAR_COND`].
    pub fn quad_form_inv(&mut self, g: &[f64], v: &[f64], m: usize) -> Result<f64> {
        debug_assert_eq!(g.len(), m * m);
        debug_assert_eq!(v.len(), m);
        self.resize(m);
        let l = &mut self.l;

        let mut min_piv = f64::INFINITY;
        let mut max_piv = 0.0f64;
        for i in 0..m {
            for j in 0..=i {
                let mut sum = g[i * m + j];
                for k in 0..j {
                    sum -= l[i * m + k] * l[j * m + k];
                }
                if i == j {
                    if !(sum > 0.0) || !sum.is_finite() {
                        return Err(FrtError::SingularCovariance);
                    }
                    min_piv = min_piv.min(sum);
                    max_piv = max_piv.max(sum);
                    l[i * m + i] = sum.sqrt();
                } else {
                    l[i * m + j] = sum / l[j * m + j];
                }
            }
        }
        // Pivot-ratio heuristic for the 2-norm condition number.
        if max_piv / min_piv > SINGULAR_COND {
            return Err(FrtError::SingularCovariance);
        }

        // Forward solve L y = v, then X^2 = |y|^2 since v'G^{-1}v = y'y.
        let y = &mut self.y;
        for i in 0..m {
            let mut sum = v[i];
            for k in 0..i {
                sum -= l[i * m + k] * y[k];
            }
            y[i] = sum / l[i * m + i];
        }
        Ok(y.iter().map(|t| t * t).sum())
    }
}

/// One-shot wrapper around [`CholScratch::quad_form_inv`].
pub fn quad_form_inv(g: &[f64], v: &[f64], m: usize) -> Result<f64> {
    CholScratch::new().quad_form_inv(g, v, m)
}
