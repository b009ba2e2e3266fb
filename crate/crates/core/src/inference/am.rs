//! Adaptive Metropolis proposal machinery: the history-covariance update
//! rule, a streaming covariance accumulator, and a small Cholesky for the
//! 4x4 proposal matrices.

use crate::error::{Error, Result};

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];

/// Proposal scaling `2.4^2 / d` for the 4-dimensional parameter block.
pub const SCALE_4D: f64 = 2.4 * 2.4 / 4.0;

/// Lower-triangular Cholesky factor of a symmetric positive-definite 4x4
/// matrix; `None` when the matrix is not positive definite.
pub fn cholesky4(m: &Mat4) -> Option<Mat4> {
    let mut l = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..=i {
            let mut s = m[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

/// Proposal covariance from the accumulated chain history:
/// `s_d * Cov(X_0..X_l) + s_d * eps0 * I` with `s_d = 2.4^2/4`.
///
/// Needs at least two history rows; the caller falls back to its initial
/// covariance below that.
pub fn am_update_cov(history: &[Vec4], eps0: f64) -> Result<Mat4> {
    if history.len() < 2 {
        return Err(Error::data(
            "need at least two samples for a covariance update",
        ));
    }
    let n = history.len() as f64;
    let mut mean = [0.0; 4];
    for row in history {
        for (m, v) in mean.iter_mut().zip(row.iter()) {
            *m += v;
        }
    }
    for m in mean.iter_mut() {
        *m /= n;
    }
    let mut cov = [[0.0; 4]; 4];
    for row in history {
        for i in 0..4 {
            for j in 0..4 {
                cov[i][j] += (row[i] - mean[i]) * (row[j] - mean[j]);
            }
        }
    }
    for row in cov.iter_mut() {
        for v in row.iter_mut() {
            *v /= n - 1.0;
        }
    }
    Ok(scale_and_regularize(&cov, eps0))
}

pub(crate) fn scale_and_regularize(cov: &Mat4, eps0: f64) -> Mat4 {
    let mut out = *cov;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] *= SCALE_4D;
        }
        out[i][i] += SCALE_4D * eps0;
    }
    out
}

/// Streaming mean/covariance accumulator (Welford with outer products),
/// equivalent to the batch covariance over everything pushed since the last
/// reset.
#[derive(Debug, Clone)]
pub struct RunningCov {
    count: u64,
    mean: Vec4,
    m2: Mat4,
}

impl Default for RunningCov {
    fn default() -> Self {
        Self::new()
    }
}

impl RunningCov {
    pub fn new() -> Self {
        Self {
            count: 0,
            mean: [0.0; 4],
            m2: [[0.0; 4]; 4],
        }
    }

    pub fn reset(&mut self) {
        *self = Self::new();
    }

    pub fn push(&mut self, x: &Vec4) {
        self.count += 1;
        let n = self.count as f64;
        let mut d_pre = [0.0; 4];
        for i in 0..4 {
            d_pre[i] = x[i] - self.mean[i];
            self.mean[i] += d_pre[i] / n;
        }
        for i in 0..4 {
            for j in 0..4 {
                self.m2[i][j] += d_pre[i] * (x[j] - self.mean[j]);
            }
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn covariance(&self) -> Option<Mat4> {
        if self.count < 2 {
            return None;
        }
        let n = (self.count - 1) as f64;
        let mut out = self.m2;
        for row in out.iter_mut() {
            for v in row.iter_mut() {
                *v /= n;
            }
        }
        Some(out)
    }
}

/// Random-walk proposal state in normalized parameter units (each parameter
/// scaled to [0, 1] by its prior range before covariance estimation).
#[derive(Debug, Clone)]
pub struct AmProposal {
    pub chol: Mat4,
    pub cov: Mat4,
}

impl AmProposal {
    /// Diagonal initial proposal with the given standard deviation per
    /// normalized axis.
    pub fn diagonal(std: f64) -> Self {
        let mut cov = [[0.0; 4]; 4];
        for (i, row) in cov.iter_mut().enumerate() {
            row[i] = std * std;
        }
        let chol = cholesky4(&cov).expect("diagonal covariance is positive definite");
        Self { chol, cov }
    }

    /// Replace the proposal with the regularized history covariance; keeps
    /// the previous factor when the update is not positive definite.
    pub fn update_from(&mut self, cov: &Mat4, eps0: f64) {
        let scaled = scale_and_regularize(cov, eps0);
        if let Some(chol) = cholesky4(&scaled) {
            self.chol = chol;
            self.cov = scaled;
        }
    }

    /// `x + L z` for standard normal `z`.
    pub fn perturb(&self, x_norm: &Vec4, z: &Vec4) -> Vec4 {
        let mut out = *x_norm;
        for i in 0..4 {
            let mut acc = 0.0;
            for j in 0..=i {
                acc += self.chol[i][j] * z[j];
            }
            out[i] += acc;
        }
        out
    }
}
