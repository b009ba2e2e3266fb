//! Per-sensor Bayesian inversion: priors, interval and waveform likelihoods,
//! adaptive Metropolis sampling, posterior summaries and predictive bands.

mod am;
mod chain;
mod likelihood;
mod predictive;

pub use am::{am_update_cov, cholesky4, AmProposal, Mat4, RunningCov, Vec4, SCALE_4D};
pub use chain::{
    accept_log_ratio, ess, mh_step, run_chain, ChainConfig, ChainRun, ChainState, LogPosterior,
    Sample,
};
pub use likelihood::{
    loglik_intervals, BallDropPosterior, DatasetSpec, SensorDataset, WaveformEvaluator,
    WaveformFit,
};
pub use predictive::{posterior_predictive, IntervalPrediction, PredictiveBands};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Parameter order inside the 4-vector: (v0, rebound, omega_s, epsilon).
pub const PARAM_NAMES: [&str; 4] = ["v0_m_s", "rebound", "omega_s_khz", "epsilon_khz"];

/// Uniform box priors for the bounce and response parameters plus a normal,
/// zero-truncated prior for the interval noise variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorSpec {
    pub v0_m_s: (f64, f64),
    pub rebound: (f64, f64),
    pub omega_s_khz: (f64, f64),
    pub epsilon_khz: (f64, f64),
    pub sigma_t2_mean_s2: f64,
    pub sigma_t2_var_s4: f64,
}

impl Default for PriorSpec {
    fn default() -> Self {
        Self {
            v0_m_s: (1.0, 1.5),
            rebound: (0.5, 0.9),
            omega_s_khz: (100.0, 500.0),
            epsilon_khz: (10.0, 50.0),
            sigma_t2_mean_s2: 1e-10,
            sigma_t2_var_s4: 1e-22,
        }
    }
}

impl PriorSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in self.bounds_named() {
            if !(lo < hi) {
                return Err(Error::Config(format!(
                    "prior for {name}: lower bound must be below upper ({lo} >= {hi})"
                )));
            }
        }
        if !(self.sigma_t2_mean_s2 > 0.0) {
            return Err(Error::Config("sigma_t2 prior mean must be positive".into()))
        }
        if !(self.sigma_t2_var_s4 > 0.0) {
            return Err(Error::Config("sigma_t2 prior variance must be positive".into()));
        }
        Ok(())
    }

    pub fn bounds(&self) -> [(f64, f64); 4] {
        [
            self.v0_m_s,
            self.rebound,
            self.omega_s_khz,
            self.epsilon_khz,
        ]
    }

    fn bounds_named(&self) -> [(&'static str, (f64, f64)); 4] {
        [
            ("v0_m_s", self.v0_m_s),
            ("rebound", self.rebound),
            ("omega_s_khz", self.omega_s_khz),
            ("epsilon_khz", self.epsilon_khz),
        ]
    }

    pub fn lower(&self) -> Vec4 {
        self.bounds().map(|(lo, _)| lo)
    }

    pub fn ranges(&self) -> Vec4 {
        self.bounds().map(|(lo, hi)| hi - lo)
    }

    pub fn midpoint(&self) -> Vec4 {
        self.bounds().map(|(lo, hi)| 0.5 * (lo + hi))
    }

    pub fn contains(&self, x: &Vec4) -> bool {
        self.bounds()
            .iter()
            .zip(x.iter())
            .all(|((lo, hi), v)| lo < v && v < hi)
    }
}

/// Sum of the log prior densities: uniform boxes for the four model
/// parameters and an untruncated normal density for `sigma_t2`, with
/// negative values excluded. Returns negative infinity outside the support.
pub fn log_prior(x: &Vec4, sigma_t2: f64, spec: &PriorSpec) -> f64 {
    if !spec.contains(x) || sigma_t2 <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let mut lp = 0.0;
    for (lo, hi) in spec.bounds() {
        lp -= (hi - lo).ln();
    }
    let d = sigma_t2 - spec.sigma_t2_mean_s2;
    lp += -0.5 * (2.0 * std::f64::consts::PI * spec.sigma_t2_var_s4).ln()
        - 0.5 * d * d / spec.sigma_t2_var_s4;
    lp
}

/// Posterior moments and sampler health for one sensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSummary {
    pub sensor_id: u16,
    pub alpha: f64,
    pub param_mean: Vec4,
    pub param_std: Vec4,
    pub sigma_t2_mean: f64,
    pub sigma_t2_std: f64,
    pub acceptance_rate: f64,
    pub ess_min: f64,
    /// Least-squares conversion constant at the posterior mean, counts/m.
    pub c_gain: f64,
}
