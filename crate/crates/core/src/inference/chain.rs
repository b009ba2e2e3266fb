//! Metropolis-Hastings chain driver: Gaussian random walk with adaptive
//! covariance on the 4-parameter block, independence proposal from the prior
//! for the interval noise variance, joint accept/reject.

use super::am::{AmProposal, Mat4, RunningCov, Vec4};
use super::{log_prior, PosteriorSummary, PriorSpec};
use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Anything that can score the 5-dimensional state. Implementations carry
/// their own scratch buffers, hence `&mut self`.
pub trait LogPosterior {
    fn log_posterior(&mut self, x: &Vec4, sigma_t2: f64) -> f64;
    fn prior(&self) -> &PriorSpec;
}

/// Current chain position plus the adapted proposal.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub x: Vec4,
    pub sigma_t2: f64,
    pub log_post: f64,
    pub step: u64,
    pub proposal: AmProposal,
    pub accept_count: u64,
}

/// One stored draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub x: Vec4,
    pub sigma_t2: f64,
    pub log_post: f64,
}

/// Sampler schedule. Iterations before `adapt_start` use the initial
/// diagonal proposal; afterwards the proposal covariance refreshes every
/// `adapt_every` iterations from the running history, which restarts at each
/// entry of `cov_resets` so that cold-start transients do not contaminate
/// the adapted covariance.
#[derive(Debug, Clone)]
pub struct ChainConfig {
    pub n_iter: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub stream: u64,
    pub eps0: f64,
    pub adapt_start: usize,
    pub adapt_every: usize,
    pub cov_resets: Vec<usize>,
    pub init_proposal_std: f64,
    /// Optional explicit start; prior midpoint otherwise.
    pub init_x: Option<Vec4>,
    pub init_sigma_t2: Option<f64>,
}

impl ChainConfig {
    pub fn new(n_iter: usize, burn_in: usize, seed: u64) -> Self {
        Self {
            n_iter,
            burn_in,
            seed,
            stream: 0,
            eps0: 1e-10,
            adapt_start: 1000,
            adapt_every: 100,
            cov_resets: vec![1000, 5000, 20000],
            init_proposal_std: 0.01,
            init_x: None,
            init_sigma_t2: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_iter <= self.burn_in {
            return Err(Error::Config(
                "iteration count must exceed the burn-in".into(),
            ));
        }
        if !(self.eps0 > 0.0) {
            return Err(Error::Config("eps0 must be positive".into()));
        }
        if self.adapt_every == 0 {
            return Err(Error::Config("adapt_every must be positive".into()));
        }
        Ok(())
    }
}

/// Log acceptance ratio of the joint move, including the independence
/// proposal correction for the variance component (its proposal density is
/// the prior restricted to positive values, so the correction is the prior
/// density ratio evaluated the opposite way).
pub fn accept_log_ratio(
    log_post_new: f64,
    log_post_cur: f64,
    sigma_t2_new: f64,
    sigma_t2_cur: f64,
    prior: &PriorSpec,
) -> f64 {
    if log_post_new == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let q = |s: f64| {
        let d = s - prior.sigma_t2_mean_s2;
        -0.5 * d * d / prior.sigma_t2_var_s4
    };
    log_post_new - log_post_cur + q(sigma_t2_cur) - q(sigma_t2_new)
}

/// Draw from the zero-truncated normal prior for the variance component.
fn draw_sigma_t2(prior: &PriorSpec, rng: &mut ChaCha8Rng) -> f64 {
    let std = prior.sigma_t2_var_s4.sqrt();
    loop {
        let z: f64 = StandardNormal.sample(rng);
        let s = prior.sigma_t2_mean_s2 + std * z;
        if s > 0.0 {
            return s;
        }
    }
}

/// Advance the chain by one joint proposal. Returns the (possibly
/// unchanged) state; acceptance statistics update in place.
pub fn mh_step<T: LogPosterior>(
    state: &mut ChainState,
    target: &mut T,
    rng: &mut ChaCha8Rng,
    lower: &Vec4,
    ranges: &Vec4,
) {
    let mut z = [0.0; 4];
    for v in z.iter_mut() {
        *v = StandardNormal.sample(rng);
    }
    let mut x_norm = [0.0; 4];
    for i in 0..4 {
        x_norm[i] = (state.x[i] - lower[i]) / ranges[i];
    }
    let xp_norm = state.proposal.perturb(&x_norm, &z);
    let mut xp = [0.0; 4];
    for i in 0..4 {
        xp[i] = lower[i] + xp_norm[i] * ranges[i];
    }
    let sp = draw_sigma_t2(target.prior(), rng);
    let lp = target.log_posterior(&xp, sp);
    let log_ratio = accept_log_ratio(lp, state.log_post, sp, state.sigma_t2, target.prior());
    let u: f64 = rng.random();
    if u.ln() < log_ratio {
        state.x = xp;
        state.sigma_t2 = sp;
        state.log_post = lp;
        state.accept_count += 1;
    }
    state.step += 1;
}

/// Everything a finished chain hands back.
#[derive(Debug, Clone)]
pub struct ChainRun {
    pub samples: Vec<Sample>,
    pub burn_in: usize,
    pub acceptance_rate: f64,
}

impl ChainRun {
    pub fn post_burn(&self) -> &[Sample] {
        &self.samples[self.burn_in.min(self.samples.len())..]
    }

    /// Posterior moments over the post-burn-in draws.
    pub fn summarize(&self, sensor_id: u16, alpha: f64, c_gain: f64) -> PosteriorSummary {
        let post = self.post_burn();
        let n = post.len().max(1) as f64;
        let mut mean = [0.0; 4];
        let mut std = [0.0; 4];
        for s in post {
            for i in 0..4 {
                mean[i] += s.x[i];
            }
        }
        for m in mean.iter_mut() {
            *m /= n;
        }
        for s in post {
            for i in 0..4 {
                std[i] += (s.x[i] - mean[i]).powi(2);
            }
        }
        for v in std.iter_mut() {
            *v = (*v / n).sqrt();
        }
        let st_mean = post.iter().map(|s| s.sigma_t2).sum::<f64>() / n;
        let st_std = (post
            .iter()
            .map(|s| (s.sigma_t2 - st_mean).powi(2))
            .sum::<f64>()
            / n)
            .sqrt();
        let ess_min = (0..4)
            .map(|i| ess(&post.iter().map(|s| s.x[i]).collect::<Vec<_>>()))
            .fold(f64::INFINITY, f64::min);
        PosteriorSummary {
            sensor_id,
            alpha,
            param_mean: mean,
            param_std: std,
            sigma_t2_mean: st_mean,
            sigma_t2_std: st_std,
            acceptance_rate: self.acceptance_rate,
            ess_min,
            c_gain,
        }
    }
}

/// Run one chain; deterministic for a given `(seed, stream)` pair.
pub fn run_chain<T: LogPosterior>(target: &mut T, cfg: &ChainConfig) -> Result<ChainRun> {
    cfg.validate()?;
    target.prior().validate()?;
    let prior = target.prior().clone();
    let lower = prior.lower();
    let ranges = prior.ranges();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(cfg.stream);

    let x0 = cfg.init_x.unwrap_or_else(|| prior.midpoint());
    if !prior.contains(&x0) {
        return Err(Error::Config("chain start lies outside the prior".into()));
    }
    let s0 = cfg.init_sigma_t2.unwrap_or(prior.sigma_t2_mean_s2);
    let lp0 = target.log_posterior(&x0, s0);
    if lp0 == f64::NEG_INFINITY {
        return Err(Error::Diagnostic(
            "chain start has zero posterior density".into(),
        ));
    }
    let mut state = ChainState {
        x: x0,
        sigma_t2: s0,
        log_post: lp0,
        step: 0,
        proposal: AmProposal::diagonal(cfg.init_proposal_std),
        accept_count: 0,
    };
    let mut history = RunningCov::new();
    let mut samples = Vec::with_capacity(cfg.n_iter);
    let diag_check = (2 * cfg.adapt_start).max(2000).min(cfg.n_iter);
    for it in 0..cfg.n_iter {
        if cfg.cov_resets.contains(&it) {
            history.reset();
        }
        mh_step(&mut state, target, &mut rng, &lower, &ranges);
        let mut x_norm = [0.0; 4];
        for i in 0..4 {
            x_norm[i] = (state.x[i] - lower[i]) / ranges[i];
        }
        history.push(&x_norm);
        if it >= cfg.adapt_start && it % cfg.adapt_every == 0 {
            if let Some(cov) = history.covariance() {
                state.proposal.update_from(&cov, cfg.eps0);
            }
        }
        samples.push(Sample {
            x: state.x,
            sigma_t2: state.sigma_t2,
            log_post: state.log_post,
        });
        if it + 1 == diag_check && state.accept_count == 0 {
            return Err(Error::Diagnostic(format!(
                "no accepted move in the first {diag_check} iterations"
            )));
        }
    }
    Ok(ChainRun {
        samples,
        burn_in: cfg.burn_in,
        acceptance_rate: state.accept_count as f64 / cfg.n_iter as f64,
    })
}

/// Effective sample size by Geyer's initial positive sequence estimator.
pub fn ess(series: &[f64]) -> f64 {
    let n = series.len();
    if n < 4 {
        return n as f64;
    }
    let nf = n as f64;
    let mean = series.iter().sum::<f64>() / nf;
    let autocov = |lag: usize| -> f64 {
        series[..n - lag]
            .iter()
            .zip(&series[lag..])
            .map(|(a, b)| (a - mean) * (b - mean))
            .sum::<f64>()
            / nf
    };
    let g0 = autocov(0);
    if g0 <= 0.0 {
        return nf;
    }
    let mut tau = -1.0;
    let mut lag = 0;
    while lag + 1 < n / 2 {
        let pair = autocov(lag) + autocov(lag + 1);
        if pair <= 0.0 {
            break;
        }
        tau += 2.0 * pair / g0;
        lag += 2;
    }
    (nf / tau.max(1.0)).min(nf)
}

/// Chain targeting a known Gaussian, for sampler validation. The variance
/// component is ignored by the density, so its marginal is the prior.
pub struct GaussianTarget {
    pub prior: PriorSpec,
    pub mean: Vec4,
    pub precision: Mat4,
}

impl LogPosterior for GaussianTarget {
    fn log_posterior(&mut self, x: &Vec4, sigma_t2: f64) -> f64 {
        let lp = log_prior(x, sigma_t2, &self.prior);
        if lp == f64::NEG_INFINITY {
            return lp;
        }
        let mut q = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                q += (x[i] - self.mean[i]) * self.precision[i][j] * (x[j] - self.mean[j]);
            }
        }
        // uniform box factors are constant inside the support; the sigma_t2
        // prior term must stay so the variance marginal is well defined
        lp - 0.5 * q
    }

    fn prior(&self) -> &PriorSpec {
        &self.prior
    }
}
