//! Preprocessing of continuous records: bounce-event detection, P-arrival
//! picking, cross-correlation alignment, and noise-level estimation.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::Range;

/// A uniformly sampled waveform from one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub channel_id: u16,
    pub sample_rate_hz: f64,
    /// Time of the first sample in seconds.
    pub t0_s: f64,
    pub samples: Vec<f64>,
}

impl TraceRecord {
    pub fn validate(&self) -> Result<()> {
        if !(self.sample_rate_hz > 0.0) {
            return Err(Error::domain("sample_rate must be positive"));
        }
        if self.samples.is_empty() {
            return Err(Error::data("record has no samples"));
        }
        Ok(())
    }

    pub fn dt_s(&self) -> f64 {
        1.0 / self.sample_rate_hz
    }

    /// Absolute time of sample `i`.
    pub fn time_of(&self, i: usize) -> f64 {
        self.t0_s + i as f64 * self.dt_s()
    }
}

/// Per-channel P arrivals and the intervals between consecutive bounces.
///
/// The constructor derives the intervals from the arrivals, so
/// `intervals[k] == arrivals[k+1] - arrivals[k]` always holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PickSet {
    pub channel_id: u16,
    arrivals_s: Vec<f64>,
    intervals_s: Vec<f64>,
}

impl PickSet {
    pub fn new(channel_id: u16, arrivals_s: Vec<f64>) -> Result<Self> {
        if arrivals_s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::data("arrivals must be strictly increasing"));
        }
        let intervals_s = arrivals_s.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self {
            channel_id,
            arrivals_s,
            intervals_s,
        })
    }

    pub fn arrivals_s(&self) -> &[f64] {
        &self.arrivals_s
    }

    pub fn intervals_s(&self) -> &[f64] {
        &self.intervals_s
    }

    pub fn len(&self) -> usize {
        self.arrivals_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrivals_s.is_empty()
    }
}

/// STA/LTA trigger: indices where the ratio of the short-term to long-term
/// average of the squared amplitude first crosses `threshold` upward, with a
/// dead time after each trigger.
///
/// Both averages are trailing windows ending at the tested sample; the
/// statistic is scale invariant.
pub fn sta_lta_detect(
    tr: &TraceRecord,
    sta_len_s: f64,
    lta_len_s: f64,
    threshold: f64,
    dead_time_s: f64,
) -> Result<Vec<usize>> {
    tr.validate()?;
    let fs = tr.sample_rate_hz;
    let sta_n = (sta_len_s * fs).round() as usize;
    let lta_n = (lta_len_s * fs).round() as usize;
    if sta_n == 0 || lta_n <= sta_n {
        return Err(Error::domain(
            "window lengths must satisfy lta_len > sta_len > 0",
        ));
    }
    if tr.samples.len() <= lta_n {
        return Err(Error::data("record shorter than the long-term window"));
    }
    if !(threshold > 1.0) {
        return Err(Error::domain("threshold must exceed 1"));
    }
    let dead = (dead_time_s * fs).round() as usize;

    let mut cum = Vec::with_capacity(tr.samples.len() + 1);
    cum.push(0.0);
    let mut acc = 0.0;
    for &x in &tr.samples {
        acc += x * x;
        cum.push(acc);
    }

    let mut triggers = Vec::new();
    let mut i = lta_n;
    let n = tr.samples.len();
    while i < n {
        let sta = (cum[i + 1] - cum[i + 1 - sta_n]) / sta_n as f64;
        let lta = (cum[i + 1] - cum[i + 1 - lta_n]) / lta_n as f64;
        if lta > 0.0 && sta / lta > threshold {
            triggers.push(i);
            i += dead.max(1);
        } else {
            i += 1;
        }
    }
    Ok(triggers)
}

/// Onset index inside a window containing pre-arrival noise followed by
/// signal: the split minimizing the two-segment variance criterion
/// `k ln var(x[..k]) + (N-k-1) ln var(x[k..])`, with a 5% guard band at each
/// end. The window mean is removed first, so the pick is invariant under
/// scaling and DC offsets.
pub fn aic_pick(window: &[f64]) -> Result<usize> {
    let n = window.len();
    if n < 32 {
        return Err(Error::data("window must hold at least 32 samples"));
    }
    let mean = window.iter().sum::<f64>() / n as f64;
    let x: Vec<f64> = window.iter().map(|v| v - mean).collect();
    let total: f64 = x.iter().map(|v| v * v).sum();
    if total == 0.0 {
        return Err(Error::data("window is constant; no variance split exists"));
    }
    let mut cum_sq = Vec::with_capacity(n + 1);
    let mut cum = Vec::with_capacity(n + 1);
    cum_sq.push(0.0);
    cum.push(0.0);
    let (mut a, mut b) = (0.0, 0.0);
    for &v in &x {
        a += v * v;
        b += v;
        cum_sq.push(a);
        cum.push(b);
    }
    let guard = ((n as f64) * 0.05).ceil().max(2.0) as usize;
    // variances floored to keep exactly-silent leading segments finite; the
    // floor drives the argmin to the last silent split, i.e. the onset
    let floor = 1e-30;
    let mut best = (f64::INFINITY, guard);
    for k in guard..n - guard {
        let n1 = k as f64;
        let n2 = (n - k) as f64;
        let v1 = (cum_sq[k] / n1 - (cum[k] / n1).powi(2)).max(floor);
        let v2 = ((cum_sq[n] - cum_sq[k]) / n2 - ((cum[n] - cum[k]) / n2).powi(2)).max(floor);
        let aic = n1 * v1.ln() + (n2 - 1.0) * v2.ln();
        if aic < best.0 {
            best = (aic, k);
        }
    }
    Ok(best.1)
}

/// Lag in samples maximizing the normalized cross-correlation of `target`
/// against `template` over `[-max_lag, +max_lag]`.
///
/// Positive lag means the target is delayed: `target[i] ~ template[i - lag]`.
pub fn xcorr_align(template: &[f64], target: &[f64], max_lag: usize) -> Result<isize> {
    if template.len() <= max_lag || target.len() <= max_lag {
        return Err(Error::data("series must be longer than max_lag"));
    }
    let e_t: f64 = template.iter().map(|x| x * x).sum();
    let e_g: f64 = target.iter().map(|x| x * x).sum();
    if e_t == 0.0 || e_g == 0.0 {
        return Err(Error::domain("zero-energy input"));
    }
    let norm = (e_t * e_g).sqrt();
    let mut best = (f64::NEG_INFINITY, 0isize);
    for lag in -(max_lag as isize)..=(max_lag as isize) {
        let mut acc = 0.0;
        for (i, &tv) in template.iter().enumerate() {
            let j = i as isize + lag;
            if j >= 0 && (j as usize) < target.len() {
                acc += tv * target[j as usize];
            }
        }
        let score = acc / norm;
        if score > best.0 {
            best = (score, lag);
        }
    }
    Ok(best.1)
}

/// Noise-to-signal power ratio of a channel:
/// `alpha = (N * sum(noise^2)) / (N_b * sum(data^2))`.
pub fn noise_alpha(tr: &TraceRecord, noise: Range<usize>, data: Range<usize>) -> Result<f64> {
    tr.validate()?;
    check_window(tr, &noise)?;
    check_window(tr, &data)?;
    if noise.end > data.start && data.end > noise.start {
        return Err(Error::data("noise and data windows overlap"));
    }
    let nb = (noise.end - noise.start) as f64;
    let nd = (data.end - data.start) as f64;
    let sb: f64 = tr.samples[noise].iter().map(|x| x * x).sum();
    let sd: f64 = tr.samples[data].iter().map(|x| x * x).sum();
    if sd == 0.0 {
        return Err(Error::domain("data window has zero power"));
    }
    Ok((nd * sb) / (nb * sd))
}

/// Mean squared amplitude of the pre-arrival noise window.
pub fn noise_variance(tr: &TraceRecord, noise: Range<usize>) -> Result<f64> {
    tr.validate()?;
    check_window(tr, &noise)?;
    let nb = (noise.end - noise.start) as f64;
    Ok(tr.samples[noise].iter().map(|x| x * x).sum::<f64>() / nb)
}

fn check_window(tr: &TraceRecord, w: &Range<usize>) -> Result<()> {
    if w.start >= w.end {
        return Err(Error::data("empty window"));
    }
    if w.end > tr.samples.len() {
        return Err(Error::data("window extends past the record"));
    }
    Ok(())
}

/// Integer decimation with a windowed-sinc low-pass guard at 0.4x the
/// decimated Nyquist. The filter is linear phase and its group delay is
/// removed, so feature times are preserved.
pub fn decimate(tr: &TraceRecord, factor: usize) -> Result<TraceRecord> {
    tr.validate()?;
    if factor == 0 {
        return Err(Error::domain("decimation factor must be positive"));
    }
    if factor == 1 {
        return Ok(tr.clone());
    }
    let cutoff = 0.4 / (2.0 * factor as f64); // cycles per input sample
    let half = 8 * factor;
    let taps = 2 * half + 1;
    let mut h = Vec::with_capacity(taps);
    let mut sum = 0.0;
    for i in 0..taps {
        let m = i as f64 - half as f64;
        let sinc = if m == 0.0 {
            2.0 * cutoff
        } else {
            (2.0 * std::f64::consts::PI * cutoff * m).sin() / (std::f64::consts::PI * m)
        };
        // Hamming window
        let w = 0.54 - 0.46 * (2.0 * std::f64::consts::PI * i as f64 / (taps - 1) as f64).cos();
        let v = sinc * w;
        sum += v;
        h.push(v);
    }
    for v in &mut h {
        *v /= sum;
    }
    let n_out = tr.samples.len() / factor;
    let mut out = Vec::with_capacity(n_out);
    for k in 0..n_out {
        let center = k * factor;
        let mut acc = 0.0;
        for (i, &hv) in h.iter().enumerate() {
            let j = center as isize + i as isize - half as isize;
            if j >= 0 && (j as usize) < tr.samples.len() {
                acc += hv * tr.samples[j as usize];
            }
        }
        out.push(acc);
    }
    Ok(TraceRecord {
        channel_id: tr.channel_id,
        sample_rate_hz: tr.sample_rate_hz / factor as f64,
        t0_s: tr.t0_s,
        samples: out,
    })
}
