use super::greens::near_field_nodes;
use super::{
    hertz_contact, loading_pulse, response_dft_bins, BounceParams, ExperimentGeometry,
    FrequencyConvention, MaterialProperties, SensorResponseParams,
};
use crate::error::{Error, Result};
use crate::fft::{next_fast_len, FftPair};
use rustfft::num_complex::Complex64;

/// Placement of one bounce inside its waveform window, absolute times in
/// seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BounceWindowSpec {
    /// Time of the first window sample.
    pub start_s: f64,
    /// P-arrival time; the synthesized onset is placed here, sub-sample
    /// offsets included.
    pub arrival_s: f64,
}

/// Spectral synthesis engine for per-bounce sensor-output windows.
///
/// The discretization contract is the one used by the time-domain route
/// ([`super::greens_displacement`]): the loading pulse is sampled on its own
/// lattice and linearly interpolated, the near-field integral uses trapezoid
/// quadrature with partial end cells, and the far-field terms are delayed
/// interpolated copies. All of those operations are exact two-tap lattice
/// convolutions, so the whole chain collapses into one spectral factor per
/// sensor and bounce placement; only the pulse spectrum and the response
/// bins change with the model parameters.
pub struct SynthEngine {
    fs_hz: f64,
    window_len: usize,
    pad: FftPair,
    scratch: Vec<Complex64>,
}

impl std::fmt::Debug for SynthEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SynthEngine")
            .field("fs_hz", &self.fs_hz)
            .field("window_len", &self.window_len)
            .field("pad_len", &self.pad.len())
            .finish()
    }
}

impl SynthEngine {
    /// `window_s` is the per-bounce window length; `tail_s` is the guard
    /// appended before padding so that ring-down and pulse supports cannot
    /// wrap around the circular buffer.
    pub fn new(fs_hz: f64, window_s: f64, tail_s: f64) -> Result<Self> {
        if !(fs_hz > 0.0 && window_s > 0.0 && tail_s >= 0.0) {
            return Err(Error::domain("sampling rate and window must be positive"));
        }
        let window_len = (window_s * fs_hz).round() as usize;
        if window_len < 16 {
            return Err(Error::domain("window too short"));
        }
        let pad_len = next_fast_len(window_len + (tail_s * fs_hz).ceil() as usize + 64);
        Ok(Self {
            fs_hz,
            window_len,
            pad: FftPair::new(pad_len),
            scratch: vec![Complex64::new(0.0, 0.0); pad_len],
        })
    }

    pub fn fs_hz(&self) -> f64 {
        self.fs_hz
    }

    pub fn dt_s(&self) -> f64 {
        1.0 / self.fs_hz
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    pub fn pad_len(&self) -> usize {
        self.pad.len()
    }

    /// Signed angular frequency of DFT bin `m`.
    pub fn bin_omega(&self, m: usize) -> f64 {
        let len = self.pad.len();
        let k = if m <= len / 2 {
            m as f64
        } else {
            m as f64 - len as f64
        };
        2.0 * std::f64::consts::PI * self.fs_hz * k / len as f64
    }

    /// Spectral factor of a pure delay combined with two-tap linear
    /// interpolation on the sampling lattice.
    fn delay_factor(&self, delay_s: f64, out: &mut [Complex64], scale: f64) {
        let dt = self.dt_s();
        let k = (delay_s / dt).floor();
        let w = delay_s / dt - k;
        let len = self.pad.len();
        for (m, slot) in out.iter_mut().enumerate() {
            let om = self.bin_omega(m);
            let twiddle = Complex64::from_polar(1.0, -om * k * dt);
            let interp = Complex64::new(1.0 - w, 0.0) + Complex64::from_polar(w, -om * dt);
            *slot += scale * twiddle * interp;
        }
        let _ = len;
    }

    /// Geometry-dependent spectral factor mapping a pulse spectrum to the
    /// projected displacement `u_perp` at one sensor, with the impact placed
    /// `t0_in_window_s` after the first window sample.
    pub fn sensor_factor(
        &self,
        geom: &ExperimentGeometry,
        sensor_idx: usize,
        sample: &MaterialProperties,
        t0_in_window_s: f64,
    ) -> Result<Vec<Complex64>> {
        let sensor = geom
            .sensors
            .get(sensor_idx)
            .ok_or_else(|| Error::data(format!("no sensor at index {sensor_idx}")))?;
        sensor.validate()?;
        let (gamma, r) = geom.source_to_sensor(sensor);
        if !(r > 0.0) {
            return Err(Error::domain("source-to-sensor distance must be positive"));
        }
        let xi = sensor.normal;
        let g3 = gamma[2];
        let four_pi_rho = 4.0 * std::f64::consts::PI * sample.density_kg_m3;
        let mut c_near = 0.0;
        let mut c_p = 0.0;
        let mut c_s = 0.0;
        for c in 0..3 {
            let delta = if c == 2 { 1.0 } else { 0.0 };
            c_near += xi[c] * (3.0 * gamma[c] * g3 - delta);
            c_p += xi[c] * gamma[c] * g3;
            c_s -= xi[c] * (gamma[c] * g3 - delta);
        }
        c_near /= four_pi_rho * r * r * r;
        c_p /= four_pi_rho * sample.vp_m_s * sample.vp_m_s * r;
        c_s /= four_pi_rho * sample.vs_m_s * sample.vs_m_s * r;

        let tau_a = r / sample.vp_m_s;
        let tau_b = r / sample.vs_m_s;
        let mut out = vec![Complex64::new(0.0, 0.0); self.pad.len()];
        for (tau, w) in near_field_nodes(tau_a, tau_b, self.dt_s()) {
            self.delay_factor(t0_in_window_s + tau, &mut out, c_near * w * tau);
        }
        self.delay_factor(t0_in_window_s + tau_a, &mut out, c_p);
        self.delay_factor(t0_in_window_s + tau_b, &mut out, c_s);
        Ok(out)
    }

    /// Response kernel on this engine's DFT bins.
    pub fn response_bins(
        &self,
        resp: &SensorResponseParams,
        convention: FrequencyConvention,
        out: &mut Vec<Complex64>,
    ) {
        out.resize(self.pad.len(), Complex64::new(0.0, 0.0));
        response_dft_bins(self.pad.len(), self.fs_hz, resp, convention, out);
    }

    /// FFT of a real sequence zero-padded to the engine length.
    pub fn forward_real(&mut self, time: &[f64], out: &mut Vec<Complex64>) -> Result<()> {
        if time.len() > self.pad.len() {
            return Err(Error::data(format!(
                "sequence of {} samples exceeds the padded length {}",
                time.len(),
                self.pad.len()
            )));
        }
        out.clear();
        out.extend(time.iter().map(|&x| Complex64::new(x, 0.0)));
        out.resize(self.pad.len(), Complex64::new(0.0, 0.0));
        self.pad.forward(out);
        Ok(())
    }

    /// Inverse FFT of a bin spectrum; writes the first `n_out` real samples,
    /// normalized.
    pub fn inverse_real(&mut self, spec: &[Complex64], out: &mut Vec<f64>, n_out: usize) {
        self.scratch.copy_from_slice(spec);
        self.pad.inverse(&mut self.scratch);
        let norm = 1.0 / self.pad.len() as f64;
        out.clear();
        out.extend(self.scratch[..n_out].iter().map(|c| c.re * norm));
    }

    /// Inverse FFT keeping the full complex buffer (used for correlation
    /// searches); normalized.
    pub fn inverse_full(&mut self, spec: &[Complex64]) -> &[Complex64] {
        self.scratch.copy_from_slice(spec);
        self.pad.inverse(&mut self.scratch);
        let norm = 1.0 / self.pad.len() as f64;
        for c in self.scratch.iter_mut() {
            *c *= norm;
        }
        &self.scratch
    }

    /// Sampled loading pulse for one bounce at this engine's rate.
    pub fn bounce_pulse(
        &self,
        ball: &MaterialProperties,
        sample: &MaterialProperties,
        ball_radius_m: f64,
        v_in_m_s: f64,
    ) -> Result<super::LoadingPulse> {
        let (f_max, t_c) = hertz_contact(ball, sample, ball_radius_m, v_in_m_s)?;
        loading_pulse(f_max, t_c, self.dt_s())
    }
}

/// Synthesize the per-bounce sensor-output windows for one sensor.
///
/// Window `k` covers `window_s` seconds starting at `windows[k].start_s`,
/// sampled on the grid anchored there; the bounce is placed so its modeled P
/// arrival falls at `windows[k].arrival_s`. Output is in counts.
#[allow(clippy::too_many_arguments)]
pub fn synthesize_windows(
    geom: &ExperimentGeometry,
    sample: &MaterialProperties,
    ball: &MaterialProperties,
    bp: &BounceParams,
    resp: &SensorResponseParams,
    sensor_idx: usize,
    windows: &[BounceWindowSpec],
    engine: &mut SynthEngine,
    convention: FrequencyConvention,
) -> Result<Vec<Vec<f64>>> {
    bp.validate()?;
    if windows.len() != bp.n_bounces as usize {
        return Err(Error::data(format!(
            "expected {} bounce windows, got {}",
            bp.n_bounces,
            windows.len()
        )));
    }
    let sensor = geom
        .sensors
        .get(sensor_idx)
        .ok_or_else(|| Error::data(format!("no sensor at index {sensor_idx}")))?;
    let (_, r) = geom.source_to_sensor(sensor);
    let tau_a = r / sample.vp_m_s;
    let tau_b = r / sample.vs_m_s;
    let window_s = engine.window_len() as f64 * engine.dt_s();

    let mut resp_bins = Vec::new();
    engine.response_bins(resp, convention, &mut resp_bins);
    let mut pulse_spec = Vec::new();
    let mut spec = vec![Complex64::new(0.0, 0.0); engine.pad_len()];
    let mut out = Vec::with_capacity(windows.len());
    for (k, w) in windows.iter().enumerate() {
        let v_in = bp.incident_speed(k as u32 + 1);
        let pulse = engine.bounce_pulse(ball, sample, geom.ball_radius_m, v_in)?;
        let lead = w.arrival_s - w.start_s;
        if lead < 0.0 {
            return Err(Error::data("bounce arrival precedes its window"));
        }
        if window_s - lead < pulse.t_c_s + (tau_b - tau_a) {
            return Err(Error::data(format!(
                "window of {window_s:.3e} s cannot hold the pulse plus S delay \
                 after the arrival at +{lead:.3e} s"
            )));
        }
        let t0 = lead - tau_a;
        let factor = engine.sensor_factor(geom, sensor_idx, sample, t0)?;
        engine.forward_real(&pulse.samples, &mut pulse_spec)?;
        for m in 0..engine.pad_len() {
            spec[m] = pulse_spec[m] * factor[m] * resp_bins[m];
        }
        let mut window = Vec::new();
        engine.inverse_real(&spec, &mut window, engine.window_len());
        out.push(window);
    }
    Ok(out)
}

/// Concatenated multi-bounce record for one sensor: each bounce occupies one
/// window of `window_s` seconds starting `pre_roll_s` before its arrival.
#[allow(clippy::too_many_arguments)]
pub fn synthesize_record(
    geom: &ExperimentGeometry,
    sample: &MaterialProperties,
    ball: &MaterialProperties,
    bp: &BounceParams,
    resp: &SensorResponseParams,
    sensor_idx: usize,
    arrival_times_s: &[f64],
    fs_hz: f64,
    window_s: f64,
    pre_roll_s: f64,
    convention: FrequencyConvention,
) -> Result<Vec<f64>> {
    let mut engine = SynthEngine::new(fs_hz, window_s, synth_tail_s(convention))?;
    let windows: Vec<BounceWindowSpec> = arrival_times_s
        .iter()
        .map(|&a| BounceWindowSpec {
            start_s: a - pre_roll_s,
            arrival_s: a,
        })
        .collect();
    let parts = synthesize_windows(
        geom,
        sample,
        ball,
        bp,
        resp,
        sensor_idx,
        &windows,
        &mut engine,
        convention,
    )?;
    Ok(parts.into_iter().flatten().collect())
}

/// Circular-buffer guard long enough for the slowest ring-down admitted by
/// the priors (epsilon >= 10 kHz in either frequency convention).
pub fn synth_tail_s(convention: FrequencyConvention) -> f64 {
    let eps_min_rad = convention.khz_to_rad_s(10.0);
    (14.0 / eps_min_rad).max(300e-6)
}
