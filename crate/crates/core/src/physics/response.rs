use super::SensorResponseParams;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// How the kHz figures of [`SensorResponseParams`] map to angular frequency.
///
/// The resonance tables quote omega_s in kHz without stating whether a 2*pi
/// factor is implied. `Cyclic` (the default) reads them as cyclic
/// frequencies, so a 350 kHz resonance peaks near 350 kHz on a spectrum plot;
/// `Angular` reads them as krad/s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FrequencyConvention {
    #[default]
    Cyclic,
    Angular,
}

impl FrequencyConvention {
    /// Convert a stored kHz figure to rad/s.
    pub fn khz_to_rad_s(self, khz: f64) -> f64 {
        match self {
            FrequencyConvention::Cyclic => 2.0 * std::f64::consts::PI * khz * 1e3,
            FrequencyConvention::Angular => khz * 1e3,
        }
    }
}

/// Damped-oscillator frequency response
/// `R(w) = -C w^2 / (w^2 + 2 i eps w - w_s^2)`
/// evaluated on a grid of angular frequencies (rad/s).
///
/// This follows the `e^{+iwt}` transform convention, under which the kernel
/// is causal: the phase delay `arg R` runs from 0 at low frequency through
/// pi/2 at resonance to pi at high frequency. `|R| -> C` as `w -> inf` and
/// `|R| ~ C w^2 / w_s^2` as `w -> 0`.
pub fn sensor_response_spectrum(
    freq_grid_rad_s: &[f64],
    p: &SensorResponseParams,
    convention: FrequencyConvention,
) -> Vec<Complex64> {
    let ws = convention.khz_to_rad_s(p.omega_s_khz);
    let eps = convention.khz_to_rad_s(p.epsilon_khz);
    freq_grid_rad_s
        .iter()
        .map(|&w| eval_response(w, ws, eps, p.c_gain, 1.0))
        .collect()
}

/// Amplitude `|R|` and phase delay `arg R` (in `[0, pi]`) on a grid of
/// angular frequencies.
pub fn response_amplitude_phase(
    freq_grid_rad_s: &[f64],
    p: &SensorResponseParams,
    convention: FrequencyConvention,
) -> Vec<(f64, f64)> {
    sensor_response_spectrum(freq_grid_rad_s, p, convention)
        .iter()
        .map(|r| {
            let mut phase = r.arg();
            if phase < 0.0 {
                phase += 2.0 * std::f64::consts::PI;
            }
            (r.norm(), phase)
        })
        .collect()
}

#[inline]
fn eval_response(w: f64, ws: f64, eps: f64, c: f64, conj_sign: f64) -> Complex64 {
    let den = Complex64::new(w * w - ws * ws, conj_sign * 2.0 * eps * w);
    if den.norm_sqr() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(-c * w * w, 0.0) / den
}

/// Fill the length-`len` DFT bin spectrum of the response kernel for signals
/// sampled at `fs_hz`.
///
/// The DFT pair used throughout the synthesis is `e^{-iwt}` (the rustfft
/// forward transform), which is the opposite sign convention from
/// [`sensor_response_spectrum`]; the bins therefore take the complex
/// conjugate of the formula so that the kernel stays causal. Bin 0 is zero
/// (the response kills DC) and the Nyquist bin is forced real so the kernel
/// is a real sequence.
pub fn response_dft_bins(
    len: usize,
    fs_hz: f64,
    p: &SensorResponseParams,
    convention: FrequencyConvention,
    out: &mut [Complex64],
) {
    assert_eq!(out.len(), len);
    let ws = convention.khz_to_rad_s(p.omega_s_khz);
    let eps = convention.khz_to_rad_s(p.epsilon_khz);
    let dw = 2.0 * std::f64::consts::PI * fs_hz / len as f64;
    for (m, slot) in out.iter_mut().enumerate() {
        let k = if m <= len / 2 {
            m as f64
        } else {
            m as f64 - len as f64
        };
        *slot = eval_response(k * dw, ws, eps, p.c_gain, -1.0);
    }
    out[0] = Complex64::new(0.0, 0.0);
    if len % 2 == 0 {
        let ny = len / 2;
        out[ny] = Complex64::new(out[ny].re, 0.0);
    }
}
