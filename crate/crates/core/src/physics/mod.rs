//! Deterministic forward model: ball bounce kinematics, Hertzian impact
//! loading, full-space elastodynamic displacement, and the sensor response
//! that maps displacement to recorded counts.

mod greens;
mod response;
mod synth;

pub use greens::{greens_displacement, greens_terms, project_incidence, GreensTerms};
pub use response::{
    response_amplitude_phase, response_dft_bins, sensor_response_spectrum, FrequencyConvention,
};
pub use synth::{synthesize_record, synthesize_windows, BounceWindowSpec, SynthEngine};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Isotropic elastic constants of one material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialProperties {
    /// Density in kg/m^3.
    pub density_kg_m3: f64,
    /// Young's modulus in Pa.
    pub youngs_modulus_pa: f64,
    /// Poisson's ratio (dimensionless).
    pub poisson_ratio: f64,
    /// P wave speed in m/s.
    pub vp_m_s: f64,
    /// S wave speed in m/s.
    pub vs_m_s: f64,
}

impl MaterialProperties {
    pub fn new(
        density_kg_m3: f64,
        youngs_modulus_pa: f64,
        poisson_ratio: f64,
        vp_m_s: f64,
        vs_m_s: f64,
    ) -> Result<Self> {
        let m = Self {
            density_kg_m3,
            youngs_modulus_pa,
            poisson_ratio,
            vp_m_s,
            vs_m_s,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.density_kg_m3 > 0.0) {
            return Err(Error::domain("density must be positive"));
        }
        if !(self.youngs_modulus_pa > 0.0) {
            return Err(Error::domain("youngs_modulus must be positive"));
        }
        if !(self.poisson_ratio > 0.0 && self.poisson_ratio < 0.5) {
            return Err(Error::domain("poisson_ratio must lie in (0, 0.5)"));
        }
        if !(self.vp_m_s > self.vs_m_s && self.vs_m_s > 0.0) {
            return Err(Error::domain("wave speeds must satisfy vp > vs > 0"));
        }
        Ok(())
    }

    /// Half-space compliance factor (1 - nu^2) / (pi E).
    pub fn contact_compliance(&self) -> f64 {
        (1.0 - self.poisson_ratio * self.poisson_ratio)
            / (std::f64::consts::PI * self.youngs_modulus_pa)
    }
}

/// One sensor mounted on the sample surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorMount {
    pub id: u16,
    /// Position in meters, source-centered frame, x3 vertical.
    pub position_m: [f64; 3],
    /// Unit outward normal; radial, so the third component must be 0.
    pub normal: [f64; 3],
}

impl SensorMount {
    pub fn validate(&self) -> Result<()> {
        let n = self.normal;
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "sensor {}: normal must be unit length (|n| = {norm})",
                self.id
            )));
        }
        if n[2] != 0.0 {
            return Err(Error::domain(format!(
                "sensor {}: normal must be radial (third component 0, got {})",
                self.id, n[2]
            )));
        }
        Ok(())
    }
}

/// Source position, sensor table, ball radius and gravity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentGeometry {
    /// Impact point in meters.
    pub source_m: [f64; 3],
    pub sensors: Vec<SensorMount>,
    pub ball_radius_m: f64,
    pub gravity_m_s2: f64,
}

impl ExperimentGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.ball_radius_m > 0.0) {
            return Err(Error::domain("ball_radius must be positive"));
        }
        if !(self.gravity_m_s2 > 0.0) {
            return Err(Error::domain("gravity must be positive"));
        }
        if self.sensors.is_empty() {
            return Err(Error::domain("geometry needs at least one sensor"));
        }
        for s in &self.sensors {
            s.validate()?;
            if self.source_to_sensor(s).1 <= 0.0 {
                return Err(Error::domain(format!(
                    "sensor {} coincides with the source",
                    s.id
                )));
            }
        }
        Ok(())
    }

    /// Direction cosines and distance from the source to a sensor.
    pub fn source_to_sensor(&self, sensor: &SensorMount) -> ([f64; 3], f64) {
        let d = [
            sensor.position_m[0] - self.source_m[0],
            sensor.position_m[1] - self.source_m[1],
            sensor.position_m[2] - self.source_m[2],
        ];
        let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if r == 0.0 {
            return ([0.0; 3], 0.0);
        }
        ([d[0] / r, d[1] / r, d[2] / r], r)
    }
}

/// Ball drop kinematics: initial impact speed, rebound coefficient, bounce count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BounceParams {
    pub v0_m_s: f64,
    pub rebound: f64,
    pub n_bounces: u32,
}

impl BounceParams {
    pub fn new(v0_m_s: f64, rebound: f64, n_bounces: u32) -> Result<Self> {
        let p = Self {
            v0_m_s,
            rebound,
            n_bounces,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v0_m_s > 0.0) {
            return Err(Error::domain("v0 must be positive"));
        }
        if !(self.rebound > 0.0 && self.rebound < 1.0) {
            return Err(Error::domain("rebound coefficient must lie in (0, 1)"));
        }
        if !(1..=3).contains(&self.n_bounces) {
            return Err(Error::domain(
                "bounce count must lie in 1..=3; the free-flight rebound model \
                 does not hold beyond the third bounce",
            ));
        }
        Ok(())
    }

    /// Incident speed of the k-th bounce (k = 1 is the initial impact).
    pub fn incident_speed(&self, k: u32) -> f64 {
        self.v0_m_s * self.rebound.powi(k as i32 - 1)
    }
}

/// Inter-bounce flight times `[2 a v0 / g, 2 a^2 v0 / g, ...]`, one entry per
/// gap between consecutive impacts (`n - 1` total).
///
/// Consecutive entries are built multiplicatively so their ratio is the
/// rebound coefficient to machine precision.
pub fn bounce_intervals(p: &BounceParams, gravity_m_s2: f64) -> Result<Vec<f64>> {
    p.validate()?;
    if !(gravity_m_s2 > 0.0) {
        return Err(Error::domain("gravity must be positive"));
    }
    let mut out = Vec::with_capacity(p.n_bounces.saturating_sub(1) as usize);
    let mut dt = 2.0 * p.rebound * p.v0_m_s / gravity_m_s2;
    for _ in 1..p.n_bounces {
        out.push(dt);
        dt *= p.rebound;
    }
    Ok(out)
}

/// Peak force (N) and contact duration (s) of an elastic sphere impact.
pub fn hertz_contact(
    ball: &MaterialProperties,
    sample: &MaterialProperties,
    ball_radius_m: f64,
    v_in_m_s: f64,
) -> Result<(f64, f64)> {
    if !(v_in_m_s > 0.0) {
        return Err(Error::domain("impact speed must be positive"));
    }
    if !(ball_radius_m > 0.0) {
        return Err(Error::domain("ball radius must be positive"));
    }
    let dsum = ball.contact_compliance() + sample.contact_compliance();
    let rho = ball.density_kg_m3;
    let f_max = 1.917
        * rho.powf(0.6)
        * dsum.powf(-0.4)
        * ball_radius_m
        * ball_radius_m
        * v_in_m_s.powf(1.2);
    let t_c = 4.53
        * (4.0 * rho * std::f64::consts::PI * dsum / 3.0).powf(0.4)
        * ball_radius_m
        * v_in_m_s.powf(-0.2);
    Ok((f_max, t_c))
}

/// Compressive loading pulse of one impact, sampled at `dt`.
///
/// `samples[i] = -f_max * sin(pi * i * dt / t_c)^{3/2}` on `[0, t_c]`, zero
/// outside. Off-grid values come from [`LoadingPulse::value_at`] by linear
/// interpolation, which is also the discretization contract used by the
/// waveform synthesis.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadingPulse {
    pub f_max_n: f64,
    pub t_c_s: f64,
    pub dt_s: f64,
    pub samples: Vec<f64>,
}

pub fn loading_pulse(f_max_n: f64, t_c_s: f64, dt_s: f64) -> Result<LoadingPulse> {
    if !(f_max_n > 0.0 && t_c_s > 0.0) {
        return Err(Error::domain("pulse force and duration must be positive"));
    }
    if !(dt_s > 0.0) || dt_s >= t_c_s / 10.0 {
        return Err(Error::domain(format!(
            "sampling step {dt_s:.3e} s is too coarse to resolve the pulse; \
             required dt < t_c/10 = {:.3e} s",
            t_c_s / 10.0
        )));
    }
    let n = (t_c_s / dt_s).floor() as usize + 1;
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 * dt_s;
            let s = (std::f64::consts::PI * t / t_c_s).sin();
            // guard against -0.0^1.5 at the trailing endpoint
            -f_max_n * s.max(0.0).powf(1.5)
        })
        .collect();
    Ok(LoadingPulse {
        f_max_n,
        t_c_s,
        dt_s,
        samples,
    })
}

impl LoadingPulse {
    /// Pulse value at an arbitrary time, linearly interpolated between samples
    /// and zero outside the sampled support.
    pub fn value_at(&self, t_s: f64) -> f64 {
        if t_s < 0.0 {
            return 0.0;
        }
        let x = t_s / self.dt_s;
        let i = x.floor() as usize;
        if i + 1 >= self.samples.len() {
            if i + 1 == self.samples.len() && x == i as f64 {
                return self.samples[i];
            }
            return 0.0;
        }
        let w = x - i as f64;
        self.samples[i] * (1.0 - w) + self.samples[i + 1] * w
    }
}

/// Damped-oscillator response parameters of one sensor.
///
/// Frequencies are stored as plain kHz figures; how they convert to angular
/// frequency is decided by [`FrequencyConvention`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorResponseParams {
    pub omega_s_khz: f64,
    pub epsilon_khz: f64,
    /// Conversion constant in counts per meter.
    pub c_gain: f64,
}

impl SensorResponseParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega_s_khz > 0.0) {
            return Err(Error::domain("resonance frequency must be positive"));
        }
        if !(self.epsilon_khz > 0.0) {
            return Err(Error::domain("damping coefficient must be positive"));
        }
        if !(self.c_gain > 0.0) {
            return Err(Error::domain("conversion constant must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
