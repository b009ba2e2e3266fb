use super::{ExperimentGeometry, LoadingPulse, MaterialProperties};
use crate::error::{Error, Result};

/// The three contributions to the full-space displacement field, kept
/// separate so their distance scalings can be checked independently.
#[derive(Debug, Clone)]
pub struct GreensTerms {
    /// 1/r^3 term carrying the time integral between the P and S lags.
    pub near: [Vec<f64>; 3],
    /// 1/r far-field P term.
    pub far_p: [Vec<f64>; 3],
    /// 1/r far-field S term.
    pub far_s: [Vec<f64>; 3],
}

impl GreensTerms {
    pub fn total(&self) -> [Vec<f64>; 3] {
        let n = self.near[0].len();
        let mut out = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for c in 0..3 {
            for i in 0..n {
                out[c][i] = self.near[c][i] + self.far_p[c][i] + self.far_s[c][i];
            }
        }
        out
    }
}

/// Quadrature nodes and trapezoid weights for the near-field time integral
/// over `[r/vp, r/vs]`: interior nodes on the `dt` grid, partial end cells at
/// the exact interval endpoints.
pub(crate) fn near_field_nodes(tau_a: f64, tau_b: f64, dt: f64) -> Vec<(f64, f64)> {
    let mut nodes = vec![tau_a];
    let mut j = (tau_a / dt).ceil() as i64;
    if j as f64 * dt <= tau_a {
        j += 1;
    }
    while (j as f64) * dt < tau_b {
        nodes.push(j as f64 * dt);
        j += 1;
    }
    nodes.push(tau_b);
    let m = nodes.len();
    nodes
        .iter()
        .enumerate()
        .map(|(i, &tau)| {
            let mut w = 0.0;
            if i > 0 {
                w += 0.5 * (tau - nodes[i - 1]);
            }
            if i + 1 < m {
                w += 0.5 * (nodes[i + 1] - tau);
            }
            (tau, w)
        })
        .collect()
}

/// Three-component displacement at one sensor for a vertical point force with
/// the given loading pulse applied at the source at `t = 0`.
///
/// Direct time-domain evaluation: near-field integral by trapezoid quadrature
/// on the sampling grid, far-field P and S terms as delayed copies of the
/// pulse with 1/r decay.
pub fn greens_terms(
    geom: &ExperimentGeometry,
    sensor_idx: usize,
    sample: &MaterialProperties,
    pulse: &LoadingPulse,
    dt_s: f64,
    t_len_s: f64,
) -> Result<GreensTerms> {
    let sensor = geom
        .sensors
        .get(sensor_idx)
        .ok_or_else(|| Error::data(format!("no sensor at index {sensor_idx}")))?;
    let (gamma, r) = geom.source_to_sensor(sensor);
    if !(r > 0.0) {
        return Err(Error::domain("source-to-sensor distance must be positive"));
    }
    let tau_a = r / sample.vp_m_s;
    let tau_b = r / sample.vs_m_s;
    if t_len_s < tau_b + pulse.t_c_s {
        return Err(Error::data(format!(
            "t_len {t_len_s:.3e} s does not cover the S arrival plus pulse \
             ({:.3e} s)",
            tau_b + pulse.t_c_s
        )));
    }
    let n = (t_len_s / dt_s).round() as usize;
    let four_pi_rho = 4.0 * std::f64::consts::PI * sample.density_kg_m3;
    let g3 = gamma[2];
    let nodes = near_field_nodes(tau_a, tau_b, dt_s);

    let mut near = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut far_p = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut far_s = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];

    let mut integral = vec![0.0; n];
    for (i, acc) in integral.iter_mut().enumerate() {
        let t = i as f64 * dt_s;
        let mut s = 0.0;
        for &(tau, w) in &nodes {
            s += w * tau * pulse.value_at(t - tau);
        }
        *acc = s;
    }

    for c in 0..3 {
        let delta = if c == 2 { 1.0 } else { 0.0 };
        let coef_near = (3.0 * gamma[c] * g3 - delta) / (four_pi_rho * r * r * r);
        let coef_p = gamma[c] * g3 / (four_pi_rho * sample.vp_m_s * sample.vp_m_s * r);
        let coef_s = -(gamma[c] * g3 - delta) / (four_pi_rho * sample.vs_m_s * sample.vs_m_s * r);
        for i in 0..n {
            let t = i as f64 * dt_s;
            near[c][i] = coef_near * integral[i];
            far_p[c][i] = coef_p * pulse.value_at(t - tau_a);
            far_s[c][i] = coef_s * pulse.value_at(t - tau_b);
        }
    }
    Ok(GreensTerms { near, far_p, far_s })
}

/// Sum of the three displacement terms; see [`greens_terms`].
pub fn greens_displacement(
    geom: &ExperimentGeometry,
    sensor_idx: usize,
    sample: &MaterialProperties,
    pulse: &LoadingPulse,
    dt_s: f64,
    t_len_s: f64,
) -> Result<[Vec<f64>; 3]> {
    Ok(greens_terms(geom, sensor_idx, sample, pulse, dt_s, t_len_s)?.total())
}

/// Project a three-component displacement onto a sensor's unit normal,
/// the cosine incidence model.
pub fn project_incidence(u: &[Vec<f64>; 3], normal: &[f64; 3]) -> Result<Vec<f64>> {
    let norm = (normal[0] * normal[0] + normal[1] * normal[1] + normal[2] * normal[2]).sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!(
            "normal must be unit length, |n| = {norm}"
        )));
    }
    let n = u[0].len();
    if u[1].len() != n || u[2].len() != n {
        return Err(Error::data("displacement components differ in length"));
    }
    Ok((0..n)
        .map(|i| u[0][i] * normal[0] + u[1][i] * normal[1] + u[2][i] * normal[2])
        .collect())
}
