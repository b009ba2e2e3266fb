//! Theoretical radiation/reception pattern of a circular piston transducer
//! on an elastic half-space, and its comparison against the cosine incidence
//! model used by the forward synthesis.

use crate::error::{Error, Result};
use crate::physics::MaterialProperties;

/// One pattern evaluation request.
#[derive(Debug, Clone, Copy)]
pub struct PatternQuery {
    /// Incidence angle from the sensor normal, radians, in `[0, pi/2)`.
    pub theta_rad: f64,
    /// Cyclic frequency in Hz.
    pub frequency_hz: f64,
    /// Transducer radius in meters.
    pub sensor_radius_m: f64,
    pub sample: MaterialProperties,
}

impl PatternQuery {
    fn validate(&self) -> Result<()> {
        if !(self.theta_rad >= 0.0 && self.theta_rad < std::f64::consts::FRAC_PI_2) {
            return Err(Error::domain("theta must lie in [0, pi/2)"));
        }
        if !(self.frequency_hz > 0.0) {
            return Err(Error::domain("frequency must be positive"));
        }
        if !(self.sensor_radius_m > 0.0) {
            return Err(Error::domain("sensor radius must be positive"));
        }
        Ok(())
    }
}

/// Pattern amplitude relative to normal incidence, with a flag marking
/// angles where the directivity denominator degenerates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternSample {
    pub amplitude: f64,
    pub degenerate: bool,
}

/// Compressional radiation/reception pattern of a circular piston of radius
/// `R_s`: the aperture factor `J1(k R_s sin t)/(k R_s sin t)` times the
/// free-surface directivity, normalized to the analytic theta = 0 limit
/// (where the aperture factor tends to 1/2).
pub fn tang_pattern(q: &PatternQuery) -> Result<PatternSample> {
    q.validate()?;
    let kappa = q.sample.vs_m_s / q.sample.vp_m_s;
    let k_alpha = 2.0 * std::f64::consts::PI * q.frequency_hz / q.sample.vp_m_s;
    let x = k_alpha * q.sensor_radius_m * q.theta_rad.sin();
    let aperture = if x.abs() < 1e-8 {
        0.5
    } else {
        libm::j1(x) / x
    };
    let s2 = q.theta_rad.sin().powi(2);
    let c = q.theta_rad.cos();
    let bracket = 1.0 - 2.0 * kappa * kappa * s2;
    let num = kappa * kappa * c * bracket;
    let den = bracket * bracket
        + 4.0 * kappa.powi(3) * s2 * c * (1.0 - kappa * kappa * s2).max(0.0).sqrt();
    // theta = 0 reference: aperture 1/2, directivity kappa^2
    let norm = 0.5 * kappa * kappa;
    if den.abs() < 1e-12 {
        return Ok(PatternSample {
            amplitude: 0.0,
            degenerate: true,
        });
    }
    Ok(PatternSample {
        amplitude: aperture * num / den / norm,
        degenerate: false,
    })
}

/// Maximum absolute deviation of the pattern from `cos(theta)` over the
/// angle grid, one value per frequency.
pub fn compare_cosine(
    freqs_hz: &[f64],
    theta_grid_rad: &[f64],
    sensor_radius_m: f64,
    sample: &MaterialProperties,
) -> Result<Vec<f64>> {
    if freqs_hz.is_empty() || theta_grid_rad.is_empty() {
        return Err(Error::data("frequency and angle grids must be non-empty"));
    }
    freqs_hz
        .iter()
        .map(|&f| {
            let mut dev: f64 = 0.0;
            for &th in theta_grid_rad {
                let p = tang_pattern(&PatternQuery {
                    theta_rad: th,
                    frequency_hz: f,
                    sensor_radius_m,
                    sample: *sample,
                })?;
                dev = dev.max((p.amplitude - th.cos()).abs());
            }
            Ok(dev)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn titanium() -> MaterialProperties {
        MaterialProperties::new(4506.0, 113.8e9, 0.32, 6011.6, 3093.0).unwrap()
    }

    fn query(theta: f64, f: f64) -> PatternQuery {
        PatternQuery {
            theta_rad: theta,
            frequency_hz: f,
            sensor_radius_m: 5e-3,
            sample: titanium(),
        }
    }

    /// First zeros of J1, for the lobe-structure oracle.
    pub(crate) const J1_ZEROS: [f64; 5] = [
        3.8317059702075123,
        7.015586669815619,
        10.173468135062722,
        13.323691936314223,
        16.470630050877634,
    ];

    #[test]
    fn normalized_at_zero() {
        let p = tang_pattern(&query(0.0, 100e3)).unwrap();
        assert_relative_eq!(p.amplitude, 1.0, max_relative = 1e-12);
        assert!(!p.degenerate);
    }

    #[test]
    fn small_argument_aperture_limit() {
        // at small x the aperture factor J1(x)/x tends to 1/2, so the pattern
        // reduces to the directivity ratio alone; check against a tiny sensor
        let p_small = tang_pattern(&PatternQuery {
            sensor_radius_m: 1e-6,
            ..query(0.4, 100e3)
        })
        .unwrap();
        let q = query(0.4, 100e3);
        let kappa = q.sample.vs_m_s / q.sample.vp_m_s;
        let s2 = 0.4f64.sin().powi(2);
        let c = 0.4f64.cos();
        let bracket = 1.0 - 2.0 * kappa * kappa * s2;
        let expect = (kappa * kappa * c * bracket)
            / (bracket * bracket
                + 4.0 * kappa.powi(3) * s2 * c * (1.0 - kappa * kappa * s2).sqrt())
            / (kappa * kappa);
        assert_relative_eq!(p_small.amplitude, expect, max_relative = 1e-6);
    }

    #[test]
    fn multi_lobe_zeros_match_bessel_zeros() {
        // at 4 MHz the aperture argument reaches ~20.9, putting five J1 zeros
        // inside the angular domain; locate each pattern zero by bisection
        // and map it back to k R_s sin(theta)
        let f = 4e6;
        let ti = titanium();
        let k_rs = 2.0 * std::f64::consts::PI * f / ti.vp_m_s * 5e-3;
        for &z in J1_ZEROS.iter() {
            assert!(z < k_rs);
            let th_guess = (z / k_rs).asin();
            let eval = |th: f64| tang_pattern(&query(th, f)).unwrap().amplitude;
            let mut lo = th_guess - 0.02;
            let mut hi = th_guess + 0.02;
            assert!(
                eval(lo) * eval(hi) < 0.0,
                "no sign change around expected zero"
            );
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if eval(lo) * eval(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let x_found = k_rs * (0.5 * (lo + hi)).sin();
            assert!(
                (x_found - z).abs() < 1e-6,
                "zero at x = {x_found}, expected {z}"
            );
        }
    }

    #[test]
    fn cosine_deviation_bounds_and_ordering() {
        let ti = titanium();
        let grid: Vec<f64> = (0..10_000)
            .map(|i| i as f64 / 10_000.0 * (std::f64::consts::FRAC_PI_2 - 1e-6))
            .collect();
        let devs = compare_cosine(&[100e3, 700e3, 1e6], &grid, 5e-3, &ti).unwrap();
        assert!(devs[0] < 0.15, "dev(100 kHz) = {}", devs[0]);
        assert!(devs[0] < devs[1] && devs[1] < devs[2], "ordering {devs:?}");
    }

    #[test]
    fn single_point_grid_at_zero_has_no_deviation() {
        let devs = compare_cosine(&[250e3], &[0.0], 5e-3, &titanium()).unwrap();
        assert!(devs[0] < 1e-12);
    }

    #[test]
    fn pattern_even_and_scale_invariant() {
        // dependence only through k_alpha * R_s and theta: scaling f up and
        // R_s down by the same factor leaves the pattern unchanged
        let p1 = tang_pattern(&query(0.7, 400e3)).unwrap();
        let p2 = tang_pattern(&PatternQuery {
            frequency_hz: 800e3,
            sensor_radius_m: 2.5e-3,
            ..query(0.7, 400e3)
        })
        .unwrap();
        assert_relative_eq!(p1.amplitude, p2.amplitude, max_relative = 1e-12);
    }

    #[test]
    fn rejects_out_of_domain_queries() {
        assert!(tang_pattern(&query(-0.1, 1e5)).is_err());
        assert!(tang_pattern(&query(1.6, 1e5)).is_err());
        assert!(tang_pattern(&query(0.3, -1.0)).is_err());
    }

    #[test]
    fn j1_against_tabulated_zeros() {
        for &z in J1_ZEROS.iter() {
            assert!(libm::j1(z).abs() < 1e-10, "J1({z}) = {}", libm::j1(z));
        }
        // series region spot value: J1(1) = 0.4400505857449335
        assert_relative_eq!(libm::j1(1.0), 0.4400505857449335, max_relative = 1e-12);
    }
}
