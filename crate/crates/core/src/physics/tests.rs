use super::*;
use approx::assert_relative_eq;
use proptest::prelude::*;
use rustfft::num_complex::Complex64;

pub(crate) fn steel_ball() -> MaterialProperties {
    MaterialProperties::new(8050.0, 180.0e9, 0.305, 5525.8, 2927.0).unwrap()
}

pub(crate) fn titanium() -> MaterialProperties {
    MaterialProperties::new(4506.0, 113.8e9, 0.32, 6011.6, 3093.0).unwrap()
}

fn one_sensor_geom(position: [f64; 3], normal: [f64; 3]) -> ExperimentGeometry {
    ExperimentGeometry {
        source_m: [0.0; 3],
        sensors: vec![SensorMount {
            id: 1,
            position_m: position,
            normal,
        }],
        ball_radius_m: 3.18e-3,
        gravity_m_s2: 9.81,
    }
}

// ---- bounce kinematics ----

#[test]
fn intervals_match_hand_arithmetic() {
    // v0, a are posterior means of one published calibration run
    let p = BounceParams::new(1.311, 0.61152, 3).unwrap();
    let dt = bounce_intervals(&p, 9.81).unwrap();
    assert_eq!(dt.len(), 2);
    assert_relative_eq!(dt[0], 0.163446018349, max_relative = 1e-9);
    assert_relative_eq!(dt[1], 0.0999505091406, max_relative = 1e-9);
}

#[test]
fn intervals_trivial_cases() {
    let p = BounceParams::new(1.0, 0.5, 2).unwrap();
    let dt = bounce_intervals(&p, 10.0).unwrap();
    assert_eq!(dt, vec![0.1]);

    let p1 = BounceParams::new(1.0, 0.5, 1).unwrap();
    assert!(bounce_intervals(&p1, 10.0).unwrap().is_empty());
}

#[test]
fn intervals_reject_bad_params() {
    assert!(BounceParams::new(-1.0, 0.5, 2).is_err());
    assert!(BounceParams::new(1.0, 1.5, 2).is_err());
    assert!(BounceParams::new(1.0, 0.5, 4).is_err());
    let p = BounceParams::new(1.0, 0.5, 2).unwrap();
    assert!(bounce_intervals(&p, 0.0).is_err());
}

proptest! {
    #[test]
    fn interval_ratios_equal_rebound(v0 in 0.1f64..5.0, a in 0.05f64..0.95) {
        let p = BounceParams::new(v0, a, 3).unwrap();
        let dt = bounce_intervals(&p, 9.81).unwrap();
        prop_assert_eq!(dt.len(), 2);
        prop_assert!(dt[0] > dt[1]);
        let ratio = dt[1] / dt[0];
        prop_assert!((ratio - a).abs() <= 4.0 * f64::EPSILON * a);
    }
}

// ---- Hertz contact ----

#[test]
fn hertz_matches_scripted_oracle() {
    // frozen from a 50-digit evaluation of the contact formulas with the
    // steel-on-titanium constants, R1 = 3.18 mm
    let (f_max, t_c) = hertz_contact(&steel_ball(), &titanium(), 3.18e-3, 1.31).unwrap();
    assert_relative_eq!(f_max, 211.81176016522492, max_relative = 1e-12);
    assert_relative_eq!(t_c, 2.4657794303010054e-5, max_relative = 1e-12);

    let (f_max, t_c) = hertz_contact(&steel_ball(), &titanium(), 3.18e-3, 1.311).unwrap();
    assert_relative_eq!(f_max, 212.00580101320506, max_relative = 1e-12);
    assert_relative_eq!(t_c, 2.4654031477517681e-5, max_relative = 1e-12);
}

#[test]
fn hertz_power_law_in_speed() {
    let (f1, t1) = hertz_contact(&steel_ball(), &titanium(), 3.18e-3, 1.0).unwrap();
    let (f2, t2) = hertz_contact(&steel_ball(), &titanium(), 3.18e-3, 2.0).unwrap();
    assert_relative_eq!(f2 / f1, 2f64.powf(1.2), max_relative = 1e-13);
    assert_relative_eq!(t2 / t1, 2f64.powf(-0.2), max_relative = 1e-13);
}

#[test]
fn contact_compliance_identity_case() {
    // E = 1/pi, nu = 0 gives unit compliance
    let m = MaterialProperties {
        density_kg_m3: 1.0,
        youngs_modulus_pa: 1.0 / std::f64::consts::PI,
        poisson_ratio: 1e-12,
        vp_m_s: 2.0,
        vs_m_s: 1.0,
    };
    assert_relative_eq!(m.contact_compliance(), 1.0, max_relative = 1e-12);
}

#[test]
fn hertz_rejects_nonpositive_speed() {
    assert!(hertz_contact(&steel_ball(), &titanium(), 3.18e-3, 0.0).is_err());
    assert!(hertz_contact(&steel_ball(), &titanium(), 3.18e-3, -1.0).is_err());
}

proptest! {
    #[test]
    fn hertz_scaling_laws(v in 0.2f64..4.0, beta in 1.1f64..3.0, r in 1e-3f64..1e-2) {
        let ball = steel_ball();
        let ti = titanium();
        let (f1, t1) = hertz_contact(&ball, &ti, r, v).unwrap();
        let (f2, t2) = hertz_contact(&ball, &ti, r, beta * v).unwrap();
        prop_assert!((f2 / f1 / beta.powf(1.2) - 1.0).abs() < 1e-12);
        prop_assert!((t2 / t1 / beta.powf(-0.2) - 1.0).abs() < 1e-12);
        let (f3, t3) = hertz_contact(&ball, &ti, beta * r, v).unwrap();
        prop_assert!((f3 / f1 / (beta * beta) - 1.0).abs() < 1e-12);
        prop_assert!((t3 / t1 / beta - 1.0).abs() < 1e-12);
    }
}

// ---- loading pulse ----

#[test]
fn pulse_midpoint_and_endpoints() {
    let t_c = 24.6e-6;
    let p = loading_pulse(212.0, t_c, t_c / 20.0).unwrap();
    assert_eq!(p.samples.len(), 21);
    assert_relative_eq!(p.samples[10], -212.0, max_relative = 1e-12);
    assert_eq!(p.samples[0], 0.0);
    assert!(p.samples[20].abs() < 1e-9);
    assert_eq!(p.value_at(-1e-9), 0.0);
    assert_eq!(p.value_at(t_c + 1e-9), 0.0);
}

#[test]
fn pulse_trapezoid_integral_matches_quadrature_oracle() {
    // integral of sin(x)^{3/2} over [0, pi], divided by pi, from dense
    // quadrature: 0.55641789444938212
    let (f_max, t_c) = (212.0, 24.6e-6);
    let p = loading_pulse(f_max, t_c, 80e-9).unwrap();
    let integral: f64 = p.samples.iter().sum::<f64>() * p.dt_s;
    let expected = -f_max * t_c * 0.55641789444938212;
    assert_relative_eq!(integral, expected, max_relative = 1e-4);
}

#[test]
fn pulse_rejects_coarse_sampling() {
    let err = loading_pulse(212.0, 24.6e-6, 3e-6).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("required dt"), "message was: {msg}");
}

proptest! {
    #[test]
    fn pulse_compressive_and_symmetric(f_max in 1.0f64..500.0, t_c in 1e-6f64..1e-4) {
        let p = loading_pulse(f_max, t_c, t_c / 64.0).unwrap();
        for &s in &p.samples {
            prop_assert!(s <= 0.0);
        }
        let peak = p.samples.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!((peak + f_max).abs() / f_max < 1e-3);
        let n = p.samples.len() - 1;
        for i in 0..=n {
            prop_assert!((p.samples[i] - p.samples[n - i]).abs() < 1e-9 * f_max);
        }
    }
}

// ---- Green's function ----

fn unit_impulse(dt: f64) -> LoadingPulse {
    LoadingPulse {
        f_max_n: 1.0 / dt,
        t_c_s: dt,
        dt_s: dt,
        samples: vec![-1.0 / dt],
    }
}

#[test]
fn far_field_p_on_axis_matches_analytic_amplitude() {
    // receiver straight below the source at r = 30 mm; unit impulse area.
    // expected integrated far-field P response: 1/(4 pi rho vp^2 r)
    let geom = one_sensor_geom([0.030, 0.0, 0.0], [1.0, 0.0, 0.0]);
    let ti = titanium();
    let dt = 80e-9;
    let pulse = unit_impulse(dt);
    let terms = greens_terms(&geom, 0, &ti, &pulse, dt, 40e-6).unwrap();
    // this receiver lies on the x1 axis; gamma = (1,0,0), so the component-3
    // far-field P term vanishes and component 1 carries gamma1*gamma3 = 0 too.
    // use a receiver on the x3 axis for the amplitude check:
    let geom3 = one_sensor_geom([0.0, 0.0, -0.030], [1.0, 0.0, 0.0]);
    let terms3 = greens_terms(&geom3, 0, &ti, &pulse, dt, 40e-6).unwrap();
    let area: f64 = terms3.far_p[2].iter().sum::<f64>() * dt;
    let expected = -1.0 / (4.0 * std::f64::consts::PI * ti.density_kg_m3 * ti.vp_m_s.powi(2) * 0.030);
    assert_relative_eq!(area, expected, max_relative = 1e-12);
    // horizontal-plane receiver: gamma3 = 0 kills the far-field P everywhere
    for c in 0..3 {
        assert!(terms.far_p[c].iter().all(|&x| x == 0.0));
    }
}

#[test]
fn far_field_scaling_with_distance() {
    let ti = titanium();
    let dt = 80e-9;
    let pulse = unit_impulse(dt);
    let g1 = one_sensor_geom([0.0, 0.0, -0.020], [1.0, 0.0, 0.0]);
    let g2 = one_sensor_geom([0.0, 0.0, -0.040], [1.0, 0.0, 0.0]);
    let t1 = greens_terms(&g1, 0, &ti, &pulse, dt, 60e-6).unwrap();
    let t2 = greens_terms(&g2, 0, &ti, &pulse, dt, 60e-6).unwrap();
    let a1: f64 = t1.far_p[2].iter().sum::<f64>() * dt;
    let a2: f64 = t2.far_p[2].iter().sum::<f64>() * dt;
    assert_relative_eq!(a2 / a1, 0.5, max_relative = 1e-12);
    // arrival shifts by delta_r / vp
    let peak1 = t1.far_p[2]
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    let peak2 = t2.far_p[2]
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    let shift = (peak2 - peak1) as f64 * dt;
    assert!((shift - 0.020 / ti.vp_m_s).abs() < 2.0 * dt);
}

#[test]
fn near_field_quadrature_matches_closed_form_area() {
    // trapezoid weights integrate tau exactly, so the integrated near-field
    // response equals coef * (tau_b^2 - tau_a^2)/2 * impulse area
    let ti = titanium();
    let dt = 80e-9;
    let pulse = unit_impulse(dt);
    let r = 0.030;
    let geom = one_sensor_geom([0.0, 0.0, -r], [1.0, 0.0, 0.0]);
    let terms = greens_terms(&geom, 0, &ti, &pulse, dt, 60e-6).unwrap();
    let area: f64 = terms.near[2].iter().sum::<f64>() * dt;
    let tau_a = r / ti.vp_m_s;
    let tau_b = r / ti.vs_m_s;
    let coef = (3.0 - 1.0) / (4.0 * std::f64::consts::PI * ti.density_kg_m3 * r.powi(3));
    let expected = -coef * (tau_b * tau_b - tau_a * tau_a) / 2.0;
    assert_relative_eq!(area, expected, max_relative = 1e-9);
}

#[test]
fn greens_requires_window_covering_s_arrival() {
    let ti = titanium();
    let dt = 80e-9;
    let pulse = unit_impulse(dt);
    let geom = one_sensor_geom([0.0, 0.0, -0.030], [1.0, 0.0, 0.0]);
    assert!(greens_terms(&geom, 0, &ti, &pulse, dt, 5e-6).is_err());
}

// ---- incidence projection ----

#[test]
fn projection_examples() {
    let u = [vec![1.0, 2.0], vec![0.0, 0.0], vec![0.0, 0.0]];
    let out = project_incidence(&u, &[1.0, 0.0, 0.0]).unwrap();
    assert_eq!(out, vec![1.0, 2.0]);

    let out = project_incidence(&u, &[0.0, 1.0, 0.0]).unwrap();
    assert_eq!(out, vec![0.0, 0.0]);

    let s = 1.0 / 2f64.sqrt();
    let u2 = [vec![s], vec![s], vec![0.0]];
    let out = project_incidence(&u2, &[1.0, 0.0, 0.0]).unwrap();
    assert_relative_eq!(out[0], s, max_relative = 1e-15);

    assert!(project_incidence(&u, &[0.5, 0.0, 0.0]).is_err());
}

proptest! {
    #[test]
    fn projection_linear_and_bounded(
        a in proptest::collection::vec(-10.0f64..10.0, 4),
        b in proptest::collection::vec(-10.0f64..10.0, 4),
        phi in 0.0f64..std::f64::consts::TAU,
    ) {
        let u = [a.clone(), b.clone(), vec![0.0; 4]];
        let n = [phi.cos(), phi.sin(), 0.0];
        let out = project_incidence(&u, &n).unwrap();
        for i in 0..4 {
            let norm = (a[i] * a[i] + b[i] * b[i]).sqrt();
            prop_assert!(out[i].abs() <= norm + 1e-12);
        }
        // linearity under doubling
        let u2 = [
            a.iter().map(|x| 2.0 * x).collect::<Vec<_>>(),
            b.iter().map(|x| 2.0 * x).collect::<Vec<_>>(),
            vec![0.0; 4],
        ];
        let out2 = project_incidence(&u2, &n).unwrap();
        for i in 0..4 {
            prop_assert!((out2[i] - 2.0 * out[i]).abs() < 1e-12);
        }
    }
}

// ---- sensor response ----

#[test]
fn resonance_gain() {
    let p = SensorResponseParams {
        omega_s_khz: 358.74,
        epsilon_khz: 17.55,
        c_gain: 1.0,
    };
    let ws = FrequencyConvention::Cyclic.khz_to_rad_s(358.74);
    let spec = sensor_response_spectrum(&[ws], &p, FrequencyConvention::Cyclic);
    assert_relative_eq!(spec[0].norm(), 358.74 / (2.0 * 17.55), max_relative = 1e-12);
    assert_relative_eq!(spec[0].norm(), 10.2205128205, max_relative = 1e-9);
}

#[test]
fn response_asymptotics() {
    let p = SensorResponseParams {
        omega_s_khz: 350.0,
        epsilon_khz: 20.0,
        c_gain: 2.5,
    };
    let conv = FrequencyConvention::Cyclic;
    let ws = conv.khz_to_rad_s(350.0);
    let grid = [ws / 1000.0, ws / 500.0, 100.0 * ws];
    let spec = sensor_response_spectrum(&grid, &p, conv);
    // low-frequency log-log slope of |R| is 2
    let slope = (spec[1].norm().ln() - spec[0].norm().ln()) / (grid[1].ln() - grid[0].ln());
    assert!((slope - 2.0).abs() < 0.01, "slope = {slope}");
    // |R|/C within 1% of 1 at 100 w_s
    assert!((spec[2].norm() / p.c_gain - 1.0).abs() < 0.01);
    // phase delay approaches pi at high frequency
    let ph = response_amplitude_phase(&[100.0 * ws], &p, conv)[0].1;
    assert!((ph - std::f64::consts::PI).abs() < 0.02, "phase = {ph}");
    // and vanishes at low frequency
    let ph0 = response_amplitude_phase(&[ws / 1000.0], &p, conv)[0].1;
    assert!(ph0.abs() < 0.01);
}

#[test]
fn response_monotone_below_resonance_when_underdamped() {
    let p = SensorResponseParams {
        omega_s_khz: 350.0,
        epsilon_khz: 100.0, // still < 350/sqrt(2)
        c_gain: 1.0,
    };
    let conv = FrequencyConvention::Cyclic;
    let ws = conv.khz_to_rad_s(350.0);
    let grid: Vec<f64> = (1..100).map(|i| ws * i as f64 / 100.0).collect();
    let spec = sensor_response_spectrum(&grid, &p, conv);
    for w in spec.windows(2) {
        assert!(w[1].norm() > w[0].norm());
    }
}

#[test]
fn response_dft_bins_hermitian_and_causal() {
    let p = SensorResponseParams {
        omega_s_khz: 350.0,
        epsilon_khz: 20.0,
        c_gain: 1.0,
    };
    let len = 4096;
    let fs = 12.5e6;
    let mut bins = vec![Complex64::new(0.0, 0.0); len];
    response_dft_bins(len, fs, &p, FrequencyConvention::Cyclic, &mut bins);
    for m in 1..len / 2 {
        let a = bins[m];
        let b = bins[len - m];
        assert_relative_eq!(a.re, b.re, max_relative = 1e-12);
        assert_relative_eq!(a.im, -b.im, max_relative = 1e-12);
    }
    // inverse transform: essentially causal (tiny band-limited precursor only)
    let pair = crate::fft::FftPair::new(len);
    let mut buf = bins.clone();
    pair.inverse(&mut buf);
    let kernel: Vec<f64> = buf.iter().map(|c| c.re / len as f64).collect();
    let head: f64 = kernel[..8].iter().map(|x| x.abs()).sum();
    let tail_max = kernel[len / 2..]
        .iter()
        .cloned()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    assert!(
        tail_max < 1e-4 * head,
        "acausal energy: tail {tail_max} vs head {head}"
    );
}

// ---- synthesis ----

fn synth_setup() -> (ExperimentGeometry, MaterialProperties, MaterialProperties) {
    let geom = ExperimentGeometry {
        source_m: [0.0; 3],
        sensors: vec![SensorMount {
            id: 1,
            position_m: [0.02305, 0.0, -0.0184],
            normal: [1.0, 0.0, 0.0],
        }],
        ball_radius_m: 3.18e-3,
        gravity_m_s2: 9.81,
    };
    (geom, titanium(), steel_ball())
}

#[test]
fn synthesis_linear_in_gain() {
    let (geom, ti, ball) = synth_setup();
    let bp = BounceParams::new(1.31, 0.61, 1).unwrap();
    let conv = FrequencyConvention::Cyclic;
    let mk = |c: f64| {
        let resp = SensorResponseParams {
            omega_s_khz: 350.0,
            epsilon_khz: 20.0,
            c_gain: c,
        };
        synthesize_record(
            &geom, &ti, &ball, &bp, &resp, 0, &[1e-4], 12.5e6, 200e-6, 40e-6, conv,
        )
        .unwrap()
    };
    let w1 = mk(1e9);
    let w2 = mk(2e9);
    let w0 = mk(0.0);
    assert!(w0.iter().all(|&x| x == 0.0));
    for (a, b) in w1.iter().zip(w2.iter()) {
        assert_relative_eq!(2.0 * a, *b, max_relative = 1e-12, epsilon = 1e-30);
    }
    let peak = w1.iter().cloned().fold(0.0f64, |m, x| m.max(x.abs()));
    assert!(peak > 0.0);
}

#[test]
fn synthesis_linear_in_peak_force() {
    // superposition: doubling v0 is not linear, but scaling the pulse force
    // is; check through two bounces of different speeds instead
    let (geom, ti, ball) = synth_setup();
    let conv = FrequencyConvention::Cyclic;
    let resp = SensorResponseParams {
        omega_s_khz: 350.0,
        epsilon_khz: 20.0,
        c_gain: 1e9,
    };
    let bp = BounceParams::new(1.31, 0.61, 3).unwrap();
    let arrivals = [1e-4, 2e-4, 3e-4];
    let rec = synthesize_record(
        &geom, &ti, &ball, &bp, &resp, 0, &arrivals, 12.5e6, 90e-6, 20e-6, conv,
    )
    .unwrap();
    let w = (90e-6f64 * 12.5e6).round() as usize;
    assert_eq!(rec.len(), 3 * w);
    // each bounce window must be nonzero and shrink with the rebound
    let e: Vec<f64> = (0..3)
        .map(|k| rec[k * w..(k + 1) * w].iter().map(|x| x * x).sum::<f64>())
        .collect();
    assert!(e[0] > e[1] && e[1] > e[2]);
}

#[test]
fn synthesis_rejects_short_window() {
    let (geom, ti, ball) = synth_setup();
    let bp = BounceParams::new(1.31, 0.61, 1).unwrap();
    let resp = SensorResponseParams {
        omega_s_khz: 350.0,
        epsilon_khz: 20.0,
        c_gain: 1.0,
    };
    let err = synthesize_record(
        &geom,
        &ti,
        &ball,
        &bp,
        &resp,
        0,
        &[50e-6],
        12.5e6,
        55e-6,
        40e-6,
        FrequencyConvention::Cyclic,
    )
    .unwrap_err();
    assert!(err.to_string().contains("window"));
}

/// Frequency-domain synthesis against the direct time-domain route: build
/// u_perp from the Green's terms, then circularly convolve with the
/// inverse-transformed response kernel by the naive O(N^2) sum.
#[test]
fn spectral_synthesis_matches_time_domain_convolution() {
    let (geom, ti, ball) = synth_setup();
    let fs = 12.5e6;
    let dt = 1.0 / fs;
    let conv = FrequencyConvention::Cyclic;
    let resp = SensorResponseParams {
        omega_s_khz: 350.0,
        epsilon_khz: 20.0,
        c_gain: 1e9,
    };
    let bp = BounceParams::new(1.31, 0.61, 1).unwrap();
    let window_s = 200e-6;
    let pre = 40e-6;
    let arrival = 1e-4;

    let spectral = synthesize_record(
        &geom,
        &ti,
        &ball,
        &bp,
        &resp,
        0,
        &[arrival],
        fs,
        window_s,
        pre,
        conv,
    )
    .unwrap();

    // time-domain route on the same circular grid
    let mut engine = SynthEngine::new(fs, window_s, synth::synth_tail_s(conv)).unwrap();
    let pad = engine.pad_len();
    let w = engine.window_len();
    let (_, r) = geom.source_to_sensor(&geom.sensors[0]);
    let tau_a = r / ti.vp_m_s;
    let start = arrival - pre;
    let t0 = (arrival - start) - tau_a; // impact time relative to window start

    // u_perp sampled on the window grid, impact at t0 (shift the greens
    // evaluation, which anchors the impact at zero, by whole+fractional
    // samples through its own pulse lattice)
    let pulse = engine.bounce_pulse(&ball, &ti, geom.ball_radius_m, 1.31).unwrap();
    let n_total = pad;
    let mut u_perp = vec![0.0; n_total];
    let nodes = near_field_nodes(tau_a, r / ti.vs_m_s, dt);
    let (gamma, _) = geom.source_to_sensor(&geom.sensors[0]);
    let xi = geom.sensors[0].normal;
    let g3 = gamma[2];
    let four_pi_rho = 4.0 * std::f64::consts::PI * ti.density_kg_m3;
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
    c_p /= four_pi_rho * ti.vp_m_s * ti.vp_m_s * r;
    c_s /= four_pi_rho * ti.vs_m_s * ti.vs_m_s * r;
    for (i, slot) in u_perp.iter_mut().enumerate() {
        let t = i as f64 * dt - t0;
        let mut nf = 0.0;
        for &(tau, wq) in &nodes {
            nf += wq * tau * pulse.value_at(t - tau);
        }
        *slot = c_near * nf + c_p * pulse.value_at(t - tau_a) + c_s * pulse.value_at(t - r / ti.vs_m_s);
    }

    // inverse-transformed response kernel
    let mut bins = Vec::new();
    engine.response_bins(&resp, conv, &mut bins);
    let pair = crate::fft::FftPair::new(pad);
    let mut kbuf = bins.clone();
    pair.inverse(&mut kbuf);
    let kernel: Vec<f64> = kbuf.iter().map(|c| c.re / pad as f64).collect();

    // naive circular convolution
    let mut naive = vec![0.0; w];
    for (i, slot) in naive.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (j, &k) in kernel.iter().enumerate() {
            let idx = (i + pad - j) % pad;
            acc += k * u_perp[idx];
        }
        *slot = acc;
    }

    let num: f64 = spectral
        .iter()
        .zip(naive.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let den: f64 = naive.iter().map(|x| x * x).sum();
    let rel = (num / den).sqrt();
    assert!(rel < 1e-8, "relative L2 = {rel:.3e}");
}
