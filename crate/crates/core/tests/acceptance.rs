//! Acceptance suite. Each test prints one `PASS`/`FAIL` line and then asserts
//! the same condition, so `cargo test --test acceptance -- --nocapture`
//! doubles as a report.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use wirenoise::design::{design_limits, AtomSpecies, DesignInput};
use wirenoise::edge_model::{autocorrelation, model_spectrum, norm_constant, EdgeRoughness};
use wirenoise::oracle_biot_savart::{rough_filament_check, RoughFilamentSetup, SinusoidSetup};
use wirenoise::profile_synth::{estimate_statistics, fit_hurst, synthesize_ensemble};
use wirenoise::transfer::{
    ftilde, ftilde2_highq, ftilde_lowq, ftilde_series, WireGeometry, DEFAULT_MAX_TERMS,
};
use wirenoise::trap_noise::{
    field_variance, smallxi_constant, stilde, vtilde, Ratios, TrapContext,
};

fn verdict(criterion: &str, passed: bool, detail: String) {
    println!(
        "{} criterion {criterion}: {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    assert!(passed, "criterion {criterion}: {detail}");
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

#[test]
fn criterion_01_smallxi_constant() {
    let start = Instant::now();
    let c = smallxi_constant(1.0).unwrap();
    let elapsed = start.elapsed();
    let passed = (c - 0.274).abs() <= 0.003 && elapsed < Duration::from_secs(5);
    verdict(
        "1",
        passed,
        format!("c(d = y0) = {c:.6} in {elapsed:.2?} (target 0.274 +- 0.003, < 5 s)"),
    );
}

#[test]
fn criterion_02_worked_design_example() {
    let input = DesignInput {
        rough: EdgeRoughness::new(3e-9, 20e-9, 0.5).unwrap(),
        x0: 1e-6,
        kappa: 3e7,
        v_max: 1e-7f64.powi(2),
        bias_z: 0.5e-4,
        atom: AtomSpecies::rb87(),
    };
    let r = design_limits(&input, smallxi_constant(1.0).unwrap()).unwrap();
    let checks = [
        ("d_min [um]", r.d_min * 1e6, 5.3, 6.3),
        ("I_max [A]", r.i_max, 0.16, 0.19),
        ("B'_max [T/cm]", r.b_grad_max * 1e-2, 10.0, 12.0),
        ("f_max [kHz]", r.f_max * 1e-3, 180.0, 210.0),
        ("ground state [nm]", r.ground_state_size * 1e9, 16.0, 18.5),
        ("T [nK]", r.roughness_temperature * 1e9, 64.0, 70.0),
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, value, lo, hi) in checks {
        passed &= (lo..=hi).contains(&value);
        parts.push(format!("{name} = {value:.4} in [{lo}, {hi}]"));
    }
    verdict("2", passed, parts.join(", "));
}

#[test]
fn criterion_03_spectrum_normalisation() {
    let start = Instant::now();
    let xi = 20e-9;
    let mut worst: f64 = 0.0;
    for alpha in [0.3, 0.5, 0.75, 1.0] {
        let rough = EdgeRoughness::new(3e-9, xi, alpha).unwrap();
        let p = |q: f64| model_spectrum(&rough, q).unwrap();
        // [0, 1/ξ] directly, the tail with q = v^{−1/α}/ξ.
        let head = common::gl_integrate(p, 0.0, 1.0 / xi, 16, 20);
        let m = 1.0 / alpha;
        let tail = common::gl_integrate(
            |v: f64| p(v.powf(-m) / xi) * m * v.powf(-m - 1.0) / xi,
            0.0,
            1.0,
            64,
            20,
        );
        worst = worst.max(rel(head + tail, rough.sigma * rough.sigma));
    }
    let elapsed = start.elapsed();
    let passed = worst <= 1e-6 && elapsed < Duration::from_secs(1);
    verdict(
        "3",
        passed,
        format!("max relative error {worst:.2e} in {elapsed:.2?} (gate 1e-6, < 1 s)"),
    );
}

#[test]
fn criterion_04_lorentzian_case() {
    let a = norm_constant(0.5).unwrap();
    let rough = EdgeRoughness::new(3e-9, 20e-9, 0.5).unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..=2000 {
        let s = 100.0 * i as f64 / 2000.0;
        let q = s / rough.xi;
        let lorentz = 2.0 / PI * rough.sigma * rough.sigma * rough.xi / (1.0 + s * s);
        worst = worst.max(rel(model_spectrum(&rough, q).unwrap(), lorentz));
    }
    let a_err = (a - 1.0).abs();
    verdict(
        "4",
        a_err <= 1e-12 && worst <= 1e-12,
        format!("|a(1/2) - 1| = {a_err:.2e}, max pointwise deviation {worst:.2e} (gate 1e-12)"),
    );
}

#[test]
fn criterion_05_series_term_counts() {
    let grid = log_grid(0.1, 10.0, 81);
    let max_terms = |ratio: f64| {
        let g = WireGeometry::from_ratio(ratio).unwrap();
        grid.iter()
            .map(|&qd| {
                ftilde_series(qd / g.d, &g, 1e-10, DEFAULT_MAX_TERMS)
                    .unwrap()
                    .terms
            })
            .max()
            .unwrap()
    };
    let (n06, n2, n10) = (max_terms(0.6), max_terms(2.0), max_terms(10.0));
    let passed = n06 <= 50 && n2 < n06 && n10 < n06;
    verdict(
        "5",
        passed,
        format!(
            "max terms at d/y0 = 0.6, 2, 10: {n06}, {n2}, {n10} (need <= 50 and strictly fewer)"
        ),
    );
}

#[test]
fn criterion_06a_lowq_asymptote() {
    let mut worst: f64 = 0.0;
    for ratio in [0.6, 2.0, 10.0] {
        let g = WireGeometry::from_ratio(ratio).unwrap();
        for qd in log_grid(1e-4, 1e-2, 21) {
            let q = qd / g.d;
            worst = worst.max(rel(ftilde(q, &g).unwrap(), ftilde_lowq(q, &g)));
        }
    }
    verdict(
        "6a",
        worst <= 0.01,
        format!("max deviation from low-q form for qd <= 0.01: {worst:.2e} (gate 1 %)"),
    );
}

#[test]
fn criterion_06b_highq_asymptote() {
    let g = WireGeometry::from_ratio(2.0).unwrap();
    let q = 12.0 / g.d;
    let f = ftilde(q, &g).unwrap();
    let dev = rel(f * f, ftilde2_highq(q, &g));
    verdict(
        "6b",
        dev <= 0.05,
        format!("f^2 vs high-q form at qd = 12, d = 2 y0: deviation {dev:.3} (gate 5 %)"),
    );
}

#[test]
fn criterion_07_narrow_wire_limit() {
    let g = WireGeometry::from_ratio(100.0).unwrap();
    let mut worst: f64 = 0.0;
    for qd in log_grid(0.1, 5.0, 41) {
        let f = ftilde(qd / g.d, &g).unwrap();
        worst = worst.max(rel(f, common::ftilde_narrow(qd)));
    }
    verdict(
        "7",
        worst <= 0.005,
        format!("max deviation from (qd)^2 K1(qd) at d = 100 y0: {worst:.2e} (gate 0.5 %)"),
    );
}

#[test]
fn criterion_08_biot_savart_oracle() {
    let start = Instant::now();
    let setup = SinusoidSetup::default();
    let mut sine_worst: f64 = 0.0;
    for q0d in [0.5, 1.0, 2.0] {
        let q0 = q0d / setup.d;
        let eps = setup.relative_amplitude * setup.d;
        let (z, b) = setup.sample(q0, eps, 0.0, setup.d).unwrap();
        let (amp, _) = wirenoise::oracle_biot_savart::harmonic_fit(&z, &b, q0);
        let b0 = common::codata::MU0 * setup.current / (2.0 * PI * setup.d);
        sine_worst = sine_worst.max(rel(amp, b0 / setup.d * eps * common::ftilde_narrow(q0d)));
    }
    let report = rough_filament_check(&RoughFilamentSetup::default()).unwrap();
    let elapsed = start.elapsed();
    let passed = sine_worst <= 0.01
        && report.max_deviation <= 0.10
        && report.setup.seeds >= 50
        && elapsed < Duration::from_secs(300);
    verdict(
        "8",
        passed,
        format!(
            "sinusoid max error {sine_worst:.2e} (gate 1 %), ensemble PSD max deviation {:.3} over {} bands from {} seeds (gate 10 %), {elapsed:.1?}",
            report.max_deviation,
            report.qd.len(),
            report.setup.seeds
        ),
    );
}

#[test]
fn criterion_09_figure_shapes() {
    // (a) f̃² peaks near qd = 1.
    let grid = log_grid(0.01, 20.0, 401);
    let mut peaks = Vec::new();
    for ratio in [0.6, 2.0, 10.0] {
        let g = WireGeometry::from_ratio(ratio).unwrap();
        let best = grid
            .iter()
            .map(|&qd| (qd, ftilde(qd / g.d, &g).unwrap()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        peaks.push(best.0);
    }
    let a_ok = peaks.iter().all(|p| (0.5..=2.5).contains(p));

    // (b) rougher edges push the noise peak to higher qd at ξ = 33 d.
    let geom = WireGeometry::new(1.0, 1e-3, 2.0, 1.0).unwrap();
    let argmax = |alpha: f64| {
        let rough = EdgeRoughness::new(1e-3, 33.0 * geom.d, alpha).unwrap();
        let ctx = TrapContext::new(rough, geom, 1.0).unwrap();
        grid.iter()
            .map(|&qd| (qd, stilde(qd / geom.d, &ctx).unwrap()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap()
            .0
    };
    let (peak_smooth, peak_rough) = (argmax(1.0), argmax(0.25));
    let b_ok = peak_rough > peak_smooth;

    // (c) the variance is largest when d ≃ ξ.
    let v = |d_over_xi: f64, alpha: f64| {
        vtilde(Ratios {
            d_over_y0: 1.0,
            d_over_xi,
            alpha,
        })
        .unwrap()
    };
    let (v_small, v_one, v_large) = (v(0.01, 1.0), v(1.0, 1.0), v(20.0, 1.0));
    let c_ok = v_one > v_small && v_one > v_large;

    // (d) short correlation lengths make the exponent irrelevant.
    let spread = rel(v(100.0, 0.25), v(100.0, 1.0));
    let d_ok = spread < 0.02;

    verdict(
        "9",
        a_ok && b_ok && c_ok && d_ok,
        format!(
            "(a) f^2 peaks at qd = {:.3}, {:.3}, {:.3}; (b) S peak qd {peak_smooth:.3} -> {peak_rough:.3}; \
             (c) V(0.01, 1, 20) = {v_small:.3e}, {v_one:.3e}, {v_large:.3e}; (d) alpha spread {spread:.2e}",
            peaks[0], peaks[1], peaks[2]
        ),
    );
}

#[test]
fn criterion_10_synthesis_statistics() {
    let start = Instant::now();
    let rough = EdgeRoughness::new(3e-9, 20e-9, 0.5).unwrap();
    let dz = 1e-9;
    let profiles = synthesize_ensemble(&rough, 8192, dz, 1, 100).unwrap();
    let max_lag = 3.0 * rough.xi;
    let mut sigma_mean = 0.0;
    let mut alpha_mean = 0.0;
    let mut c_mean = vec![0.0; (max_lag / dz).round() as usize + 1];
    for p in &profiles {
        let stats = estimate_statistics(p, max_lag).unwrap();
        sigma_mean += stats.sigma_hat / profiles.len() as f64;
        alpha_mean += fit_hurst(p).unwrap().alpha_hat / profiles.len() as f64;
        for (m, c) in c_mean.iter_mut().zip(&stats.c_hat) {
            *m += c / profiles.len() as f64;
        }
    }
    let var = rough.sigma * rough.sigma;
    let c_worst = c_mean
        .iter()
        .enumerate()
        .map(|(k, c)| (c - autocorrelation(&rough, k as f64 * dz)).abs() / var)
        .fold(0.0, f64::max);
    let sigma_err = rel(sigma_mean, rough.sigma);
    let elapsed = start.elapsed();
    let passed = sigma_err <= 0.05
        && (0.45..=0.55).contains(&alpha_mean)
        && c_worst <= 0.05
        && elapsed < Duration::from_secs(120);
    verdict(
        "10",
        passed,
        format!(
            "sigma error {sigma_err:.3}, mean alpha {alpha_mean:.3}, max |C - model|/sigma^2 for r <= 3 xi {c_worst:.3}, {elapsed:.2?}"
        ),
    );
}

#[test]
fn criterion_11_scale_invariance() {
    let rough = EdgeRoughness::new(3e-9, 20e-9, 0.75).unwrap();
    let geom = WireGeometry::new(1e-6, 1e-6, 1e-6, 0.1).unwrap();
    let ctx = TrapContext::new(rough, geom, 1.0).unwrap();
    let v_base = vtilde(ctx.ratios()).unwrap();
    let scaled = TrapContext::new(rough.scaled(10.0), geom.scaled(10.0), 1.0).unwrap();
    let by_ratio = rel(vtilde(scaled.ratios()).unwrap(), v_base);
    // ξ ∫ S̃ dq in physical wavenumbers, on a grid that scales with d.
    let physical = |c: &TrapContext| {
        let breaks: Vec<f64> = log_grid(1e-4, 40.0, 61)
            .iter()
            .map(|s| s / c.geom.d)
            .collect();
        c.rough.xi * common::gl_breaks(|q| stilde(q, c).unwrap(), &breaks, 10)
    };
    let by_wavenumber = rel(physical(&scaled), physical(&ctx));
    let invariance = by_ratio.max(by_wavenumber);

    // Doubling d, y₀ and ξ at fixed σ and current keeps the ratios, so V ∝ (σ/d)² B₀² ∝ d⁻⁴.
    let wider = EdgeRoughness::new(rough.sigma, 2.0 * rough.xi, rough.alpha).unwrap();
    let doubled = TrapContext::new(wider, geom.scaled(2.0), 1.0).unwrap();
    let law = rel(
        field_variance(&doubled).unwrap() / field_variance(&ctx).unwrap(),
        1.0 / 16.0,
    );
    verdict(
        "11",
        invariance <= 1e-9 && law <= 1e-9,
        format!("rescaled V~ deviation {invariance:.2e}, V(2d)/V(d) vs 1/16 deviation {law:.2e} (gate 1e-9)"),
    );
}
