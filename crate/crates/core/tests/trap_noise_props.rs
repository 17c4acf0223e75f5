mod common;

use wirenoise::edge_model::EdgeRoughness;
use wirenoise::transfer::WireGeometry;
use wirenoise::trap_noise::{
    field_variance, log_grid, smallxi_constant, stilde, stilde_curve, vtilde, Ratios, TrapContext,
};
use wirenoise::units::MU_B;

fn ctx(d: f64, d_over_y0: f64, d_over_xi: f64, alpha: f64, sigma: f64) -> TrapContext {
    let rough = EdgeRoughness::new(sigma, d / d_over_xi, alpha).unwrap();
    let geom = WireGeometry::new(d / d_over_y0, d / 20.0, d, 0.2).unwrap();
    TrapContext::new(rough, geom, MU_B).unwrap()
}

fn ratios(d_over_y0: f64, d_over_xi: f64, alpha: f64) -> Ratios {
    Ratios {
        d_over_y0,
        d_over_xi,
        alpha,
    }
}

#[test]
fn vtilde_matches_brute_force() {
    for (r, dx, a) in [
        (1.0, 1.0, 1.0),
        (2.0, 0.1, 0.5),
        (0.6, 10.0, 0.25),
        (10.0, 3.0, 0.75),
    ] {
        let lib = vtilde(ratios(r, dx, a)).unwrap();
        let brute = common::vtilde_integral(r, dx, a);
        assert!(
            (lib / brute - 1.0).abs() < 1e-6,
            "({r},{dx},{a}): {lib} vs {brute}"
        );
    }
}

#[test]
fn variance_invariant_under_joint_rescaling() {
    let base = ctx(5e-6, 1.3, 2.0, 0.6, 4e-9);
    let v = field_variance(&base).unwrap();
    let scaled = TrapContext::new(base.rough.scaled(10.0), base.geom.scaled(10.0), MU_B).unwrap();
    let w = field_variance(&scaled).unwrap();
    // σ/d and B₀·d are unchanged only up to B₀ ∝ 1/d: V ∝ σ²/d⁴ → factor 10²/10⁴.
    assert!((w / v / 1e-2 - 1.0).abs() < 1e-9);
}

#[test]
fn inverse_fourth_power_at_fixed_ratios() {
    let near = field_variance(&ctx(3e-6, 2.0, 5.0, 0.5, 3e-9)).unwrap();
    let far = field_variance(&ctx(6e-6, 2.0, 5.0, 0.5, 3e-9)).unwrap();
    assert!((far / near * 16.0 - 1.0).abs() < 1e-9);
}

#[test]
fn smaller_hurst_exponent_moves_peak_up() {
    let qd = log_grid(1e-3, 10.0, 400);
    let peak = |alpha: f64| {
        let c = stilde_curve(&ctx(1.0, 2.0, 1.0 / 33.0, alpha, 1e-3), &qd).unwrap();
        c.x[c.argmax().unwrap()]
    };
    assert!(peak(0.25) > peak(1.0));
    let peak10 = |alpha: f64| {
        let c = stilde_curve(&ctx(1.0, 2.0, 0.1, alpha, 1e-3), &qd).unwrap();
        c.x[c.argmax().unwrap()]
    };
    assert!(peak10(0.25) > peak10(1.0));
}

#[test]
fn smaller_hurst_exponent_suppresses_low_frequencies_at_long_correlation() {
    let c1 = ctx(1.0, 2.0, 1.0 / 33.0, 1.0, 1e-3);
    let c4 = ctx(1.0, 2.0, 1.0 / 33.0, 0.25, 1e-3);
    for qd in [0.005, 0.01] {
        assert!(stilde(qd, &c4).unwrap() < stilde(qd, &c1).unwrap());
    }
}

#[test]
fn variance_peaks_where_height_meets_correlation_length() {
    for alpha in [1.0, 0.25] {
        let v = |dx: f64| vtilde(ratios(1.0, dx, alpha)).unwrap();
        let mid = v(1.0);
        assert!(mid > v(0.01) && mid > v(20.0));
    }
}

#[test]
fn small_correlation_length_approaches_linear_law() {
    let c = smallxi_constant(1.0).unwrap();
    for alpha in [1.0, 0.5, 0.25] {
        let v = vtilde(ratios(1.0, 1000.0, alpha)).unwrap();
        assert!((v * 1000.0 / c - 1.0).abs() < 0.01);
    }
}

#[test]
fn upper_cutoff_does_not_matter() {
    // ∫ S̃ ξ dq with a cutoff at qd = 25 instead of the library's wider range.
    let r = ratios(1.0, 2.0, 0.5);
    let lib = vtilde(r).unwrap();
    let c = ctx(1.0, 1.0, 2.0, 0.5, 1e-3);
    let breaks: Vec<f64> = (0..=80)
        .map(|i| 1e-6 * 2.5e7f64.powf(i as f64 / 80.0))
        .collect();
    let short = 0.5 * common::gl_breaks(|qd| stilde(qd, &c).unwrap(), &breaks, 10);
    assert!((short / lib - 1.0).abs() < 1e-9, "{short} vs {lib}");
}

#[test]
fn variance_drops_with_height_more_slowly_close_to_wide_wire() {
    let v = |r: f64| vtilde(ratios(r, 1.0, 1.0)).unwrap();
    assert!(v(0.6) < v(1.0) && v(1.0) < v(10.0));
}
