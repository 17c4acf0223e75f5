use wirenoise::edge_model::{autocorrelation, EdgeRoughness};
use wirenoise::profile_synth::{
    combine_edges, estimate_statistics, fit_hurst, synthesize, synthesize_ensemble, EdgeProfile,
};

fn rough(alpha: f64) -> EdgeRoughness {
    EdgeRoughness::new(3e-9, 20e-9, alpha).unwrap()
}

#[test]
fn same_seed_same_profile_different_seed_different_profile() {
    let a = synthesize(&rough(0.5), 2048, 1e-9, 7).unwrap();
    let b = synthesize(&rough(0.5), 2048, 1e-9, 7).unwrap();
    let c = synthesize(&rough(0.5), 2048, 1e-9, 8).unwrap();
    assert_eq!(a.values, b.values);
    assert_ne!(a.values, c.values);
}

#[test]
fn csv_round_trip_through_a_file() {
    let p = synthesize(&rough(0.75), 512, 2e-9, 3).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("edge.csv");
    p.write_csv(&path).unwrap();
    let q = EdgeProfile::read_csv(&path).unwrap();
    assert_eq!(q.seed, Some(3));
    assert_eq!(q.len(), p.len());
    for (x, y) in p.values.iter().zip(&q.values) {
        assert!((x - y).abs() <= 1e-15 * x.abs().max(1e-20));
    }
}

#[test]
fn invalid_sizes_are_rejected() {
    assert!(synthesize(&rough(0.5), 1000, 1e-9, 1).is_err());
    assert!(synthesize(&rough(0.5), 128, 1e-9, 1).is_err());
    assert!(synthesize(&rough(0.5), 256, 1e-10, 1).is_err());
}

#[test]
fn fitted_exponent_follows_target() {
    let fit = |alpha: f64| {
        let ps = synthesize_ensemble(&rough(alpha), 8192, 1e-9, 100, 30).unwrap();
        ps.iter()
            .map(|p| fit_hurst(p).unwrap().alpha_hat)
            .sum::<f64>()
            / ps.len() as f64
    };
    let (low, mid, high) = (fit(0.25), fit(0.5), fit(1.0));
    assert!(low < mid && mid < high, "{low} {mid} {high}");
    assert!((high - 1.0).abs() < 0.05);
}

#[test]
fn height_correlation_saturates() {
    let ps = synthesize_ensemble(&rough(0.5), 8192, 1e-9, 1, 20).unwrap();
    let mut tail = 0.0;
    for p in &ps {
        let s = estimate_statistics(p, 2000e-9).unwrap();
        tail += s.g_hat.last().unwrap() / (std::f64::consts::SQRT_2 * s.sigma_hat);
    }
    tail /= ps.len() as f64;
    assert!((tail - 1.0).abs() < 0.05, "{tail}");
}

#[test]
fn ensemble_autocorrelation_follows_model() {
    let r = rough(0.75);
    let ps = synthesize_ensemble(&r, 4096, 1e-9, 500, 60).unwrap();
    let max_lag = 60e-9;
    let mut mean = vec![0.0; 61];
    for p in &ps {
        let s = estimate_statistics(p, max_lag).unwrap();
        for (m, c) in mean.iter_mut().zip(&s.c_hat) {
            *m += c / ps.len() as f64;
        }
    }
    let var = r.sigma * r.sigma;
    for (k, m) in mean.iter().enumerate() {
        let exact = autocorrelation(&r, k as f64 * 1e-9);
        assert!((m - exact).abs() < 0.05 * var, "lag {k}: {m} vs {exact}");
    }
}

#[test]
fn averaging_two_independent_edges_halves_variance() {
    let r = rough(0.5);
    let mut ratio = 0.0;
    let count = 40;
    for i in 0..count {
        let left = synthesize(&r, 4096, 1e-9, 2 * i).unwrap();
        let right = synthesize(&r, 4096, 1e-9, 2 * i + 1).unwrap();
        let centre = combine_edges(&left, &right).unwrap();
        ratio += centre.rms().powi(2) / (0.5 * (left.rms().powi(2) + right.rms().powi(2)));
    }
    ratio /= count as f64;
    assert!((ratio - 0.5).abs() < 0.05, "{ratio}");
}
