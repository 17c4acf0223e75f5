mod common;

use wirenoise::transfer::{
    ftilde, ftilde_lowq, ftilde_series_with, SeriesOptions, Summation, WireGeometry,
};

fn geom(r: f64) -> WireGeometry {
    WireGeometry::from_ratio(r).unwrap()
}

fn qd_grid() -> Vec<f64> {
    (0..=40)
        .map(|i| 1e-3 * 2e4f64.powf(i as f64 / 40.0))
        .collect()
}

#[test]
fn series_matches_integral_form() {
    for r in [0.55, 0.6, 1.0, 2.0, 10.0, 100.0] {
        let g = geom(r);
        for qd in qd_grid() {
            let s = ftilde(qd, &g).unwrap();
            let o = common::ftilde_integral(qd, r);
            let err = (s - o).abs();
            assert!(
                err <= 1e-9 * o.abs() + 1e-13,
                "d/y0={r} qd={qd}: series {s:e}, integral {o:e}"
            );
        }
    }
}

#[test]
fn plain_and_accelerated_sums_agree() {
    for r in [0.6, 2.0, 10.0] {
        let g = geom(r);
        for qd in [0.1, 1.0, 5.0] {
            let plain = SeriesOptions {
                tol: 1e-12,
                max_terms: 400,
                summation: Summation::Plain,
            };
            let fast = SeriesOptions {
                summation: Summation::Accelerated,
                ..plain
            };
            let a = ftilde_series_with(qd, &g, plain).unwrap();
            let b = ftilde_series_with(qd, &g, fast).unwrap();
            assert!((a.value / b.value - 1.0).abs() < 1e-10);
            assert!(b.terms <= a.terms);
        }
    }
}

#[test]
fn terms_fall_as_the_wire_narrows() {
    let most = |r: f64| {
        let g = geom(r);
        qd_grid()
            .into_iter()
            .filter(|&qd| (0.1..=10.0).contains(&qd))
            .map(|qd| {
                wirenoise::transfer::ftilde_series(qd, &g, 1e-10, 200)
                    .unwrap()
                    .terms
            })
            .max()
            .unwrap()
    };
    let (a, b, c) = (most(0.6), most(2.0), most(10.0));
    assert!(a <= 50);
    assert!(b < a && c < b, "{a} {b} {c}");
}

#[test]
fn peak_lies_near_qd_of_one() {
    for r in [0.6, 2.0, 10.0] {
        let g = geom(r);
        let grid: Vec<f64> = (1..=400).map(|i| i as f64 * 0.01).collect();
        let best = grid
            .iter()
            .copied()
            .max_by(|a, b| {
                let fa = ftilde(*a, &g).unwrap();
                let fb = ftilde(*b, &g).unwrap();
                fa.total_cmp(&fb)
            })
            .unwrap();
        assert!((0.5..=2.5).contains(&best), "d/y0={r}: peak at {best}");
    }
}

#[test]
fn wider_wire_suppresses_transfer() {
    for qd in [0.05, 0.5, 1.0, 3.0] {
        let narrow = ftilde(qd, &geom(10.0)).unwrap();
        let mid = ftilde(qd, &geom(2.0)).unwrap();
        let wide = ftilde(qd, &geom(0.6)).unwrap();
        assert!(narrow > mid && mid > wide, "qd={qd}");
    }
}

#[test]
fn insensitive_to_width_when_narrow() {
    for qd in [0.1, 1.0, 3.0] {
        let a = ftilde(qd, &geom(50.0)).unwrap();
        let b = ftilde(qd, &geom(200.0)).unwrap();
        assert!((a / b - 1.0).abs() < 1e-3);
    }
}

#[test]
fn low_frequency_is_linear_in_q() {
    for r in [0.6, 2.0, 10.0] {
        let g = geom(r);
        let f1 = ftilde(1e-4, &g).unwrap();
        let f2 = ftilde(2e-4, &g).unwrap();
        assert!((f2 / f1 - 2.0).abs() < 1e-6);
        assert!((f1 / ftilde_lowq(1e-4, &g) - 1.0).abs() < 1e-6);
    }
}

#[test]
fn wide_wire_below_half_height_is_rejected() {
    assert!(ftilde(1.0, &geom(0.4)).is_err());
}
