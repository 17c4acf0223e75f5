//! Reference computations for the integration tests. Nothing here calls the
//! library's special functions or quadrature, so agreement is meaningful.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Composite Gauss–Legendre over `panels` equal pieces of `[a, b]`.
pub fn gl_integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (xi, wi) in x.iter().zip(&w) {
            sum += wi * f(lo + 0.5 * h * (xi + 1.0));
        }
    }
    0.5 * h * sum
}

/// Composite Gauss–Legendre over the consecutive intervals of `breaks`.
pub fn gl_breaks(f: impl Fn(f64) -> f64, breaks: &[f64], order: usize) -> f64 {
    breaks
        .windows(2)
        .map(|w| gl_integrate(&f, w[0], w[1], 1, order))
        .sum()
}

/// `e^x K_ν(x)` from `∫₀^∞ e^{−x(cosh t − 1)} cosh(νt) dt` by the trapezoid
/// rule, which converges geometrically for this integrand.
pub fn bessel_k_scaled(nu: f64, x: f64) -> f64 {
    assert!(x > 0.0);
    let h = 0.02;
    let mut sum = 0.5;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let term = (-x * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        k += 1;
    }
    h * sum
}

pub fn bessel_k(nu: f64, x: f64) -> f64 {
    bessel_k_scaled(nu, x) * (-x).exp()
}

/// Transfer function from its integral form
/// `f̃ = z³/(x cosh x) ∫₀^x cosh t K₁(√(z²+t²))/√(z²+t²) dt`, with `z = qd`
/// and `x = q y₀/2`, evaluated with exponentials scaled out.
pub fn ftilde_integral(qd: f64, d_over_y0: f64) -> f64 {
    let z = qd;
    let x = qd / (2.0 * d_over_y0);
    let body = |t: f64| {
        let r = (z * z + t * t).sqrt();
        // cosh t · K₁(r) / cosh x, with e^{−r} and e^{−x} pulled out.
        let ratio = ((t - x).exp() + (-t - x).exp()) / (1.0 + (-2.0 * x).exp());
        ratio * bessel_k_scaled(1.0, r) * (z - r).exp() / r
    };
    let panels = 8 + (x * 4.0).ceil() as usize;
    let integral = gl_integrate(body, 0.0, x, panels, 20);
    z * z * z / x * integral * (-z).exp()
}

/// Narrow-wire transfer function `(qd)² K₁(qd)`.
pub fn ftilde_narrow(qd: f64) -> f64 {
    qd * qd * bessel_k(1.0, qd)
}

/// Gamma function through the Lanczos approximation (g = 7, n = 9).
pub fn gamma(x: f64) -> f64 {
    const G: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = G[0];
    let t = x + 7.5;
    for (i, g) in G.iter().enumerate().skip(1) {
        a += g / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Model spectrum `P̃(α, s)` written out from its definition.
pub fn ptilde(alpha: f64, s: f64) -> f64 {
    let a = (gamma(alpha) / gamma(0.5 + alpha)).powi(2) / PI;
    2.0 / PI * (1.0 + a * s * s).powf(-(0.5 + alpha))
}

/// `∫₀^∞ P̃(α, s) ds`: `[0, 1]` directly, and the tail with `s = v^{−1/α}`,
/// which turns the `s^{−1−2α}` decay into a smooth integrand on `(0, 1]`.
pub fn ptilde_total(alpha: f64) -> f64 {
    let head = gl_integrate(|s| ptilde(alpha, s), 0.0, 1.0, 16, 20);
    let m = 1.0 / alpha;
    let tail = gl_integrate(
        |v: f64| ptilde(alpha, v.powf(-m)) * m * v.powf(-m - 1.0),
        0.0,
        1.0,
        64,
        20,
    );
    head + tail
}

/// CODATA 2018 values used by the design cross-checks.
pub mod codata {
    pub const MU0: f64 = 1.256_637_062_12e-6;
    pub const HBAR: f64 = 1.054_571_817e-34;
    pub const MU_B: f64 = 9.274_010_078_3e-24;
    pub const K_B: f64 = 1.380_649e-23;
    pub const M_RB87: f64 = 86.909_180_520 * 1.660_539_066_60e-27;
}

/// `Ṽ` by brute force: `(ξ/d) ∫ P̃(α, sξ/d) f̃²(s) ds` on `[1e-4, 30]` with
/// the integral-form `f̃`.
pub fn vtilde_integral(d_over_y0: f64, d_over_xi: f64, alpha: f64) -> f64 {
    let r = 1.0 / d_over_xi;
    let mut breaks: Vec<f64> = (0..=60)
        .map(|i| 1e-4 * (3e5f64).powf(i as f64 / 60.0))
        .collect();
    breaks.push(d_over_xi.clamp(1e-4, 30.0));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    r * gl_breaks(
        |s| {
            let f = ftilde_integral(s, d_over_y0);
            ptilde(alpha, s * r) * f * f
        },
        &breaks,
        10,
    )
}
