//! Self-check suites run by `wirenoise validate`. Each gate compares a
//! computed number with a threshold and records whether it passed.

use std::f64::consts::{FRAC_2_PI, PI};
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::edge_model::{norm_constant, ptilde_with, validity_report, DEFAULT_VALIDITY_GATE};
use crate::error::{invalid, Error, Result};
use crate::oracle_biot_savart::{
    harmonic_fit, rough_filament_check, RoughFilamentSetup, SinusoidSetup,
};
use crate::quad::{integrate, log_breaks, QuadOptions};
use crate::specfun::{bessel_k, gamma, lower_incomplete_gamma};
use crate::transfer::{
    ftilde, ftilde2_highq, ftilde_lowq, ftilde_narrow, ftilde_series, WireGeometry,
};
use crate::trap_noise::{smallxi_constant, vtilde, Ratios, REFERENCE_SMALLXI_CONSTANT};

/// A group of related gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    Specfun,
    Spectrum,
    Transfer,
    Variance,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Specfun,
        Suite::Spectrum,
        Suite::Transfer,
        Suite::Variance,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Spectrum => "spectrum",
            Suite::Transfer => "transfer",
            Suite::Variance => "variance",
            Suite::Oracle => "oracle",
        }
    }

    /// Parses a suite name; `all` gives every suite.
    pub fn parse_selection(text: &str) -> Result<Vec<Suite>> {
        if text == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::ALL
            .into_iter()
            .find(|s| s.name() == text)
            .map(|s| vec![s])
            .ok_or_else(|| invalid("suite", format!("unknown suite `{text}`")))
    }
}

/// How a gate compares its value with the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    AtMost,
    AtLeast,
}

/// Result of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub suite: String,
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub comparison: Comparison,
    pub passed: bool,
    pub detail: String,
}

impl Gate {
    fn at_most(suite: Suite, name: &str, value: f64, threshold: f64, detail: String) -> Self {
        Self {
            suite: suite.name().into(),
            name: name.into(),
            value,
            threshold,
            comparison: Comparison::AtMost,
            passed: value <= threshold,
            detail,
        }
    }

    fn at_least(suite: Suite, name: &str, value: f64, threshold: f64, detail: String) -> Self {
        Self {
            suite: suite.name().into(),
            name: name.into(),
            value,
            threshold,
            comparison: Comparison::AtLeast,
            passed: value >= threshold,
            detail,
        }
    }

    fn errored(suite: Suite, name: &str, e: &Error) -> Self {
        Self {
            suite: suite.name().into(),
            name: name.into(),
            value: f64::NAN,
            threshold: f64::NAN,
            comparison: Comparison::AtMost,
            passed: false,
            detail: format!("error: {e}"),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.comparison {
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        };
        write!(
            f,
            "{} {:<9} {:<40} {:>12.4e} {op} {:<10.3e} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.value,
            self.threshold,
            self.detail
        )
    }
}

/// Outcome of one or more suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub suites: Vec<String>,
    pub gates: Vec<Gate>,
    pub passed: bool,
    pub elapsed_seconds: f64,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        let failed = self.gates.iter().filter(|g| !g.passed).count();
        write!(
            f,
            "{} of {} gates passed in {:.1} s",
            self.gates.len() - failed,
            self.gates.len(),
            self.elapsed_seconds
        )
    }
}

/// Runs the given suites in order.
pub fn run(suites: &[Suite]) -> ValidationReport {
    let start = Instant::now();
    let mut gates = Vec::new();
    for &s in suites {
        gates.extend(run_suite(s));
    }
    ValidationReport {
        suites: suites.iter().map(|s| s.name().to_string()).collect(),
        passed: gates.iter().all(|g| g.passed),
        gates,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    }
}

type Check = fn() -> Result<Gate>;

fn run_suite(suite: Suite) -> Vec<Gate> {
    let checks: &[(&str, Check)] = match suite {
        Suite::Specfun => &[
            ("bessel_reference_values", specfun_bessel),
            ("gamma_reference_values", specfun_gamma),
            ("incomplete_gamma_closed_form", specfun_incomplete),
        ],
        Suite::Spectrum => &[
            ("normalisation", spectrum_normalisation),
            ("lorentzian_constant", spectrum_lorentzian),
            ("validity_alpha_0.5", spectrum_validity),
        ],
        Suite::Transfer => &[
            ("series_terms_d_0.6y0", transfer_terms),
            ("low_q_asymptote", transfer_lowq),
            ("high_q_asymptote_d_2y0", transfer_highq),
            ("narrow_wire_limit", transfer_narrow),
        ],
        Suite::Variance => &[
            ("smallxi_constant", variance_constant),
            ("scale_invariance", variance_scale),
            ("peak_near_d_equals_xi", variance_peak),
            ("hurst_insensitivity_small_xi", variance_hurst),
        ],
        Suite::Oracle => &[
            ("sinusoid_amplitude", oracle_sinusoid),
            ("linearity", oracle_linearity),
            ("height_decay", oracle_decay),
            ("rough_filament_spectrum", oracle_rough),
        ],
    };
    checks
        .iter()
        .map(|(name, check)| check().unwrap_or_else(|e| Gate::errored(suite, name, &e)))
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn specfun_bessel() -> Result<Gate> {
    // (n, x, K_n(x)) reference triples.
    let table = [
        (0, 0.1, 2.427_069_024_702_017),
        (0, 1.0, 0.421_024_438_240_708_3),
        (1, 0.1, 9.853_844_780_870_606),
        (1, 1.0, 0.601_907_230_197_234_6),
        (1, 10.0, 1.864_877_345_382_558_5e-5),
        (2, 2.0, 0.253_759_754_566_055_9),
    ];
    let mut worst: f64 = 0.0;
    for (n, x, k) in table {
        worst = worst.max(rel(bessel_k(n, x)?, k));
    }
    Ok(Gate::at_most(
        Suite::Specfun,
        "bessel_reference_values",
        worst,
        1e-12,
        "K_n(x)".into(),
    ))
}

fn specfun_gamma() -> Result<Gate> {
    let worst = rel(gamma(0.5)?, PI.sqrt())
        .max(rel(gamma(5.0)?, 24.0))
        .max(rel(gamma(0.25)?, 3.625_609_908_221_908_3));
    Ok(Gate::at_most(
        Suite::Specfun,
        "gamma_reference_values",
        worst,
        1e-13,
        "Gamma(1/2), Gamma(5), Gamma(1/4)".into(),
    ))
}

fn specfun_incomplete() -> Result<Gate> {
    let mut worst: f64 = 0.0;
    for x in [0.01, 0.5, 3.0, 30.0] {
        worst = worst.max(rel(lower_incomplete_gamma(1, x)?, -(-x).exp_m1()));
        let two = 1.0 - (1.0 + x) * (-x).exp();
        worst = worst.max(rel(lower_incomplete_gamma(2, x)?, two));
    }
    Ok(Gate::at_most(
        Suite::Specfun,
        "incomplete_gamma_closed_form",
        worst,
        1e-10,
        "gamma(1,x), gamma(2,x)".into(),
    ))
}

fn spectrum_normalisation() -> Result<Gate> {
    let mut worst: f64 = 0.0;
    for alpha in [0.3, 0.5, 0.75, 1.0] {
        let a = norm_constant(alpha)?;
        // Substituting s = tan θ / √a maps [0, ∞) onto [0, π/2).
        let est = integrate(
            |t: f64| {
                let s = t.tan() / a.sqrt();
                ptilde_with(alpha, a, s) / (a.sqrt() * t.cos().powi(2))
            },
            0.0,
            0.5 * PI,
            QuadOptions::relative(1e-12),
        )?;
        worst = worst.max((est.value - 1.0).abs());
    }
    Ok(Gate::at_most(
        Suite::Spectrum,
        "normalisation",
        worst,
        1e-6,
        "int P dq / sigma^2 for alpha in {0.3,0.5,0.75,1}".into(),
    ))
}

fn spectrum_lorentzian() -> Result<Gate> {
    let a = norm_constant(0.5)?;
    let mut worst = (a - 1.0).abs();
    for i in 0..=1000 {
        let s = 0.1 * i as f64;
        worst = worst.max(rel(ptilde_with(0.5, a, s), FRAC_2_PI / (1.0 + s * s)));
    }
    Ok(Gate::at_most(
        Suite::Spectrum,
        "lorentzian_constant",
        worst,
        1e-12,
        "a(1/2) and P(1/2, q) on q xi in [0, 100]".into(),
    ))
}

fn spectrum_validity() -> Result<Gate> {
    let grid = log_breaks(1e-2, 1e2, 40);
    let r = validity_report(0.5, &grid, DEFAULT_VALIDITY_GATE)?;
    Ok(Gate::at_most(
        Suite::Spectrum,
        "validity_alpha_0.5",
        r.max_pointwise,
        1e-6,
        "closed form vs numerical cosine transform".into(),
    ))
}

fn transfer_terms() -> Result<Gate> {
    let geom = WireGeometry::from_ratio(0.6)?;
    let mut worst = 0usize;
    for i in 0..=60 {
        let qd = 0.1 * 100f64.powf(i as f64 / 60.0);
        worst = worst.max(ftilde_series(qd, &geom, 1e-10, 200)?.terms);
    }
    Ok(Gate::at_most(
        Suite::Transfer,
        "series_terms_d_0.6y0",
        worst as f64,
        50.0,
        "most terms over qd in [0.1, 10]".into(),
    ))
}

fn transfer_lowq() -> Result<Gate> {
    let mut worst: f64 = 0.0;
    for r in [10.0, 2.0, 0.6] {
        let geom = WireGeometry::from_ratio(r)?;
        for qd in [1e-4, 1e-3, 1e-2] {
            worst = worst.max(rel(ftilde(qd, &geom)?, ftilde_lowq(qd, &geom)));
        }
    }
    Ok(Gate::at_most(
        Suite::Transfer,
        "low_q_asymptote",
        worst,
        0.01,
        "qd <= 0.01, d/y0 in {10, 2, 0.6}".into(),
    ))
}

fn transfer_highq() -> Result<Gate> {
    let geom = WireGeometry::from_ratio(2.0)?;
    let f = ftilde(12.0, &geom)?;
    let dev = rel(f * f, ftilde2_highq(12.0, &geom));
    Ok(Gate::at_most(
        Suite::Transfer,
        "high_q_asymptote_d_2y0",
        dev,
        0.05,
        "f^2 vs high-q form at qd = 12".into(),
    ))
}

fn transfer_narrow() -> Result<Gate> {
    let geom = WireGeometry::from_ratio(100.0)?;
    let mut worst: f64 = 0.0;
    for i in 0..=50 {
        let qd = 0.1 * 50f64.powf(i as f64 / 50.0);
        worst = worst.max(rel(ftilde(qd, &geom)?, ftilde_narrow(qd, 1.0)?));
    }
    Ok(Gate::at_most(
        Suite::Transfer,
        "narrow_wire_limit",
        worst,
        0.005,
        "d = 100 y0, qd in [0.1, 5]".into(),
    ))
}

fn variance_constant() -> Result<Gate> {
    let c = smallxi_constant(1.0)?;
    Ok(Gate::at_most(
        Suite::Variance,
        "smallxi_constant",
        (c - REFERENCE_SMALLXI_CONSTANT).abs(),
        0.003,
        format!("c(d = y0) = {c:.6}, reference {REFERENCE_SMALLXI_CONSTANT}"),
    ))
}

fn variance_scale() -> Result<Gate> {
    use crate::edge_model::EdgeRoughness;
    use crate::trap_noise::{field_variance, TrapContext};
    let rough = EdgeRoughness::new(3e-9, 2e-6, 0.7)?;
    let geom = WireGeometry::new(4e-6, 1e-6, 3e-6, 0.1)?;
    let base = field_variance(&TrapContext::new(rough, geom, 1.0)?)?;
    let big = field_variance(&TrapContext::new(
        rough.scaled(10.0),
        geom.scaled(10.0),
        1.0,
    )?)?;
    let far = TrapContext::new(EdgeRoughness::new(3e-9, 4e-6, 0.7)?, geom.scaled(2.0), 1.0)?;
    let ratio = field_variance(&far)? / base;
    let dev = (big / base / 1e-2 - 1.0)
        .abs()
        .max((ratio * 16.0 - 1.0).abs());
    Ok(Gate::at_most(
        Suite::Variance,
        "scale_invariance",
        dev,
        1e-9,
        "V under 10x rescaling (sigma scaled too) and at doubled d with fixed ratios".into(),
    ))
}

fn variance_peak() -> Result<Gate> {
    let at = |d_over_xi: f64| {
        vtilde(Ratios {
            d_over_y0: 1.0,
            d_over_xi,
            alpha: 1.0,
        })
    };
    let mid = at(1.0)?;
    let margin = (mid / at(0.01)?).min(mid / at(20.0)?);
    Ok(Gate::at_least(
        Suite::Variance,
        "peak_near_d_equals_xi",
        margin,
        1.0,
        "V(d/xi = 1) over the larger of V(0.01), V(20), at d = y0".into(),
    ))
}

fn variance_hurst() -> Result<Gate> {
    let at = |alpha: f64| {
        vtilde(Ratios {
            d_over_y0: 1.0,
            d_over_xi: 100.0,
            alpha,
        })
    };
    let (one, quarter) = (at(1.0)?, at(0.25)?);
    Ok(Gate::at_most(
        Suite::Variance,
        "hurst_insensitivity_small_xi",
        (one - quarter).abs() / one,
        0.02,
        "V spread between alpha = 1 and 1/4 at xi = d/100".into(),
    ))
}

fn oracle_sinusoid() -> Result<Gate> {
    let setup = SinusoidSetup::default();
    let mut worst: f64 = 0.0;
    for q0d in [0.5, 1.0, 2.0] {
        worst = worst.max(setup.check(q0d)?.relative_error);
    }
    Ok(Gate::at_most(
        Suite::Oracle,
        "sinusoid_amplitude",
        worst,
        0.01,
        "q0 d in {0.5, 1, 2}".into(),
    ))
}

fn oracle_linearity() -> Result<Gate> {
    let setup = SinusoidSetup::default();
    let q0 = 1.0 / setup.d;
    let eps = setup.relative_amplitude * setup.d;
    let (z, one) = setup.sample(q0, eps, 0.0, setup.d)?;
    let (_, two) = setup.sample(q0, 2.0 * eps, 0.0, setup.d)?;
    let ratio = harmonic_fit(&z, &two, q0).0 / harmonic_fit(&z, &one, q0).0;
    Ok(Gate::at_most(
        Suite::Oracle,
        "linearity",
        (ratio / 2.0 - 1.0).abs(),
        1e-3,
        "doubling the meander amplitude".into(),
    ))
}

fn oracle_decay() -> Result<Gate> {
    let setup = SinusoidSetup::default();
    let d = setup.d;
    let q0 = 1.0 / d;
    let eps = setup.relative_amplitude * d;
    let (z, near) = setup.sample(q0, eps, 0.0, d)?;
    let (_, far) = setup.sample(q0, eps, 0.0, 2.0 * d)?;
    // B₀/d falls as 1/d², so the amplitude ratio is scaled by 2² before
    // comparing with the ratio of (q₀d)² K₁(q₀d).
    let measured = 4.0 * harmonic_fit(&z, &far, q0).0 / harmonic_fit(&z, &near, q0).0;
    let expected = 4.0 * bessel_k(1, 2.0)? / bessel_k(1, 1.0)?;
    Ok(Gate::at_most(
        Suite::Oracle,
        "height_decay",
        rel(measured, expected),
        0.01,
        "amplitude at 2d over amplitude at d, q0 d = 1".into(),
    ))
}

fn oracle_rough() -> Result<Gate> {
    let setup = RoughFilamentSetup::default();
    let r = rough_filament_check(&setup)?;
    Ok(Gate::at_most(
        Suite::Oracle,
        "rough_filament_spectrum",
        r.max_deviation,
        setup.gate,
        format!(
            "{} seeds, {} bands over qd in [0.3, 3]",
            setup.seeds,
            r.qd.len()
        ),
    ))
}
