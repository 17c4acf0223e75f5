//! Magnetic-field and potential noise on the trap axis produced by a rough
//! wire: the spectrum `S(q)`, its dimensionless form `S̃ = P̃ f̃²`, the
//! variance integrals `V` and `Ṽ`, and the small-correlation-length constant
//! `c(d/y₀)` for which `Ṽ → c ξ/d`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::FRAC_2_PI;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::edge_model::{norm_constant, ptilde_with, EdgeRoughness};
use crate::error::{invalid, Error, Result};
use crate::quad::{integrate_panels, log_breaks, QuadOptions};
use crate::transfer::{ftilde, ftilde2_highq, ftilde_lowq, WireGeometry};

/// Lower end of the `qd` integration range.
pub const QD_MIN: f64 = 1e-6;
/// Upper end of the `qd` integration range.
pub const QD_MAX: f64 = 40.0;
/// Relative tolerance requested from the variance quadratures.
pub const VARIANCE_TOL: f64 = 1e-10;

/// Everything needed to turn edge roughness into trap noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapContext {
    pub rough: EdgeRoughness,
    pub geom: WireGeometry,
    /// Magnetic moment of the trapped atom along the field (J/T).
    pub mu_z: f64,
}

impl TrapContext {
    pub fn new(rough: EdgeRoughness, geom: WireGeometry, mu_z: f64) -> Result<Self> {
        if !(mu_z > 0.0 && mu_z.is_finite()) {
            return Err(invalid("mu_z", format!("must be positive, got {mu_z}")));
        }
        Ok(Self { rough, geom, mu_z })
    }

    /// Prefactor `B₀² σ²ξ/d²` that turns `S̃` into a field spectrum (T²·m).
    pub fn field_scale(&self) -> f64 {
        let b0 = self.geom.b0();
        let s = self.rough.sigma / self.geom.d;
        b0 * b0 * s * s * self.rough.xi
    }

    /// The dimensionless triple on which `Ṽ` depends.
    pub fn ratios(&self) -> Ratios {
        Ratios {
            d_over_y0: self.geom.d / self.geom.y0,
            d_over_xi: self.geom.d / self.rough.xi,
            alpha: self.rough.alpha,
        }
    }
}

/// `(d/y₀, d/ξ, α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ratios {
    pub d_over_y0: f64,
    pub d_over_xi: f64,
    pub alpha: f64,
}

/// `S̃(q) = P̃(α, qξ) f̃²(qd; d/y₀)`.
pub fn stilde(q: f64, ctx: &TrapContext) -> Result<f64> {
    let f = ftilde(q, &ctx.geom)?;
    let a = norm_constant(ctx.rough.alpha)?;
    Ok(ptilde_with(ctx.rough.alpha, a, q * ctx.rough.xi) * f * f)
}

/// Field-noise spectrum `B₀²(σ²ξ/d²) S̃(q)` in T²·m.
pub fn field_noise_spectrum(q: f64, ctx: &TrapContext) -> Result<f64> {
    Ok(ctx.field_scale() * stilde(q, ctx)?)
}

/// Potential-noise spectrum `μ_z² B₀²(σ²ξ/d²) S̃(q)` in J²·m.
pub fn noise_spectrum(q: f64, ctx: &TrapContext) -> Result<f64> {
    Ok(ctx.mu_z * ctx.mu_z * field_noise_spectrum(q, ctx)?)
}

fn panel_breaks(knee: f64) -> Vec<f64> {
    let mut breaks = log_breaks(QD_MIN, QD_MAX, 60);
    if knee > QD_MIN && knee < QD_MAX {
        breaks.push(knee);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
    }
    breaks
}

/// `∫ w(s) f̃²(s) ds` over `s ∈ [0, ∞)` for a non-increasing weight `w`.
/// The pieces outside `[QD_MIN, QD_MAX]` come from the low- and high-`q`
/// asymptotes; `knee` adds a breakpoint where `w` rolls off.
fn weighted_integral(d_over_y0: f64, knee: f64, weight: impl Fn(f64) -> f64) -> Result<f64> {
    let opts = QuadOptions {
        rel_tol: VARIANCE_TOL,
        abs_tol: 0.0,
        max_panels: 50_000,
    };
    let unit = WireGeometry::from_ratio(d_over_y0)?;
    let err: RefCell<Option<Error>> = RefCell::new(None);
    let body = integrate_panels(
        |s: f64| match ftilde(s, &unit) {
            Ok(f) => weight(s) * f * f,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        &panel_breaks(knee),
        opts,
    )?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }

    // Below QD_MIN, f̃ ≃ k s, so the piece is w(0) k² QD_MIN³/3.
    let k = ftilde_lowq(1.0, &unit);
    let low = weight(0.0) * k * k * QD_MIN.powi(3) / 3.0;

    // Above QD_MAX, f̃² ≃ A s e^{−βs} and w(s) ≤ w(QD_MAX).
    let r = 1.0 / (2.0 * d_over_y0);
    let beta = 2.0 + r * r;
    let tail = ftilde2_highq(QD_MAX, &unit) / QD_MAX;
    let high = weight(QD_MAX) * tail * (QD_MAX / beta + 1.0 / (beta * beta));

    Ok(body.value + low + high)
}

/// `Ṽ = ξ ∫₀^∞ S̃ dq = (ξ/d) ∫₀^∞ P̃(α, sξ/d) f̃²(s) ds`.
pub fn vtilde(ratios: Ratios) -> Result<f64> {
    if !(ratios.d_over_xi > 0.0 && ratios.d_over_xi.is_finite()) {
        return Err(invalid(
            "d_over_xi",
            format!("must be positive, got {}", ratios.d_over_xi),
        ));
    }
    let a = norm_constant(ratios.alpha)?;
    let xi_over_d = 1.0 / ratios.d_over_xi;
    let alpha = ratios.alpha;
    let integral = weighted_integral(ratios.d_over_y0, ratios.d_over_xi, |s| {
        ptilde_with(alpha, a, s * xi_over_d)
    })?;
    Ok(xi_over_d * integral)
}

/// Field variance `V = (σ/d)² B₀² Ṽ` in T².
pub fn field_variance(ctx: &TrapContext) -> Result<f64> {
    let b0 = ctx.geom.b0();
    let s = ctx.rough.sigma / ctx.geom.d;
    Ok(s * s * b0 * b0 * vtilde(ctx.ratios())?)
}

/// Potential variance `μ_z² V` in J².
pub fn potential_variance(ctx: &TrapContext) -> Result<f64> {
    Ok(ctx.mu_z * ctx.mu_z * field_variance(ctx)?)
}

fn constant_cache() -> &'static RwLock<HashMap<u64, f64>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, f64>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `c(d/y₀) = (2/π) ∫₀^∞ f̃²(s) ds`, the slope of `Ṽ` against `ξ/d` as
/// `ξ/d → 0`. Computed once per ratio and cached for the process.
pub fn smallxi_constant(d_over_y0: f64) -> Result<f64> {
    let key = d_over_y0.to_bits();
    if let Some(&c) = constant_cache()
        .read()
        .expect("cache lock poisoned")
        .get(&key)
    {
        return Ok(c);
    }
    let c = FRAC_2_PI * weighted_integral(d_over_y0, 1.0, |_| 1.0)?;
    constant_cache()
        .write()
        .expect("cache lock poisoned")
        .insert(key, c);
    Ok(c)
}

/// The reference value of `c(1)` used for quick design estimates.
pub const REFERENCE_SMALLXI_CONSTANT: f64 = 0.274;

/// A tabulated curve with axis metadata, serialised as commented CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledCurve {
    pub name: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub x_label: String,
    pub y_label: String,
    /// Free-form `key=value` provenance lines.
    pub metadata: Vec<(String, String)>,
}

impl SampledCurve {
    pub fn new(
        name: impl Into<String>,
        x: Vec<f64>,
        y: Vec<f64>,
        x_label: impl Into<String>,
        y_label: impl Into<String>,
    ) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} abscissae vs {} values",
                x.len(),
                y.len()
            )));
        }
        if !x.windows(2).all(|w| w[1] > w[0]) {
            return Err(invalid("x", "abscissae must be strictly increasing"));
        }
        Ok(Self {
            name: name.into(),
            x,
            y,
            x_label: x_label.into(),
            y_label: y_label.into(),
            metadata: Vec::new(),
        })
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# curve={}", self.name).unwrap();
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}={v}").unwrap();
        }
        writeln!(out, "{},{}", self.x_label, self.y_label).unwrap();
        for (x, y) in self.x.iter().zip(&self.y) {
            writeln!(out, "{x},{y}").unwrap();
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Index of the largest value.
    pub fn argmax(&self) -> Option<usize> {
        self.y
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
    }
}

/// Log-spaced grid of `count` points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    log_breaks(lo, hi, count - 1)
}

/// `S̃` sampled against `qd`.
pub fn stilde_curve(ctx: &TrapContext, qd: &[f64]) -> Result<SampledCurve> {
    use rayon::prelude::*;
    let y = qd
        .par_iter()
        .map(|&s| stilde(s / ctx.geom.d, ctx))
        .collect::<Result<Vec<_>>>()?;
    Ok(SampledCurve::new("stilde", qd.to_vec(), y, "qd", "stilde")?
        .with_meta("d_over_y0", ctx.geom.d / ctx.geom.y0)
        .with_meta("d_over_xi", ctx.geom.d / ctx.rough.xi)
        .with_meta("alpha", ctx.rough.alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d_over_y0: f64, d_over_xi: f64, alpha: f64) -> TrapContext {
        let d = 1e-5;
        let rough = EdgeRoughness::new(3e-9, d / d_over_xi, alpha).unwrap();
        let geom = WireGeometry::new(d / d_over_y0, 1e-6, d, 0.1).unwrap();
        TrapContext::new(rough, geom, crate::units::MU_B).unwrap()
    }

    #[test]
    fn stilde_vanishes_at_zero() {
        assert_eq!(stilde(0.0, &ctx(1.0, 1.0, 0.5)).unwrap(), 0.0);
    }

    #[test]
    fn spectrum_scale_identity() {
        let c = ctx(2.0, 10.0, 0.5);
        let q = 1.0 / c.geom.d;
        let s = noise_spectrum(q, &c).unwrap();
        let expected = c.mu_z * c.mu_z * c.field_scale() * stilde(q, &c).unwrap();
        assert_eq!(s, expected);
    }

    #[test]
    fn doubling_current_quadruples_spectrum() {
        let c = ctx(2.0, 10.0, 0.5);
        let mut c2 = c;
        c2.geom.current *= 2.0;
        let q = 0.7 / c.geom.d;
        let r = noise_spectrum(q, &c2).unwrap() / noise_spectrum(q, &c).unwrap();
        assert!((r - 4.0).abs() < 1e-12);
    }

    #[test]
    fn curve_rejects_unsorted() {
        assert!(SampledCurve::new("x", vec![1.0, 0.5], vec![0.0, 0.0], "a", "b").is_err());
        assert!(SampledCurve::new("x", vec![1.0], vec![0.0, 0.0], "a", "b").is_err());
    }
}
