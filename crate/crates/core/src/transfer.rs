//! Transfer function `f̃(q; d, y₀)` that converts fluctuations of the wire
//! centre line into magnetic-field noise on the trap axis, with its low- and
//! high-frequency asymptotes.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::specfun::{bessel_k_scaled_seq, odd_gamma_bracket_scaled};
use crate::units::MU0;

/// Default relative tolerance for the `f̃` series.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default cap on the number of series terms.
pub const DEFAULT_MAX_TERMS: usize = 200;

/// Rectangular wire carrying current `I` along `z`, with the trap a height
/// `d` above its centre. Lengths in metres, current in amperes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WireGeometry {
    /// Width `y₀`.
    pub y0: f64,
    /// Thickness `x₀`.
    pub x0: f64,
    /// Trap height `d`.
    pub d: f64,
    /// Current `I`.
    pub current: f64,
}

impl WireGeometry {
    pub fn new(y0: f64, x0: f64, d: f64, current: f64) -> Result<Self> {
        for (name, v) in [("y0", y0), ("x0", x0), ("d", d), ("current", current)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(
                    match name {
                        "y0" => "y0",
                        "x0" => "x0",
                        "d" => "d",
                        _ => "current",
                    },
                    format!("must be positive and finite, got {v}"),
                ));
            }
        }
        Ok(Self { y0, x0, d, current })
    }

    /// Geometry defined only by the height-to-width ratio, with unit height.
    /// Thickness and current are placeholders; only `d/y₀` enters `f̃`.
    pub fn from_ratio(d_over_y0: f64) -> Result<Self> {
        if !(d_over_y0 > 0.0) {
            return Err(invalid(
                "d_over_y0",
                format!("must be positive, got {d_over_y0}"),
            ));
        }
        Self::new(1.0 / d_over_y0, 1e-3, 1.0, 1.0)
    }

    pub fn d_over_y0(&self) -> f64 {
        self.d / self.y0
    }

    /// The filament approximation needs the wire thin compared with `d`.
    pub fn is_thin(&self) -> bool {
        self.x0 < self.d / 5.0
    }

    /// The `f̃` series converges only for `d > y₀/2`.
    pub fn series_valid(&self) -> bool {
        self.d > 0.5 * self.y0
    }

    /// Ideal field `B₀ = μ₀ I / (2π d)` at the trap height, in tesla.
    pub fn b0(&self) -> f64 {
        MU0 * self.current / (2.0 * std::f64::consts::PI * self.d)
    }

    /// Same geometry with every length multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            y0: self.y0 * factor,
            x0: self.x0 * factor,
            d: self.d * factor,
            current: self.current,
        }
    }

    fn require_series(&self) -> Result<()> {
        if self.series_valid() {
            Ok(())
        } else {
            Err(domain(
                "ftilde",
                format!(
                    "series requires d > y0/2 (d = {:e} m, y0 = {:e} m, d/y0 = {:.4})",
                    self.d,
                    self.y0,
                    self.d_over_y0()
                ),
            ))
        }
    }
}

/// Value of `f̃` together with the number of series terms it took.
///
/// `rounding` bounds the absolute error left by cancellation between the
/// alternating terms. It only matters far out in the exponential tail when
/// `d` approaches `y₀/2`, where `f̃` is already below about 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub terms: usize,
    pub rounding: f64,
}

/// How the partial sums of the `f̃` series are turned into a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Summation {
    /// Stop when the last term is below `tol` relative to the partial sum.
    Plain,
    /// Wynn ε-extrapolation of the partial sums; stop when three successive
    /// extrapolated values agree to `tol/100`. Falls back to the plain rule
    /// whenever that triggers first.
    #[default]
    Accelerated,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesOptions {
    pub tol: f64,
    pub max_terms: usize,
    pub summation: Summation,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_terms: DEFAULT_MAX_TERMS,
            summation: Summation::Accelerated,
        }
    }
}

/// Fraction of the tolerance to which successive extrapolations must agree.
const WYNN_SAFETY: f64 = 1e-2;

/// Wynn ε-algorithm on a growing sequence, storing one counter-diagonal.
#[derive(Debug, Default)]
struct WynnEpsilon {
    diag: Vec<f64>,
}

impl WynnEpsilon {
    /// Pushes the next partial sum and returns the current extrapolation,
    /// or `None` if the table broke down.
    fn push(&mut self, s: f64) -> Option<f64> {
        self.diag.push(s);
        let n = self.diag.len() - 1;
        if n == 0 {
            return Some(s);
        }
        let mut aux2 = 0.0;
        for j in (1..=n).rev() {
            let aux1 = aux2;
            aux2 = self.diag[j - 1];
            let diff = self.diag[j] - aux2;
            self.diag[j - 1] = if diff.abs() <= f64::MIN_POSITIVE * 1e10 {
                f64::INFINITY
            } else {
                aux1 + 1.0 / diff
            };
        }
        let est = if n.is_multiple_of(2) {
            self.diag[0]
        } else {
            self.diag[1]
        };
        est.is_finite().then_some(est)
    }
}

/// Evaluates the transfer-function series
///
/// `f̃ = (qd)² · 2 sinh(qy₀/2)/(qy₀ sinh qy₀) · Σₙ (−1)ⁿ K_{n+1}(qd) / (n! (2qd)ⁿ)
///       · [γ_{2n+1}(qy₀/2) − γ_{2n+1}(−qy₀/2)]`.
///
/// With `z = qd` and `x = qy₀/2` the prefactor is `z²/(2x cosh x)`. The
/// Bessel factor is carried as `uₙ = e^z K_{n+1}(z) x^{2n+1} / (n! (2z)ⁿ)`,
/// which obeys `u_{n+1} = (x/z)² uₙ + x⁴/(4z² n(n+1)) u_{n−1}` (the upward
/// `K` recurrence rewritten for the scaled quantity). The bracket is taken as
/// `x^{2n+1} cosh(x) bₙ(x)` from [`odd_gamma_bracket_scaled`], so no
/// intermediate quantity overflows even when `K_{n+1}(z)` or `e^{x}` alone
/// would.
///
/// Far from the wire the terms decay like `(y₀/2d)^{2n}`; close to the
/// `d = y₀/2` boundary they alternate with a ratio near −1 and the plain
/// partial sums converge slowly, which is what the ε-extrapolation fixes.
pub fn ftilde_series_with(q: f64, geom: &WireGeometry, opts: SeriesOptions) -> Result<SeriesValue> {
    geom.require_series()?;
    if !(q >= 0.0) || !q.is_finite() {
        return Err(domain(
            "ftilde",
            format!("wavevector must be non-negative, got {q}"),
        ));
    }
    if q == 0.0 {
        return Ok(SeriesValue {
            value: 0.0,
            terms: 0,
            rounding: 0.0,
        });
    }
    let z = q * geom.d;
    let x = 0.5 * q * geom.y0;
    let r2 = (x / z) * (x / z);
    let scale = z * z / (2.0 * x) * (-z).exp();
    let tol = opts.tol;

    let kk = bessel_k_scaled_seq(2, z)?;
    let mut u_prev = kk[1] * x;
    let mut u_curr = kk[2] * x.powi(3) / (2.0 * z);

    let mut sum = u_prev * odd_gamma_bracket_scaled(0, x)?;
    let mut wynn = WynnEpsilon::default();
    let mut history: [Option<f64>; 3] = [wynn.push(sum), None, None];
    let mut last_rel = f64::INFINITY;
    // Largest term seen so far; rounding in the partial sums is bounded by a
    // few ulps of it, which caps the attainable agreement between estimates.
    let mut peak = sum.abs();

    for n in 1..opts.max_terms {
        let term = u_curr * odd_gamma_bracket_scaled(n as u32, x)?;
        sum += if n % 2 == 1 { -term } else { term };
        peak = peak.max(term.abs());
        last_rel = (term / sum).abs();
        if last_rel < tol || term == 0.0 {
            return Ok(SeriesValue {
                value: scale * sum,
                terms: n + 1,
                rounding: scale * 64.0 * f64::EPSILON * peak,
            });
        }
        if opts.summation == Summation::Accelerated {
            history = [wynn.push(sum), history[0], history[1]];
            if let [Some(e0), Some(e1), Some(e2)] = history {
                // Extrapolated values can pause on a plateau before moving
                // on, so agreement is required to a hundredth of `tol`.
                let slack = (WYNN_SAFETY * tol * e0.abs()).max(64.0 * f64::EPSILON * peak);
                let agree = |a: f64, b: f64| (a - b).abs() <= slack;
                if agree(e0, e1) && agree(e1, e2) {
                    return Ok(SeriesValue {
                        value: scale * e0,
                        terms: n + 1,
                        rounding: scale * 64.0 * f64::EPSILON * peak,
                    });
                }
            }
        }
        let nf = n as f64;
        let u_next = r2 * u_curr + x.powi(4) / (4.0 * z * z * nf * (nf + 1.0)) * u_prev;
        u_prev = u_curr;
        u_curr = u_next;
    }
    Err(Error::NonConvergence {
        what: "transfer-function series",
        iterations: opts.max_terms,
        last: last_rel,
    })
}

/// [`ftilde_series_with`] using the default (accelerated) summation.
pub fn ftilde_series(
    q: f64,
    geom: &WireGeometry,
    tol: f64,
    max_terms: usize,
) -> Result<SeriesValue> {
    ftilde_series_with(
        q,
        geom,
        SeriesOptions {
            tol,
            max_terms,
            ..SeriesOptions::default()
        },
    )
}

/// `f̃(q)` with the default tolerance and term cap.
pub fn ftilde(q: f64, geom: &WireGeometry) -> Result<f64> {
    Ok(ftilde_series(q, geom, DEFAULT_TOL, DEFAULT_MAX_TERMS)?.value)
}

/// Low-frequency asymptote `f̃ ≃ qd (2d/y₀) arctan(y₀/2d)`.
pub fn ftilde_lowq(q: f64, geom: &WireGeometry) -> f64 {
    let s = geom.y0 / (2.0 * geom.d);
    let shape = if s < 1e-8 {
        1.0 - s * s / 3.0
    } else {
        s.atan() / s
    };
    q * geom.d * shape
}

/// High-frequency asymptote of `f̃²`:
/// `(π/2) qd (2d/y₀)² exp{−qd [2 + (y₀/2d)²]}`.
pub fn ftilde2_highq(q: f64, geom: &WireGeometry) -> f64 {
    let z = q * geom.d;
    let w = 2.0 * geom.d / geom.y0;
    let s = geom.y0 / (2.0 * geom.d);
    0.5 * std::f64::consts::PI * z * w * w * (-z * (2.0 + s * s)).exp()
}

/// Narrow-wire limit `f̃ → (qd)² K₁(qd)` for `y₀ → 0`.
pub fn ftilde_narrow(q: f64, d: f64) -> Result<f64> {
    let z = q * d;
    if z == 0.0 {
        return Ok(0.0);
    }
    let k = bessel_k_scaled_seq(1, z)?;
    Ok(z * z * k[1] * (-z).exp())
}
