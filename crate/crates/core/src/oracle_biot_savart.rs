//! Brute-force magnetostatics for a meandering current filament.
//!
//! The filament runs along `z` in the chip plane with lateral displacement
//! `δy(z)`, and the field is evaluated on the line `(x = d, y = 0)` above it.
//! The path is a polyline; each straight piece contributes its exact
//! Biot–Savart field, and pieces farther than a cutoff from the evaluation
//! point are skipped. Nothing here uses the transfer-function machinery, so
//! the results serve as an independent check of it.

use std::f64::consts::PI;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::edge_model::{norm_constant, ptilde_with, EdgeRoughness};
use crate::error::{invalid, Error, Result};
use crate::profile_synth::{synthesize, EdgeProfile};
use crate::specfun::bessel_k;
use crate::transfer::ftilde_narrow;
use crate::units::MU0;

/// Largest `max|δy| / d` accepted for linear-response comparisons.
pub const LINEAR_REGIME_LIMIT: f64 = 0.01;
/// Fewest straight pieces per period for a sinusoidal path.
pub const MIN_SEGMENTS_PER_PERIOD: usize = 40;
/// Largest relative change tolerated when the segment length is halved.
pub const DISCRETISATION_TOL: f64 = 1e-3;
/// Path padding beyond the evaluation window, in periods `1/q₀` or correlation lengths.
pub const PADDING_SCALES: f64 = 10.0;

/// How the filament displacement was produced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PathShape {
    /// `δy = ε cos(q₀ z + φ)`, so the path can be resampled exactly.
    Sinusoid { amplitude: f64, q0: f64, phase: f64 },
    /// Tabulated displacement with the given correlation length.
    Sampled { correlation_length: f64 },
}

/// Polyline filament through `(0, δy_i, z_i)` carrying current `I` along `+z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilamentPath {
    pub z: Vec<f64>,
    pub dy: Vec<f64>,
    pub current: f64,
    pub shape: PathShape,
}

impl FilamentPath {
    /// Sinusoidal meander on `[z_lo, z_hi]` with `segments_per_period` pieces per period.
    pub fn sinusoid(
        amplitude: f64,
        q0: f64,
        phase: f64,
        z_lo: f64,
        z_hi: f64,
        segments_per_period: usize,
        current: f64,
    ) -> Result<Self> {
        if !(q0 > 0.0) {
            return Err(invalid("q0", format!("must be positive, got {q0}")));
        }
        if !(z_hi > z_lo) {
            return Err(invalid(
                "z_hi",
                format!("must exceed z_lo ({z_lo} >= {z_hi})"),
            ));
        }
        if segments_per_period == 0 {
            return Err(invalid("segments_per_period", "must be positive"));
        }
        let step = 2.0 * PI / (q0 * segments_per_period as f64);
        let count = ((z_hi - z_lo) / step).ceil() as usize;
        let z: Vec<f64> = (0..=count).map(|i| z_lo + i as f64 * step).collect();
        let dy = z
            .iter()
            .map(|&z| amplitude * (q0 * z + phase).cos())
            .collect();
        Self::validated(
            z,
            dy,
            current,
            PathShape::Sinusoid {
                amplitude,
                q0,
                phase,
            },
        )
    }

    /// Tabulated path `δy(z₀ + i·dz)`.
    pub fn sampled(
        z0: f64,
        dz: f64,
        dy: Vec<f64>,
        correlation_length: f64,
        current: f64,
    ) -> Result<Self> {
        if !(dz > 0.0) {
            return Err(invalid("dz", format!("must be positive, got {dz}")));
        }
        if !(correlation_length > 0.0) {
            return Err(invalid(
                "correlation_length",
                format!("must be positive, got {correlation_length}"),
            ));
        }
        let z = (0..dy.len()).map(|i| z0 + i as f64 * dz).collect();
        Self::validated(z, dy, current, PathShape::Sampled { correlation_length })
    }

    /// Filament following a synthesized edge profile, starting at `z = 0`.
    pub fn from_profile(
        profile: &EdgeProfile,
        correlation_length: f64,
        current: f64,
    ) -> Result<Self> {
        Self::sampled(
            0.0,
            profile.dz,
            profile.values.clone(),
            correlation_length,
            current,
        )
    }

    fn validated(z: Vec<f64>, dy: Vec<f64>, current: f64, shape: PathShape) -> Result<Self> {
        if z.len() != dy.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} z values, {} displacements",
                z.len(),
                dy.len()
            )));
        }
        if z.len() < 2 {
            return Err(invalid("path", "needs at least two points"));
        }
        if z.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("path", "z must be strictly increasing"));
        }
        if !(current.is_finite() && current != 0.0) {
            return Err(invalid(
                "current",
                format!("must be finite and non-zero, got {current}"),
            ));
        }
        Ok(Self {
            z,
            dy,
            current,
            shape,
        })
    }

    pub fn max_displacement(&self) -> f64 {
        self.dy.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Length scale that sets the padding: `1/q₀` or the correlation length.
    pub fn padding_scale(&self) -> f64 {
        match self.shape {
            PathShape::Sinusoid { q0, .. } => 1.0 / q0,
            PathShape::Sampled { correlation_length } => correlation_length,
        }
    }

    /// The same meander with pieces of half the length. Sinusoids are
    /// resampled exactly; tabulated paths cannot be, so for them the
    /// comparison runs the other way and [`FilamentPath::coarsened`] is used.
    fn refined(&self) -> Option<Self> {
        match self.shape {
            PathShape::Sinusoid {
                amplitude,
                q0,
                phase,
            } => {
                let mut z = Vec::with_capacity(2 * self.z.len() - 1);
                for w in self.z.windows(2) {
                    z.push(w[0]);
                    z.push(0.5 * (w[0] + w[1]));
                }
                z.push(*self.z.last().unwrap());
                let dy = z
                    .iter()
                    .map(|&z| amplitude * (q0 * z + phase).cos())
                    .collect();
                Some(Self {
                    z,
                    dy,
                    current: self.current,
                    shape: self.shape,
                })
            }
            PathShape::Sampled { .. } => None,
        }
    }

    /// Every other vertex, keeping both ends.
    pub fn coarsened(&self) -> Self {
        let last = self.z.len() - 1;
        let keep: Vec<usize> = (0..=last)
            .step_by(2)
            .chain(if last % 2 == 1 { Some(last) } else { None })
            .collect();
        Self {
            z: keep.iter().map(|&i| self.z[i]).collect(),
            dy: keep.iter().map(|&i| self.dy[i]).collect(),
            current: self.current,
            shape: self.shape,
        }
    }
}

/// Summation settings for [`field_bz`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldOptions {
    /// Pieces farther than this many heights `d` from the evaluation point are skipped.
    pub cutoff_heights: f64,
}

impl Default for FieldOptions {
    fn default() -> Self {
        Self {
            cutoff_heights: 20.0,
        }
    }
}

/// Exact field of a straight piece from `a` to `b` carrying `current`, at `p`.
///
/// With `r₁ = p − a`, `r₂ = p − b`:
/// `B = (μ₀I/4π) (r₁ × r₂)(|r₁| + |r₂|) / (|r₁||r₂|(|r₁||r₂| + r₁·r₂))`.
pub fn segment_field(a: [f64; 3], b: [f64; 3], p: [f64; 3], current: f64) -> [f64; 3] {
    let r1 = [p[0] - a[0], p[1] - a[1], p[2] - a[2]];
    let r2 = [p[0] - b[0], p[1] - b[1], p[2] - b[2]];
    let n1 = (r1[0] * r1[0] + r1[1] * r1[1] + r1[2] * r1[2]).sqrt();
    let n2 = (r2[0] * r2[0] + r2[1] * r2[1] + r2[2] * r2[2]).sqrt();
    let dot = r1[0] * r2[0] + r1[1] * r2[1] + r1[2] * r2[2];
    let cross = [
        r1[1] * r2[2] - r1[2] * r2[1],
        r1[2] * r2[0] - r1[0] * r2[2],
        r1[0] * r2[1] - r1[1] * r2[0],
    ];
    // When p sees the piece under an obtuse angle, |r₁||r₂| + r₁·r₂ cancels;
    // it equals |r₁ × r₂|² / (|r₁||r₂| − r₁·r₂).
    let denom = if dot >= 0.0 {
        n1 * n2 + dot
    } else {
        (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]) / (n1 * n2 - dot)
    };
    let k = MU0 * current / (4.0 * PI) * (n1 + n2) / (n1 * n2 * denom);
    [k * cross[0], k * cross[1], k * cross[2]]
}

/// Axial piece `δB_z` at `(d, 0, z)` for each `z` in `z_eval`.
///
/// Only the `z` component of [`segment_field`] is needed, and with the
/// filament in the plane `x = 0` it reduces to `d(δy_i − δy_{i+1})` times the
/// scalar factor, so a straight path gives exactly zero.
pub fn field_bz(
    path: &FilamentPath,
    d: f64,
    z_eval: &[f64],
    opts: FieldOptions,
) -> Result<Vec<f64>> {
    check_field_preconditions(path, d, z_eval, opts)?;
    Ok(field_bz_unchecked(path, d, z_eval, opts.cutoff_heights * d))
}

fn check_field_preconditions(
    path: &FilamentPath,
    d: f64,
    z_eval: &[f64],
    opts: FieldOptions,
) -> Result<()> {
    if !(d > 0.0) {
        return Err(invalid("d", format!("must be positive, got {d}")));
    }
    if !(opts.cutoff_heights > 0.0) {
        return Err(invalid(
            "cutoff_heights",
            format!("must be positive, got {}", opts.cutoff_heights),
        ));
    }
    let ratio = path.max_displacement() / d;
    if ratio >= LINEAR_REGIME_LIMIT {
        return Err(invalid(
            "path",
            format!(
                "max |dy| / d = {ratio:.3e} is outside the linear regime (< {LINEAR_REGIME_LIMIT})"
            ),
        ));
    }
    if let PathShape::Sinusoid { q0, .. } = path.shape {
        let per_period = 2.0 * PI / (q0 * (path.z[1] - path.z[0]));
        if per_period < MIN_SEGMENTS_PER_PERIOD as f64 - 1e-9 {
            return Err(Error::Discretisation(format!(
                "{per_period:.1} segments per period, need at least {MIN_SEGMENTS_PER_PERIOD}"
            )));
        }
    }
    let pad = (PADDING_SCALES * path.padding_scale()).max(opts.cutoff_heights * d);
    let lo = path.z[0] + pad;
    let hi = *path.z.last().unwrap() - pad;
    if let Some(&bad) = z_eval.iter().find(|&&z| z < lo || z > hi) {
        return Err(Error::InsufficientRange(format!(
            "evaluation point z = {bad:e} m lies within {pad:e} m of the path end (allowed [{lo:e}, {hi:e}])"
        )));
    }
    Ok(())
}

fn field_bz_unchecked(path: &FilamentPath, d: f64, z_eval: &[f64], cutoff: f64) -> Vec<f64> {
    let pref = MU0 * path.current / (4.0 * PI);
    z_eval
        .par_iter()
        .map(|&ze| {
            let first = path
                .z
                .partition_point(|&z| z < ze - cutoff)
                .saturating_sub(1);
            let last = path
                .z
                .partition_point(|&z| z <= ze + cutoff)
                .min(path.z.len() - 1);
            let mut sum = 0.0;
            for i in first..last {
                let (ya, yb) = (path.dy[i], path.dy[i + 1]);
                let (ua, ub) = (ze - path.z[i], ze - path.z[i + 1]);
                let n1 = (d * d + ya * ya + ua * ua).sqrt();
                let n2 = (d * d + yb * yb + ub * ub).sqrt();
                let dot = d * d + ya * yb + ua * ub;
                let denom = if dot >= 0.0 {
                    n1 * n2 + dot
                } else {
                    let cx = ya * ub - ua * yb;
                    let cy = ua * d - d * ub;
                    let cz = d * (yb - ya);
                    (cx * cx + cy * cy + cz * cz) / (n1 * n2 - dot)
                };
                sum += d * (ya - yb) * (n1 + n2) / (n1 * n2 * denom);
            }
            pref * sum
        })
        .collect()
}

/// [`field_bz`] plus a resolution check: the result is compared with the
/// same path at half (sinusoid) or double (tabulated) segment length, and a
/// relative change above [`DISCRETISATION_TOL`] is an error.
pub fn field_bz_checked(
    path: &FilamentPath,
    d: f64,
    z_eval: &[f64],
    opts: FieldOptions,
) -> Result<Vec<f64>> {
    let field = field_bz(path, d, z_eval, opts)?;
    let other = match path.refined() {
        Some(fine) => field_bz(&fine, d, z_eval, opts)?,
        None => field_bz_unchecked(&path.coarsened(), d, z_eval, opts.cutoff_heights * d),
    };
    let scale = field.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diff = field
        .iter()
        .zip(&other)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if scale > 0.0 && diff > DISCRETISATION_TOL * scale {
        return Err(Error::Discretisation(format!(
            "halving the segment length changes the field by {:.3e} (relative), limit {DISCRETISATION_TOL}",
            diff / scale
        )));
    }
    Ok(field)
}

/// Closed-form single-mode amplitude `(B₀/d) ε (q₀d)² K₁(q₀d)`.
pub fn single_mode_amplitude(current: f64, d: f64, amplitude: f64, q0: f64) -> Result<f64> {
    let b0 = MU0 * current / (2.0 * PI * d);
    let z = q0 * d;
    Ok(b0 / d * amplitude * z * z * bessel_k(1, z)?)
}

/// Amplitude and phase of the `q₀` harmonic in samples that cover whole periods uniformly.
/// The signal is modelled as `A sin(q₀z + θ)`.
pub fn harmonic_fit(z: &[f64], values: &[f64], q0: f64) -> (f64, f64) {
    let m = values.len() as f64;
    let (mut s, mut c) = (0.0, 0.0);
    for (&z, &v) in z.iter().zip(values) {
        s += v * (q0 * z).sin();
        c += v * (q0 * z).cos();
    }
    let (s, c) = (2.0 * s / m, 2.0 * c / m);
    (s.hypot(c), c.atan2(s))
}

/// Parameters of a single-mode comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinusoidSetup {
    pub d: f64,
    pub current: f64,
    /// `ε/d`.
    pub relative_amplitude: f64,
    pub segments_per_period: usize,
    /// Evaluation points over one period.
    pub samples: usize,
    pub options: FieldOptions,
}

impl Default for SinusoidSetup {
    fn default() -> Self {
        Self {
            d: 1e-6,
            current: 1.0,
            relative_amplitude: 1e-3,
            segments_per_period: 128,
            samples: 64,
            options: FieldOptions::default(),
        }
    }
}

/// Outcome of one single-mode comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinusoidCheck {
    pub q0d: f64,
    pub numeric: f64,
    pub analytic: f64,
    pub relative_error: f64,
    /// Harmonic phase `θ` of `A sin(q₀z + θ)`.
    pub phase: f64,
}

impl SinusoidSetup {
    /// Field of the meander `ε cos(q₀z + φ)` at height `height`, sampled over one period.
    pub fn sample(
        &self,
        q0: f64,
        amplitude: f64,
        phase: f64,
        height: f64,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        let period = 2.0 * PI / q0;
        let pad = (PADDING_SCALES / q0).max(self.options.cutoff_heights * height) + period;
        let path = FilamentPath::sinusoid(
            amplitude,
            q0,
            phase,
            -pad,
            period + pad,
            self.segments_per_period,
            self.current,
        )?;
        let z: Vec<f64> = (0..self.samples)
            .map(|i| period * i as f64 / self.samples as f64)
            .collect();
        let b = field_bz_checked(&path, height, &z, self.options)?;
        Ok((z, b))
    }

    /// Fitted against closed-form amplitude at `q₀d`.
    pub fn check(&self, q0d: f64) -> Result<SinusoidCheck> {
        let q0 = q0d / self.d;
        let eps = self.relative_amplitude * self.d;
        let (z, b) = self.sample(q0, eps, 0.0, self.d)?;
        let (numeric, phase) = harmonic_fit(&z, &b, q0);
        let analytic = single_mode_amplitude(self.current, self.d, eps, q0)?;
        Ok(SinusoidCheck {
            q0d,
            numeric,
            analytic,
            relative_error: (numeric / analytic - 1.0).abs(),
            phase,
        })
    }
}

/// One-sided spectrum estimate on wavenumbers `q_k = 2πk/(L h)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Periodogram {
    pub q: Vec<f64>,
    pub psd: Vec<f64>,
    /// Number of windowed segments averaged.
    pub segments: usize,
}

/// Welch estimate with a periodic Hann window and 50 % overlap.
///
/// Normalised as `P̂(q_k) = h |X_k|² / (π L U)` with `U` the mean squared
/// window, which makes `∫₀^{π/h} P̂ dq` the sample variance. This is the
/// convention in which `∫₀^∞ P(q) dq = σ²` for the roughness spectrum.
pub fn welch_psd(samples: &[f64], h: f64, segment_len: usize) -> Result<Periodogram> {
    if segment_len < 8 || !segment_len.is_multiple_of(2) {
        return Err(invalid(
            "segment_len",
            format!("must be even and at least 8, got {segment_len}"),
        ));
    }
    if samples.len() < segment_len {
        return Err(Error::InsufficientRange(format!(
            "{} samples, one segment needs {segment_len}",
            samples.len()
        )));
    }
    if !(h > 0.0) {
        return Err(invalid("h", format!("must be positive, got {h}")));
    }
    let window: Vec<f64> = (0..segment_len)
        .map(|j| 0.5 * (1.0 - (2.0 * PI * j as f64 / segment_len as f64).cos()))
        .collect();
    let u = window.iter().map(|w| w * w).sum::<f64>() / segment_len as f64;
    let fft = FftPlanner::new().plan_fft_forward(segment_len);
    let bins = segment_len / 2 + 1;
    let mut acc = vec![0.0; bins];
    let mut buf = vec![Complex::new(0.0, 0.0); segment_len];
    let step = segment_len / 2;
    let mut segments = 0;
    let mut start = 0;
    while start + segment_len <= samples.len() {
        for (j, b) in buf.iter_mut().enumerate() {
            *b = Complex::new(samples[start + j] * window[j], 0.0);
        }
        fft.process(&mut buf);
        for (a, x) in acc.iter_mut().zip(&buf) {
            *a += x.norm_sqr();
        }
        segments += 1;
        start += step;
    }
    let norm = h / (PI * segment_len as f64 * u * segments as f64);
    let dq = 2.0 * PI / (segment_len as f64 * h);
    Ok(Periodogram {
        q: (0..bins).map(|k| k as f64 * dq).collect(),
        psd: acc.into_iter().map(|a| a * norm).collect(),
        segments,
    })
}

/// Parameters of the rough-filament ensemble comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoughFilamentSetup {
    pub rough: EdgeRoughness,
    pub d: f64,
    pub current: f64,
    /// Points in each synthesized profile (power of two).
    pub n: usize,
    pub dz: f64,
    pub seeds: usize,
    pub first_seed: u64,
    /// Field sample spacing in heights `d`.
    pub spacing_heights: f64,
    pub segment_len: usize,
    /// Adjacent frequency bins averaged into one comparison band.
    pub band_bins: usize,
    pub qd_range: (f64, f64),
    pub gate: f64,
    pub options: FieldOptions,
}

impl Default for RoughFilamentSetup {
    fn default() -> Self {
        Self {
            rough: EdgeRoughness {
                sigma: 3e-9,
                xi: 20e-9,
                alpha: 0.5,
            },
            d: 2e-6,
            current: 1.0,
            n: 1 << 19,
            dz: 5e-9,
            seeds: 50,
            first_seed: 1,
            spacing_heights: 0.5,
            segment_len: 512,
            band_bins: 10,
            qd_range: (0.3, 3.0),
            gate: 0.10,
            options: FieldOptions::default(),
        }
    }
}

/// Band-averaged comparison of the ensemble spectrum with the filament law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoughFilamentReport {
    pub setup: RoughFilamentSetup,
    /// Centre `qd` of each band.
    pub qd: Vec<f64>,
    pub estimate: Vec<f64>,
    pub analytic: Vec<f64>,
    pub ratio: Vec<f64>,
    pub max_deviation: f64,
    pub periodograms: usize,
    pub passed: bool,
}

impl RoughFilamentReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("qd,psd_estimate_T2m,psd_analytic_T2m,ratio\n");
        for i in 0..self.qd.len() {
            s.push_str(&format!(
                "{:.6e},{:.9e},{:.9e},{:.6}\n",
                self.qd[i], self.estimate[i], self.analytic[i], self.ratio[i]
            ));
        }
        s
    }
}

/// Filament-limit spectrum `(B₀/d)² (qd)⁴K₁²(qd) σ²ξ P̃(α, qξ)` in T²·m.
pub fn filament_spectrum(rough: &EdgeRoughness, d: f64, current: f64, q: f64) -> Result<f64> {
    let b0 = MU0 * current / (2.0 * PI * d);
    let f = ftilde_narrow(q, d)?;
    let a = norm_constant(rough.alpha)?;
    Ok((b0 / d).powi(2)
        * rough.sigma
        * rough.sigma
        * rough.xi
        * ptilde_with(rough.alpha, a, q * rough.xi)
        * f
        * f)
}

/// Field of one synthesized filament, sampled every `spacing_heights·d`
/// across the part of the path with full padding.
pub fn rough_filament_field(setup: &RoughFilamentSetup, seed: u64) -> Result<Vec<f64>> {
    let profile = synthesize(&setup.rough, setup.n, setup.dz, seed)?;
    let path = FilamentPath::from_profile(&profile, setup.rough.xi, setup.current)?;
    let pad = (PADDING_SCALES * setup.rough.xi).max(setup.options.cutoff_heights * setup.d);
    let h = setup.spacing_heights * setup.d;
    let count = ((profile.length() - 2.0 * pad) / h).floor() as usize;
    let z: Vec<f64> = (0..count).map(|i| pad + i as f64 * h).collect();
    field_bz(&path, setup.d, &z, setup.options)
}

/// Ensemble-mean Welch spectrum of the filament field, compared band by
/// band with [`filament_spectrum`] averaged over the same bins.
pub fn rough_filament_check(setup: &RoughFilamentSetup) -> Result<RoughFilamentReport> {
    if setup.seeds == 0 || setup.band_bins == 0 {
        return Err(invalid("seeds", "seeds and band_bins must be positive"));
    }
    let h = setup.spacing_heights * setup.d;
    let grams = (0..setup.seeds as u64)
        .into_par_iter()
        .map(|i| {
            let field = rough_filament_field(setup, setup.first_seed + i)?;
            welch_psd(&field, h, setup.segment_len)
        })
        .collect::<Result<Vec<_>>>()?;
    let q = grams[0].q.clone();
    let periodograms: usize = grams.iter().map(|g| g.segments).sum();
    let mut mean = vec![0.0; q.len()];
    for g in &grams {
        for (m, (p, s)) in mean
            .iter_mut()
            .zip(g.psd.iter().zip(std::iter::repeat(g.segments)))
        {
            *m += p * s as f64 / periodograms as f64;
        }
    }
    let (lo, hi) = setup.qd_range;
    let inside: Vec<usize> = (0..q.len())
        .filter(|&k| q[k] * setup.d >= lo && q[k] * setup.d <= hi)
        .collect();
    let (mut qd, mut estimate, mut analytic, mut ratio) = (vec![], vec![], vec![], vec![]);
    for band in inside.chunks(setup.band_bins) {
        let m = band.len() as f64;
        let e = band.iter().map(|&k| mean[k]).sum::<f64>() / m;
        let a = band
            .iter()
            .map(|&k| filament_spectrum(&setup.rough, setup.d, setup.current, q[k]))
            .sum::<Result<f64>>()?
            / m;
        qd.push(band.iter().map(|&k| q[k] * setup.d).sum::<f64>() / m);
        estimate.push(e);
        analytic.push(a);
        ratio.push(e / a);
    }
    if qd.is_empty() {
        return Err(Error::InsufficientRange(format!(
            "no frequency bins inside qd in [{lo}, {hi}]"
        )));
    }
    let max_deviation = ratio.iter().fold(0.0f64, |m, r| m.max((r - 1.0).abs()));
    Ok(RoughFilamentReport {
        setup: *setup,
        qd,
        estimate,
        analytic,
        ratio,
        max_deviation,
        periodograms,
        passed: max_deviation <= setup.gate,
    })
}
