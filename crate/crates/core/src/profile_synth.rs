//! Random Gaussian edge profiles with a prescribed stretched-exponential
//! autocorrelation, and the estimators that recover `σ`, `C(r)`, `G(r)`, `α`
//! and `ξ` from sampled data.
//!
//! Synthesis draws `2n` complex normal deviates from a ChaCha20 stream seeded
//! with `seed_from_u64(seed)`, in the order `re₀, im₀, re₁, im₁, …`, colours
//! them with the square root of the circulant eigenvalues and keeps the real
//! part of the first `n` points of the transform. The stream and the FFT are
//! both platform independent, so a seed fixes the profile.

use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::edge_model::{autocorrelation, model_spectrum, EdgeRoughness};
use crate::error::{invalid, Error, Result};

/// Smallest sample count accepted by [`synthesize`].
pub const MIN_SAMPLES: usize = 256;

/// Negative circulant eigenvalues smaller than this fraction of the largest
/// are rounding noise and are clamped to zero.
const EIGEN_CLAMP: f64 = 1e-10;

/// How a profile was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SynthesisMethod {
    /// Exact covariance via circulant embedding.
    CirculantEmbedding,
    /// Periodic noise coloured by the model spectrum.
    SpectralFilter,
    /// Combination of other profiles.
    Combined,
    /// Read from a file without synthesis metadata.
    Measured,
}

/// Sampled displacement `δy(z)` of an edge or centre line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeProfile {
    pub dz: f64,
    pub values: Vec<f64>,
    pub seed: Option<u64>,
    pub target: Option<EdgeRoughness>,
    pub method: SynthesisMethod,
}

impl EdgeProfile {
    pub fn new(dz: f64, values: Vec<f64>) -> Result<Self> {
        if !(dz > 0.0 && dz.is_finite()) {
            return Err(invalid("dz", format!("must be positive, got {dz}")));
        }
        if values.len() < 2 {
            return Err(invalid("values", "need at least two samples"));
        }
        Ok(Self {
            dz,
            values,
            seed: None,
            target: None,
            method: SynthesisMethod::Measured,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.dz * self.values.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn rms(&self) -> f64 {
        let m = self.mean();
        (self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / self.values.len() as f64)
            .sqrt()
    }

    /// Two-column CSV (`z_m,dy_m`) preceded by `#` metadata lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# dz={}", self.dz).unwrap();
        if let Some(seed) = self.seed {
            writeln!(out, "# seed={seed}").unwrap();
        }
        if let Some(t) = &self.target {
            writeln!(out, "# sigma={}", t.sigma).unwrap();
            writeln!(out, "# xi={}", t.xi).unwrap();
            writeln!(out, "# alpha={}", t.alpha).unwrap();
        }
        writeln!(out, "# method={}", method_name(self.method)).unwrap();
        out.push_str("z_m,dy_m\n");
        for (i, v) in self.values.iter().enumerate() {
            writeln!(out, "{},{}", i as f64 * self.dz, v).unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut dz = None;
        let mut seed = None;
        let (mut sigma, mut xi, mut alpha) = (None, None, None);
        let mut method = SynthesisMethod::Measured;
        let mut z = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                let Some((key, val)) = meta.trim().split_once('=') else {
                    continue;
                };
                let num = || {
                    val.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("line {}: `{key}`: {e}", lineno + 1)))
                };
                match key.trim() {
                    "dz" => dz = Some(num()?),
                    "sigma" => sigma = Some(num()?),
                    "xi" => xi = Some(num()?),
                    "alpha" => alpha = Some(num()?),
                    "seed" => {
                        seed =
                            Some(val.trim().parse::<u64>().map_err(|e| {
                                Error::Parse(format!("line {}: seed: {e}", lineno + 1))
                            })?)
                    }
                    "method" => method = parse_method(val.trim())?,
                    _ => {}
                }
                continue;
            }
            if line.starts_with("z_m") {
                continue;
            }
            let (a, b) = line.split_once(',').ok_or_else(|| {
                Error::Parse(format!("line {}: expected two columns", lineno + 1))
            })?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
            };
            z.push(parse(a)?);
            values.push(parse(b)?);
        }
        let dz = match dz {
            Some(dz) => dz,
            None if z.len() >= 2 => z[1] - z[0],
            None => return Err(Error::Parse("cannot determine sample spacing".into())),
        };
        let mut profile = EdgeProfile::new(dz, values)?;
        profile.seed = seed;
        profile.method = method;
        if let (Some(s), Some(x), Some(a)) = (sigma, xi, alpha) {
            profile.target = Some(EdgeRoughness::new(s, x, a)?);
        }
        Ok(profile)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}

fn method_name(m: SynthesisMethod) -> &'static str {
    match m {
        SynthesisMethod::CirculantEmbedding => "circulant_embedding",
        SynthesisMethod::SpectralFilter => "spectral_filter",
        SynthesisMethod::Combined => "combined",
        SynthesisMethod::Measured => "measured",
    }
}

fn parse_method(s: &str) -> Result<SynthesisMethod> {
    Ok(match s {
        "circulant_embedding" => SynthesisMethod::CirculantEmbedding,
        "spectral_filter" => SynthesisMethod::SpectralFilter,
        "combined" => SynthesisMethod::Combined,
        "measured" => SynthesisMethod::Measured,
        other => return Err(Error::Parse(format!("unknown synthesis method `{other}`"))),
    })
}

/// Eigenvalues of the `2n` circulant built from `C(k·dz)`, `k = 0..=n`.
fn circulant_eigenvalues(rough: &EdgeRoughness, n: usize, dz: f64) -> Vec<f64> {
    let m = 2 * n;
    let mut row: Vec<Complex<f64>> = (0..m)
        .map(|k| {
            let lag = k.min(m - k) as f64 * dz;
            Complex::new(autocorrelation(rough, lag), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut row);
    row.into_iter().map(|c| c.re).collect()
}

/// Eigenvalues that reproduce the model spectrum on the periodic grid
/// `q_k = 2πk/(2n·dz)`.
fn spectral_eigenvalues(rough: &EdgeRoughness, n: usize, dz: f64) -> Result<Vec<f64>> {
    let m = 2 * n;
    let dq = 2.0 * std::f64::consts::PI / (m as f64 * dz);
    (0..m)
        .map(|k| {
            let q = k.min(m - k) as f64 * dq;
            Ok(m as f64 * model_spectrum(rough, q)? * dq / 2.0)
        })
        .collect()
}

/// Draws one profile of length `n` from circulant eigenvalues `lambda`.
fn colour_noise(lambda: &[f64], n: usize, seed: u64) -> Vec<f64> {
    let m = lambda.len();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut buf: Vec<Complex<f64>> = lambda
        .iter()
        .map(|&l| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex::new(re, im) * (l.max(0.0) / m as f64).sqrt()
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    buf.truncate(n);
    buf.into_iter().map(|c| c.re).collect()
}

/// Gaussian profile of `n` samples spaced `dz` whose ensemble
/// autocorrelation is `C(r)` of `rough`.
///
/// `n` must be a power of two, at least [`MIN_SAMPLES`], and the record must
/// span at least `8ξ`. Circulant embedding is tried first; when its
/// eigenvalues are significantly negative the model spectrum is used to
/// colour the noise instead.
pub fn synthesize(rough: &EdgeRoughness, n: usize, dz: f64, seed: u64) -> Result<EdgeProfile> {
    if n < MIN_SAMPLES || !n.is_power_of_two() {
        return Err(invalid(
            "n",
            format!("must be a power of two >= {MIN_SAMPLES}, got {n}"),
        ));
    }
    if !(dz > 0.0 && dz.is_finite()) {
        return Err(invalid("dz", format!("must be positive, got {dz}")));
    }
    if (n as f64) * dz < 8.0 * rough.xi {
        return Err(invalid(
            "n",
            format!(
                "record length {:.3e} m is shorter than 8 correlation lengths ({:.3e} m)",
                n as f64 * dz,
                8.0 * rough.xi
            ),
        ));
    }

    let mut lambda = circulant_eigenvalues(rough, n, dz);
    let peak = lambda.iter().cloned().fold(0.0, f64::max);
    let lowest = lambda.iter().cloned().fold(f64::INFINITY, f64::min);
    let method = if lowest >= -EIGEN_CLAMP * peak {
        SynthesisMethod::CirculantEmbedding
    } else {
        lambda = spectral_eigenvalues(rough, n, dz)?;
        SynthesisMethod::SpectralFilter
    };
    if !lambda.iter().all(|l| l.is_finite()) || lambda.iter().all(|&l| l <= 0.0) {
        return Err(Error::Embedding(format!(
            "no valid covariance factorisation for sigma={}, xi={}, alpha={} at n={n}, dz={dz}",
            rough.sigma, rough.xi, rough.alpha
        )));
    }

    Ok(EdgeProfile {
        dz,
        values: colour_noise(&lambda, n, seed),
        seed: Some(seed),
        target: Some(*rough),
        method,
    })
}

/// `count` profiles with seeds `seed, seed + 1, …`, synthesised in parallel.
pub fn synthesize_ensemble(
    rough: &EdgeRoughness,
    n: usize,
    dz: f64,
    seed: u64,
    count: usize,
) -> Result<Vec<EdgeProfile>> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| synthesize(rough, n, dz, seed.wrapping_add(i)))
        .collect()
}

/// Centre-line displacement `½(f_L + f_R)` of a wire with the given edges.
pub fn combine_edges(left: &EdgeProfile, right: &EdgeProfile) -> Result<EdgeProfile> {
    if left.len() != right.len() {
        return Err(Error::ShapeMismatch(format!(
            "edge lengths differ: {} vs {}",
            left.len(),
            right.len()
        )));
    }
    if (left.dz - right.dz).abs() > 1e-12 * left.dz {
        return Err(Error::ShapeMismatch(format!(
            "edge spacings differ: {} vs {}",
            left.dz, right.dz
        )));
    }
    let values = left
        .values
        .iter()
        .zip(&right.values)
        .map(|(l, r)| 0.5 * (l + r))
        .collect();
    Ok(EdgeProfile {
        dz: left.dz,
        values,
        seed: None,
        target: None,
        method: SynthesisMethod::Combined,
    })
}

/// Lag statistics of a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileStatistics {
    pub sigma_hat: f64,
    /// Lags `k·dz`, `k = 0..=max_lag/dz`.
    pub lags: Vec<f64>,
    pub c_hat: Vec<f64>,
    pub g_hat: Vec<f64>,
}

/// Sample autocorrelation `Ĉ(k) = Σ (yᵢ − ȳ)(yᵢ₊ₖ − ȳ)/(n − k)` and
/// `Ĝ(k) = √(2σ̂² − 2Ĉ(k))` up to `max_lag`, with `σ̂² = Ĉ(0)`.
pub fn estimate_statistics(profile: &EdgeProfile, max_lag: f64) -> Result<ProfileStatistics> {
    let n = profile.len();
    let limit = (n / 4) as f64 * profile.dz;
    if !(max_lag >= 0.0) || max_lag > limit * (1.0 + 1e-12) {
        return Err(invalid(
            "max_lag",
            format!("must lie in [0, n·dz/4 = {limit:.3e}], got {max_lag:.3e}"),
        ));
    }
    let kmax = ((max_lag / profile.dz) + 1e-9).floor() as usize;
    let mean = profile.mean();
    let centred: Vec<f64> = profile.values.iter().map(|v| v - mean).collect();
    let mut c_hat: Vec<f64> = (0..=kmax)
        .map(|k| {
            let s: f64 = centred[..n - k]
                .iter()
                .zip(&centred[k..])
                .map(|(a, b)| a * b)
                .sum();
            s / (n - k) as f64
        })
        .collect();
    let sigma_hat = c_hat[0].sqrt();
    c_hat[0] = sigma_hat * sigma_hat;
    let var = c_hat[0];
    let g_hat = c_hat
        .iter()
        .map(|&c| (2.0 * var - 2.0 * c).max(0.0).sqrt())
        .collect();
    Ok(ProfileStatistics {
        sigma_hat,
        lags: (0..=kmax).map(|k| k as f64 * profile.dz).collect(),
        c_hat,
        g_hat,
    })
}

/// Result of [`fit_hurst`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HurstFit {
    pub alpha_hat: f64,
    pub xi_hat: f64,
    /// rms residual of the log-log fit.
    pub residual: f64,
    /// Number of lags used in the fit.
    pub points: usize,
}

/// Minimum number of lags below half the correlation length.
pub const MIN_FIT_LAGS: usize = 8;

/// Estimates `α` from the log-log slope of `Ĝ(r)` over `[dz, ξ̂/2]`, where
/// `ξ̂` is the first lag at which `Ĝ` reaches `(1 − 1/e)·√2·σ̂`.
///
/// The profile must resolve at least [`MIN_FIT_LAGS`] lags below half the
/// correlation length (the target one when known, otherwise `ξ̂`).
pub fn fit_hurst(profile: &EdgeProfile) -> Result<HurstFit> {
    let max_lag = (profile.len() / 4) as f64 * profile.dz;
    let stats = estimate_statistics(profile, max_lag)?;
    let threshold = (1.0 - (-1.0f64).exp()) * std::f64::consts::SQRT_2 * stats.sigma_hat;
    let k_xi = stats
        .g_hat
        .iter()
        .position(|&g| g >= threshold)
        .filter(|&k| k > 0)
        .ok_or_else(|| {
            Error::InsufficientRange("height correlation never saturates within n/4 lags".into())
        })?;
    let xi_hat = stats.lags[k_xi];

    let reference = profile.target.map_or(xi_hat, |t| t.xi);
    let resolved = ((0.5 * reference / profile.dz).ceil() as usize).saturating_sub(1);
    if resolved < MIN_FIT_LAGS {
        return Err(Error::InsufficientRange(format!(
            "only {resolved} lags below half the correlation length ({:.3e} m); need {MIN_FIT_LAGS}",
            0.5 * reference
        )));
    }

    let (xs, ys): (Vec<f64>, Vec<f64>) = stats
        .lags
        .iter()
        .zip(&stats.g_hat)
        .skip(1)
        .take_while(|(&r, _)| r <= 0.5 * xi_hat * (1.0 + 1e-12))
        .filter(|(_, &g)| g > 0.0)
        .map(|(&r, &g)| (r.ln(), g.ln()))
        .unzip();
    if xs.len() < 2 {
        return Err(Error::InsufficientRange(format!(
            "fit range [dz, xi_hat/2] = [{:.3e}, {:.3e}] m holds {} lags",
            profile.dz,
            0.5 * xi_hat,
            xs.len()
        )));
    }
    let np = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / np;
    let my = ys.iter().sum::<f64>() / np;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / np)
        .sqrt();
    Ok(HurstFit {
        alpha_hat: slope,
        xi_hat,
        residual,
        points: xs.len(),
    })
}
