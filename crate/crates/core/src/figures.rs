//! Curve data for the six standard plots, written as one CSV per curve plus
//! a JSON manifest carrying parameters, overrides and SHA-256 checksums.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::edge_model::{norm_constant, ptilde_with, EdgeRoughness};
use crate::error::{invalid, Error, Result};
use crate::profile_synth::synthesize;
use crate::transfer::{ftilde, WireGeometry};
use crate::trap_noise::{
    log_grid, smallxi_constant, vtilde, Ratios, SampledCurve, REFERENCE_SMALLXI_CONSTANT,
};

/// Crate version recorded in every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Identifier of a standard plot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FigureId {
    /// Roughness spectrum `P̃(qξ)` and two sample profiles.
    RoughnessSpectrum = 2,
    /// Transfer function `f̃²(qd)` for several heights.
    Transfer = 3,
    /// Trap spectrum `S̃(qd)` for several correlation lengths.
    TrapSpectrum = 4,
    /// Trap spectrum for two Hurst exponents.
    HurstComparison = 5,
    /// `Ṽ` against `d/y₀`.
    VarianceVsHeight = 6,
    /// `Ṽ` against `d/ξ` at `d = y₀`.
    VarianceVsCorrelation = 7,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::RoughnessSpectrum,
        FigureId::Transfer,
        FigureId::TrapSpectrum,
        FigureId::HurstComparison,
        FigureId::VarianceVsHeight,
        FigureId::VarianceVsCorrelation,
    ];

    pub fn number(self) -> u32 {
        self as u32
    }

    /// Name of the parameter that distinguishes the curves.
    pub fn family_parameter(self) -> &'static str {
        match self {
            FigureId::RoughnessSpectrum => "alpha",
            FigureId::Transfer => "d_over_y0",
            FigureId::TrapSpectrum => "xi_over_d",
            FigureId::HurstComparison => "alpha",
            FigureId::VarianceVsHeight => "xi_over_d",
            FigureId::VarianceVsCorrelation => "alpha",
        }
    }

    /// Default values of [`FigureId::family_parameter`].
    pub fn default_family(self) -> Vec<f64> {
        match self {
            FigureId::RoughnessSpectrum => vec![0.25, 1.0],
            FigureId::Transfer => vec![10.0, 2.0, 0.6],
            FigureId::TrapSpectrum => vec![33.0, 10.0, 1.0, 0.01],
            FigureId::HurstComparison => vec![1.0, 0.25],
            FigureId::VarianceVsHeight => vec![1.0, 20.0, 0.01],
            FigureId::VarianceVsCorrelation => vec![1.0, 0.5, 0.25],
        }
    }

    /// Default abscissa range and point count.
    pub fn default_grid(self) -> (f64, f64, usize) {
        match self {
            FigureId::RoughnessSpectrum => (1e-2, 1e2, 201),
            FigureId::Transfer => (1e-2, 10.0, 201),
            FigureId::TrapSpectrum | FigureId::HurstComparison => (1e-3, 10.0, 241),
            FigureId::VarianceVsHeight => (0.55, 10.0, 41),
            FigureId::VarianceVsCorrelation => (1e-2, 1e3, 51),
        }
    }
}

impl TryFrom<u32> for FigureId {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.number() == n)
            .ok_or_else(|| invalid("figure", format!("no figure {n}; valid ids are 2 to 7")))
    }
}

/// Changes to a figure's defaults. Every field left `None` or empty keeps the default.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FigureOverrides {
    /// Replaces the default family of curves.
    pub family: Option<Vec<f64>>,
    /// Curves added to the family.
    pub extra: Vec<f64>,
    /// Abscissa range `(lo, hi)`.
    pub range: Option<(f64, f64)>,
    pub points: Option<usize>,
    /// Seed for the sample profiles of the roughness-spectrum figure.
    pub seed: Option<u64>,
}

impl FigureOverrides {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }
}

/// Curves of one figure together with the settings that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub id: FigureId,
    pub family: Vec<f64>,
    pub grid: (f64, f64, usize),
    pub seed: u64,
    pub curves: Vec<SampledCurve>,
}

/// Seed used for the sample profiles unless overridden.
pub const DEFAULT_PROFILE_SEED: u64 = 2;

fn validate_family(id: FigureId, family: &[f64]) -> Result<()> {
    if family.is_empty() {
        return Err(invalid("family", "needs at least one value"));
    }
    for &v in family {
        let ok = match id {
            FigureId::RoughnessSpectrum
            | FigureId::HurstComparison
            | FigureId::VarianceVsCorrelation => v > 0.0 && v <= 1.0,
            FigureId::Transfer => v > 0.5 && v.is_finite(),
            FigureId::TrapSpectrum | FigureId::VarianceVsHeight => v > 0.0 && v.is_finite(),
        };
        if !ok {
            return Err(invalid(
                "family",
                format!(
                    "{} = {v} is out of range for figure {}",
                    id.family_parameter(),
                    id.number()
                ),
            ));
        }
    }
    Ok(())
}

fn tag(v: f64) -> String {
    format!("{v}").replace('.', "p")
}

/// Computes every curve of figure `id`.
pub fn figure_data(id: FigureId, overrides: &FigureOverrides) -> Result<FigureData> {
    let mut family = overrides
        .family
        .clone()
        .unwrap_or_else(|| id.default_family());
    family.extend(overrides.extra.iter().copied());
    validate_family(id, &family)?;
    let (mut lo, mut hi, mut points) = id.default_grid();
    if let Some((l, h)) = overrides.range {
        (lo, hi) = (l, h);
    }
    if let Some(p) = overrides.points {
        points = p;
    }
    if !(lo > 0.0 && hi > lo) || points < 2 {
        return Err(invalid(
            "range",
            format!("need 0 < lo < hi and at least 2 points, got ({lo}, {hi}, {points})"),
        ));
    }
    if id == FigureId::VarianceVsHeight && lo <= 0.5 {
        return Err(invalid("range", format!("d/y0 must exceed 0.5, got {lo}")));
    }
    let grid = log_grid(lo, hi, points);
    let seed = overrides.seed.unwrap_or(DEFAULT_PROFILE_SEED);
    let curves = match id {
        FigureId::RoughnessSpectrum => roughness_curves(&family, &grid, seed)?,
        FigureId::Transfer => transfer_curves(&family, &grid)?,
        FigureId::TrapSpectrum => trap_curves(&family, &[1.0], &grid)?,
        FigureId::HurstComparison => {
            trap_curves(&FigureId::TrapSpectrum.default_family(), &family, &grid)?
        }
        FigureId::VarianceVsHeight => height_curves(&family, &grid)?,
        FigureId::VarianceVsCorrelation => correlation_curves(&family, &grid)?,
    };
    Ok(FigureData {
        id,
        family,
        grid: (lo, hi, points),
        seed,
        curves,
    })
}

fn roughness_curves(alphas: &[f64], grid: &[f64], seed: u64) -> Result<Vec<SampledCurve>> {
    let mut out = Vec::new();
    for &alpha in alphas {
        let a = norm_constant(alpha)?;
        let y = grid.iter().map(|&s| ptilde_with(alpha, a, s)).collect();
        out.push(
            SampledCurve::new(
                format!("ptilde_alpha_{}", tag(alpha)),
                grid.to_vec(),
                y,
                "q_xi",
                "ptilde",
            )?
            .with_meta("alpha", alpha),
        );
    }
    // Sample profiles over 2ξ, cut from a synthesis four times longer.
    let per_xi = 128;
    for &alpha in alphas {
        let rough = EdgeRoughness::new(1.0, 1.0, alpha)?;
        let profile = synthesize(&rough, 8 * per_xi, 1.0 / per_xi as f64, seed)?;
        let keep = 2 * per_xi + 1;
        let x = (0..keep).map(|i| i as f64 / per_xi as f64).collect();
        let y = profile.values[..keep].to_vec();
        out.push(
            SampledCurve::new(
                format!("profile_alpha_{}", tag(alpha)),
                x,
                y,
                "z_over_xi",
                "dy_over_sigma",
            )?
            .with_meta("alpha", alpha)
            .with_meta("seed", seed)
            .with_meta("samples_per_xi", per_xi),
        );
    }
    Ok(out)
}

fn transfer_curves(ratios: &[f64], grid: &[f64]) -> Result<Vec<SampledCurve>> {
    ratios
        .iter()
        .map(|&r| {
            let geom = WireGeometry::from_ratio(r)?;
            let y = grid
                .par_iter()
                .map(|&qd| ftilde(qd, &geom).map(|f| f * f))
                .collect::<Result<Vec<_>>>()?;
            Ok(SampledCurve::new(
                format!("ftilde2_d_over_y0_{}", tag(r)),
                grid.to_vec(),
                y,
                "qd",
                "ftilde2",
            )?
            .with_meta("d_over_y0", r))
        })
        .collect()
}

/// `S̃ = P̃ f̃²` at `d = 2y₀` for every pair of `ξ/d` and `α`.
fn trap_curves(xi_over_d: &[f64], alphas: &[f64], grid: &[f64]) -> Result<Vec<SampledCurve>> {
    let geom = WireGeometry::from_ratio(2.0)?;
    let f2 = grid
        .par_iter()
        .map(|&qd| ftilde(qd, &geom).map(|f| f * f))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for &alpha in alphas {
        let a = norm_constant(alpha)?;
        for &r in xi_over_d {
            let y = grid
                .iter()
                .zip(&f2)
                .map(|(&qd, &f)| ptilde_with(alpha, a, qd * r) * f)
                .collect();
            out.push(
                SampledCurve::new(
                    format!("stilde_alpha_{}_xi_over_d_{}", tag(alpha), tag(r)),
                    grid.to_vec(),
                    y,
                    "qd",
                    "stilde",
                )?
                .with_meta("alpha", alpha)
                .with_meta("xi_over_d", r)
                .with_meta("d_over_y0", 2.0),
            );
        }
    }
    Ok(out)
}

fn variance_curve(
    name: String,
    x: &[f64],
    ratios: impl Fn(f64) -> Ratios + Sync,
    x_label: &str,
) -> Result<SampledCurve> {
    let y = x
        .par_iter()
        .map(|&v| vtilde(ratios(v)))
        .collect::<Result<Vec<_>>>()?;
    SampledCurve::new(name, x.to_vec(), y, x_label, "vtilde")
}

fn height_curves(xi_over_d: &[f64], grid: &[f64]) -> Result<Vec<SampledCurve>> {
    let mut out = Vec::new();
    for alpha in [1.0, 0.25] {
        for &r in xi_over_d {
            let curve = variance_curve(
                format!("vtilde_alpha_{}_xi_over_d_{}", tag(alpha), tag(r)),
                grid,
                |d_over_y0| Ratios {
                    d_over_y0,
                    d_over_xi: 1.0 / r,
                    alpha,
                },
                "d_over_y0",
            )?;
            out.push(curve.with_meta("alpha", alpha).with_meta("xi_over_d", r));
        }
    }
    Ok(out)
}

fn correlation_curves(alphas: &[f64], grid: &[f64]) -> Result<Vec<SampledCurve>> {
    let mut out = Vec::new();
    for &alpha in alphas {
        let curve = variance_curve(
            format!("vtilde_alpha_{}", tag(alpha)),
            grid,
            |d_over_xi| Ratios {
                d_over_y0: 1.0,
                d_over_xi,
                alpha,
            },
            "d_over_xi",
        )?;
        out.push(curve.with_meta("alpha", alpha).with_meta("d_over_y0", 1.0));
    }
    let c = smallxi_constant(1.0)?;
    let y = grid
        .iter()
        .map(|&r| REFERENCE_SMALLXI_CONSTANT / r)
        .collect();
    out.push(
        SampledCurve::new("smallxi_asymptote", grid.to_vec(), y, "d_over_xi", "vtilde")?
            .with_meta("law", "vtilde = c xi/d, valid for d >> xi")
            .with_meta("c", REFERENCE_SMALLXI_CONSTANT)
            .with_meta("c_computed", format!("{c:.6}")),
    );
    Ok(out)
}

/// One written file in a [`Manifest`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub curve: String,
    pub file: String,
    pub rows: usize,
    pub sha256: String,
}

/// Description of one figure's output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub figure: u32,
    pub version: String,
    pub family_parameter: String,
    pub family: Vec<f64>,
    pub grid: (f64, f64, usize),
    pub seed: u64,
    pub overrides: FigureOverrides,
    pub files: Vec<ManifestEntry>,
}

/// Hex SHA-256 of `bytes`.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// CSV text of a curve with the version line on top.
pub fn curve_csv(curve: &SampledCurve) -> String {
    format!("# wirenoise {VERSION}\n{}", curve.to_csv())
}

/// Writes `fig<id>_<curve>.csv` files and `fig<id>_manifest.json` into `dir`.
pub fn write_figure(
    id: FigureId,
    overrides: &FigureOverrides,
    dir: &Path,
) -> Result<(Manifest, PathBuf)> {
    let data = figure_data(id, overrides)?;
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    for curve in &data.curves {
        let file = format!("fig{}_{}.csv", id.number(), curve.name);
        let text = curve_csv(curve);
        fs::write(dir.join(&file), &text)?;
        files.push(ManifestEntry {
            curve: curve.name.clone(),
            file,
            rows: curve.x.len(),
            sha256: sha256_hex(text.as_bytes()),
        });
    }
    let manifest = Manifest {
        figure: id.number(),
        version: VERSION.to_string(),
        family_parameter: id.family_parameter().to_string(),
        family: data.family,
        grid: data.grid,
        seed: data.seed,
        overrides: overrides.clone(),
        files,
    };
    let path = dir.join(format!("fig{}_manifest.json", id.number()));
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(&path, json)?;
    Ok((manifest, path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in FigureId::ALL {
            assert_eq!(FigureId::try_from(id.number()).unwrap(), id);
        }
        assert!(FigureId::try_from(1).is_err());
        assert!(FigureId::try_from(8).is_err());
    }

    #[test]
    fn roughness_figure_has_spectra_and_profiles() {
        let d = figure_data(FigureId::RoughnessSpectrum, &FigureOverrides::default()).unwrap();
        let names: Vec<_> = d.curves.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "ptilde_alpha_0p25",
                "ptilde_alpha_1",
                "profile_alpha_0p25",
                "profile_alpha_1"
            ]
        );
        let profile = &d.curves[2];
        assert!((profile.x.last().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn extra_value_adds_one_curve() {
        let base = figure_data(FigureId::Transfer, &FigureOverrides::default()).unwrap();
        let more = figure_data(
            FigureId::Transfer,
            &FigureOverrides {
                extra: vec![5.0],
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(more.curves.len(), base.curves.len() + 1);
        assert_eq!(more.curves.last().unwrap().name, "ftilde2_d_over_y0_5");
    }

    #[test]
    fn bad_family_value_is_rejected() {
        let o = FigureOverrides {
            family: Some(vec![0.4]),
            ..Default::default()
        };
        assert!(figure_data(FigureId::Transfer, &o).is_err());
    }
}
