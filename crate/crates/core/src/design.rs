//! Design limits implied by a roughness budget: how close a trap may sit to
//! its wire, how much current the wire carries there, and the resulting
//! gradient, transverse frequency, ground-state size and the temperature
//! scale of the residual potential roughness.
//!
//! Every output is assembled from [`Quantity`] values, so a formula with the
//! wrong dimensions is rejected when the result is built.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::edge_model::EdgeRoughness;
use crate::error::{invalid, Result};
use crate::transfer::WireGeometry;
use crate::trap_noise::{
    field_variance, smallxi_constant, TrapContext, REFERENCE_SMALLXI_CONSTANT,
};
use crate::units::{Dim, Quantity, AMU, HBAR, K_B, MU0, MU_B, RB87_MASS_AMU};

/// Heat-flow constant `κ` squared has dimension A² m⁻³.
const KAPPA_SQUARED: Dim = Dim([-3, 0, 0, 2, 0]);
const ACTION: Dim = Dim([2, 1, -1, 0, 0]);
const ENTROPY: Dim = Dim([2, 1, -2, 0, -1]);

/// Trapped atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpecies {
    pub label: String,
    /// Mass (kg).
    pub mass: f64,
    /// Magnetic moment along the field (J/T).
    pub mu_z: f64,
}

impl AtomSpecies {
    pub fn new(label: impl Into<String>, mass: f64, mu_z: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(invalid("mass", format!("must be positive, got {mass}")));
        }
        if !(mu_z > 0.0) {
            return Err(invalid("mu_z", format!("must be positive, got {mu_z}")));
        }
        Ok(Self {
            label: label.into(),
            mass,
            mu_z,
        })
    }

    /// ⁸⁷Rb in `F = 2, m_F = 2`: `g_F m_F = 1`, so `μ_z = μ_B`.
    pub fn rb87() -> Self {
        Self {
            label: "87Rb F=2 mF=2".into(),
            mass: RB87_MASS_AMU * AMU,
            mu_z: MU_B,
        }
    }
}

/// Inputs of the design calculation, all SI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignInput {
    pub rough: EdgeRoughness,
    /// Wire thickness `x₀` (m).
    pub x0: f64,
    /// Heat-flow constant `κ` (A m^{-3/2}).
    pub kappa: f64,
    /// Largest tolerable field variance (T²).
    pub v_max: f64,
    /// Axial bias field `B_z` (T).
    pub bias_z: f64,
    pub atom: AtomSpecies,
}

impl DesignInput {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("x0", self.x0),
            ("kappa", self.kappa),
            ("v_max", self.v_max),
            ("bias_z", self.bias_z),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                let name: &'static str = match name {
                    "x0" => "x0",
                    "kappa" => "kappa",
                    "v_max" => "v_max",
                    _ => "bias_z",
                };
                return Err(invalid(name, format!("must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// Outputs of [`design_limits`], all SI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignResult {
    /// Closest approach `d_min` (m).
    pub d_min: f64,
    /// Current at `d_min` with `y₀ = d_min` (A).
    pub i_max: f64,
    /// Radial gradient at `d_min` (T/m).
    pub b_grad_max: f64,
    /// Transverse trap frequency (Hz).
    pub f_max: f64,
    /// rms width `√(ħ/(2mω))` of the transverse ground state (m).
    pub ground_state_size: f64,
    /// `μ_z √V_max / k_B` (K).
    pub roughness_temperature: f64,
    /// Constant `c` used for `d_min`.
    pub smallxi_constant: f64,
    pub warnings: Vec<String>,
}

impl DesignResult {
    /// Builds a result from dimension-tagged quantities, rejecting any whose
    /// dimension does not match its slot.
    #[allow(clippy::too_many_arguments)]
    pub fn from_quantities(
        d_min: Quantity,
        i_max: Quantity,
        b_grad_max: Quantity,
        f_max: Quantity,
        ground_state_size: Quantity,
        roughness_temperature: Quantity,
        smallxi_constant: f64,
        warnings: Vec<String>,
    ) -> Result<Self> {
        Ok(Self {
            d_min: d_min.expect("d_min", Dim::LENGTH)?,
            i_max: i_max.expect("i_max", Dim::CURRENT)?,
            b_grad_max: b_grad_max.expect("b_grad_max", Dim::FIELD_GRADIENT)?,
            f_max: f_max.expect("f_max", Dim::FREQUENCY)?,
            ground_state_size: ground_state_size.expect("ground_state_size", Dim::LENGTH)?,
            roughness_temperature: roughness_temperature
                .expect("roughness_temperature", Dim::TEMPERATURE)?,
            smallxi_constant,
            warnings,
        })
    }

    /// Geometry of the wire at the design point (`y₀ = d = d_min`).
    pub fn geometry(&self, x0: f64) -> Result<WireGeometry> {
        WireGeometry::new(self.d_min, x0, self.d_min, self.i_max)
    }
}

impl fmt::Display for DesignResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "closest approach d_min      {:>10.4} um",
            self.d_min * 1e6
        )?;
        writeln!(
            f,
            "maximum current I_max       {:>10.4} mA",
            self.i_max * 1e3
        )?;
        writeln!(
            f,
            "maximum gradient B'_max     {:>10.4} T/cm",
            self.b_grad_max * 1e-2
        )?;
        writeln!(
            f,
            "transverse frequency f_max  {:>10.4} kHz",
            self.f_max * 1e-3
        )?;
        writeln!(
            f,
            "ground-state size           {:>10.4} nm",
            self.ground_state_size * 1e9
        )?;
        writeln!(
            f,
            "roughness temperature       {:>10.4} nK",
            self.roughness_temperature * 1e9
        )?;
        write!(
            f,
            "small-xi constant c         {:>10.6}",
            self.smallxi_constant
        )?;
        for w in &self.warnings {
            write!(f, "\nwarning: {w}")?;
        }
        Ok(())
    }
}

/// Where the constant `c` for [`design_limits`] comes from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum SmallXiSource {
    /// Computed by quadrature for `y₀ = d`.
    #[default]
    Computed,
    /// The rounded reference value 0.274.
    Reference,
    /// A caller-supplied value.
    Fixed(f64),
}

impl SmallXiSource {
    pub fn value(self) -> Result<f64> {
        match self {
            SmallXiSource::Computed => smallxi_constant(1.0),
            SmallXiSource::Reference => Ok(REFERENCE_SMALLXI_CONSTANT),
            SmallXiSource::Fixed(c) if c > 0.0 => Ok(c),
            SmallXiSource::Fixed(c) => Err(invalid(
                "smallxi_constant",
                format!("must be positive, got {c}"),
            )),
        }
    }
}

/// `I_max = κ y₀ √x₀`.
pub fn max_current(kappa: f64, y0: f64, x0: f64) -> f64 {
    kappa * y0 * x0.sqrt()
}

/// Design limits for a wire of width equal to the trap height.
///
/// `d_min = [c σ²ξ (μ₀κ/2π)² x₀ / V_max]^{1/3}`, `B′ = μ₀ I_max/(2π d_min²)`,
/// `f_max = (1/2π) B′ √(μ_z/(m B_z))`. A warning is attached when `d_min` is
/// less than ten correlation lengths, where the small-`ξ` law stops holding.
pub fn design_limits(input: &DesignInput, smallxi_constant: f64) -> Result<DesignResult> {
    input.validate()?;
    if !(smallxi_constant > 0.0) {
        return Err(invalid(
            "smallxi_constant",
            format!("must be positive, got {smallxi_constant}"),
        ));
    }
    let c = Quantity::scalar(smallxi_constant);
    let sigma = Quantity::new(input.rough.sigma, Dim::LENGTH);
    let xi = Quantity::new(input.rough.xi, Dim::LENGTH);
    let x0 = Quantity::new(input.x0, Dim::LENGTH);
    let kappa2 = Quantity::new(input.kappa * input.kappa, KAPPA_SQUARED);
    let v_max = Quantity::new(input.v_max, Dim::FIELD_VARIANCE);
    let bias = Quantity::new(input.bias_z, Dim::FIELD);
    let mu0 = Quantity::new(MU0, Dim::PERMEABILITY);
    let mu_z = Quantity::new(input.atom.mu_z, Dim::MAGNETIC_MOMENT);
    let mass = Quantity::new(input.atom.mass, Dim::MASS);
    let hbar = Quantity::new(HBAR, ACTION);
    let k_b = Quantity::new(K_B, ENTROPY);
    let inv_2pi = 1.0 / (2.0 * PI);

    let d_min = (c * sigma * sigma * xi * (mu0 * inv_2pi).powi(2) * kappa2 * x0 / v_max).cbrt()?;
    let i_max = (kappa2 * d_min * d_min * x0).sqrt()?;
    let grad = mu0 * i_max * inv_2pi / (d_min * d_min);
    let f_max = grad * (mu_z / (mass * bias)).sqrt()? * inv_2pi;
    let omega = f_max * (2.0 * PI);
    let size = (hbar / (mass * omega * 2.0)).sqrt()?;
    let temperature = mu_z * v_max.sqrt()? / k_b;

    let mut warnings = Vec::new();
    if d_min.value < 10.0 * input.rough.xi {
        warnings.push(format!(
            "d_min = {:.3e} m is less than 10 xi = {:.3e} m; the small-correlation-length law is not reliable",
            d_min.value,
            10.0 * input.rough.xi
        ));
    }
    if input.x0 >= d_min.value / 5.0 {
        warnings.push(format!(
            "wire thickness {:.3e} m is not small compared with d_min = {:.3e} m",
            input.x0, d_min.value
        ));
    }

    DesignResult::from_quantities(
        d_min,
        i_max,
        grad,
        f_max,
        size,
        temperature,
        smallxi_constant,
        warnings,
    )
}

/// Field variance at the design point from the full quadrature, for
/// comparison with `V_max`.
pub fn closure_variance(input: &DesignInput, result: &DesignResult) -> Result<f64> {
    let ctx = TrapContext::new(input.rough, result.geometry(input.x0)?, input.atom.mu_z)?;
    field_variance(&ctx)
}

/// [`design_limits`] over a list of roughness amplitudes, in parallel.
pub fn sweep_sigma(
    input: &DesignInput,
    sigmas: &[f64],
    smallxi_constant: f64,
) -> Result<Vec<DesignResult>> {
    sigmas
        .par_iter()
        .map(|&s| {
            let mut inp = input.clone();
            inp.rough = EdgeRoughness::new(s, input.rough.xi, input.rough.alpha)?;
            design_limits(&inp, smallxi_constant)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_input() -> DesignInput {
        DesignInput {
            rough: EdgeRoughness::new(3e-9, 20e-9, 0.5).unwrap(),
            x0: 1e-6,
            kappa: 3e7,
            v_max: 1e-7 * 1e-7,
            bias_z: 0.5e-4,
            atom: AtomSpecies::rb87(),
        }
    }

    #[test]
    fn max_current_scalings() {
        let i = max_current(3e7, 6e-6, 1e-6);
        assert!((i - 0.18).abs() < 1e-12);
        assert!((max_current(3e7, 12e-6, 1e-6) / i - 2.0).abs() < 1e-12);
        assert!((max_current(3e7, 6e-6, 4e-6) / i - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gradient_identity() {
        let r = design_limits(&reference_input(), 0.274).unwrap();
        let back = r.b_grad_max * r.d_min * r.d_min * 2.0 * PI / MU0;
        assert!((back / r.i_max - 1.0).abs() < 1e-14);
    }

    #[test]
    fn power_laws() {
        let base = design_limits(&reference_input(), 0.274).unwrap();
        let mut inp = reference_input();
        inp.v_max *= 8.0;
        let r = design_limits(&inp, 0.274).unwrap();
        assert!((r.d_min / base.d_min - 0.5).abs() < 1e-14);
        let mut inp = reference_input();
        inp.rough.sigma *= 8f64.sqrt();
        let r = design_limits(&inp, 0.274).unwrap();
        assert!((r.d_min / base.d_min - 2.0).abs() < 1e-13);
        assert!((r.b_grad_max / base.b_grad_max - 0.5).abs() < 1e-13);
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let l = Quantity::new(1.0, Dim::LENGTH);
        let bad = DesignResult::from_quantities(l, l, l, l, l, l, 0.274, vec![]);
        assert!(bad.is_err());
    }

    #[test]
    fn close_trap_warns() {
        let mut inp = reference_input();
        inp.rough.xi = 20e-6;
        let r = design_limits(&inp, 0.274).unwrap();
        assert!(r.warnings.iter().any(|w| w.contains("10 xi")));
    }
}
