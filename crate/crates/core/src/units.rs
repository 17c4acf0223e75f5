//! Physical constants, a small dimension-tag system, and unit-suffix parsing.
//!
//! Everything inside the crate is stored in SI. Suffixes are only accepted
//! at the configuration boundary, and quantities that pass through the
//! design calculator carry a [`Dim`] tag so that a formula producing the
//! wrong dimension fails at construction time.

use std::fmt;
use std::ops::{Div, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// CODATA 2018 exact or recommended values.
/// Vacuum permeability (N A⁻²).
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Reduced Planck constant (J s).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Bohr magneton (J T⁻¹).
pub const MU_B: f64 = 9.274_010_078_3e-24;
/// Boltzmann constant (J K⁻¹), exact.
pub const K_B: f64 = 1.380_649e-23;
/// Unified atomic mass unit (kg).
pub const AMU: f64 = 1.660_539_066_60e-27;
/// ⁸⁷Rb atomic mass (u).
pub const RB87_MASS_AMU: f64 = 86.909_180_520;

/// Exponents of (metre, kilogram, second, ampere, kelvin).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dim(pub [i8; 5]);

impl Dim {
    pub const NONE: Dim = Dim([0, 0, 0, 0, 0]);
    pub const LENGTH: Dim = Dim([1, 0, 0, 0, 0]);
    pub const MASS: Dim = Dim([0, 1, 0, 0, 0]);
    pub const TIME: Dim = Dim([0, 0, 1, 0, 0]);
    pub const CURRENT: Dim = Dim([0, 0, 0, 1, 0]);
    pub const TEMPERATURE: Dim = Dim([0, 0, 0, 0, 1]);
    pub const FREQUENCY: Dim = Dim([0, 0, -1, 0, 0]);
    /// kg s⁻² A⁻¹
    pub const FIELD: Dim = Dim([0, 1, -2, -1, 0]);
    pub const FIELD_GRADIENT: Dim = Dim([-1, 1, -2, -1, 0]);
    pub const FIELD_VARIANCE: Dim = Dim([0, 2, -4, -2, 0]);
    pub const ENERGY: Dim = Dim([2, 1, -2, 0, 0]);
    /// J T⁻¹ = A m²
    pub const MAGNETIC_MOMENT: Dim = Dim([2, 0, 0, 1, 0]);
    /// A m^{-3/2} cannot be expressed with integer exponents; it is tracked
    /// through `I_max = κ y₀ √x₀` as a plain current.
    pub const PERMEABILITY: Dim = Dim([1, 1, -2, -2, 0]);

    pub fn powi(self, p: i8) -> Dim {
        let mut e = self.0;
        for v in e.iter_mut() {
            *v *= p;
        }
        Dim(e)
    }

    /// Integer root, if every exponent is divisible by `k`.
    pub fn root(self, k: i8) -> Option<Dim> {
        let mut e = self.0;
        for v in e.iter_mut() {
            if *v % k != 0 {
                return None;
            }
            *v /= k;
        }
        Some(Dim(e))
    }
}

impl Mul for Dim {
    type Output = Dim;
    // Multiplying quantities adds their exponents.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Dim) -> Dim {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(rhs.0) {
            *a += b;
        }
        Dim(e)
    }
}

impl Div for Dim {
    type Output = Dim;
    fn div(self, rhs: Dim) -> Dim {
        self * rhs.powi(-1)
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 5] = ["m", "kg", "s", "A", "K"];
        let parts: Vec<String> = NAMES
            .iter()
            .zip(self.0)
            .filter(|(_, e)| *e != 0)
            .map(|(n, e)| {
                if e == 1 {
                    n.to_string()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// A value tagged with its dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub value: f64,
    pub dim: Dim,
}

impl Quantity {
    pub const fn new(value: f64, dim: Dim) -> Self {
        Self { value, dim }
    }

    pub fn scalar(value: f64) -> Self {
        Self::new(value, Dim::NONE)
    }

    pub fn sqrt(self) -> Result<Self> {
        self.root(2)
    }

    pub fn cbrt(self) -> Result<Self> {
        self.root(3)
    }

    fn root(self, k: i8) -> Result<Self> {
        let dim = self.dim.root(k).ok_or_else(|| Error::Dimension {
            quantity: "root",
            expected: format!("exponents divisible by {k}"),
            found: self.dim.to_string(),
        })?;
        let value = if k == 2 {
            self.value.sqrt()
        } else {
            self.value.powf(1.0 / k as f64)
        };
        Ok(Self { value, dim })
    }

    pub fn powi(self, p: i8) -> Self {
        Self::new(self.value.powi(p as i32), self.dim.powi(p))
    }

    /// Returns the bare value after checking the dimension.
    pub fn expect(self, quantity: &'static str, dim: Dim) -> Result<f64> {
        if self.dim == dim {
            Ok(self.value)
        } else {
            Err(Error::Dimension {
                quantity,
                expected: dim.to_string(),
                found: self.dim.to_string(),
            })
        }
    }
}

impl Mul for Quantity {
    type Output = Quantity;
    fn mul(self, rhs: Quantity) -> Quantity {
        Quantity::new(self.value * rhs.value, self.dim * rhs.dim)
    }
}

impl Div for Quantity {
    type Output = Quantity;
    fn div(self, rhs: Quantity) -> Quantity {
        Quantity::new(self.value / rhs.value, self.dim / rhs.dim)
    }
}

impl Mul<f64> for Quantity {
    type Output = Quantity;
    fn mul(self, rhs: f64) -> Quantity {
        Quantity::new(self.value * rhs, self.dim)
    }
}

/// Registry entry for a named constant.
#[derive(Debug, Clone, Copy)]
pub struct Constant {
    pub name: &'static str,
    pub quantity: Quantity,
    pub source: &'static str,
}

/// All constants used by the crate.
pub fn constants() -> [Constant; 5] {
    [
        Constant {
            name: "mu0",
            quantity: Quantity::new(MU0, Dim::PERMEABILITY),
            source: "CODATA 2018",
        },
        Constant {
            name: "hbar",
            quantity: Quantity::new(HBAR, Dim([2, 1, -1, 0, 0])),
            source: "CODATA 2018 (exact)",
        },
        Constant {
            name: "mu_B",
            quantity: Quantity::new(MU_B, Dim::MAGNETIC_MOMENT),
            source: "CODATA 2018",
        },
        Constant {
            name: "k_B",
            quantity: Quantity::new(K_B, Dim([2, 1, -2, 0, -1])),
            source: "CODATA 2018 (exact)",
        },
        Constant {
            name: "m_Rb87",
            quantity: Quantity::new(RB87_MASS_AMU * AMU, Dim::MASS),
            source: "AME atomic mass of 87Rb times CODATA 2018 u",
        },
    ]
}

struct UnitDef {
    symbols: &'static [&'static str],
    scale: f64,
    dim: Dim,
}

const UNITS: &[UnitDef] = &[
    UnitDef {
        symbols: &["m"],
        scale: 1.0,
        dim: Dim::LENGTH,
    },
    UnitDef {
        symbols: &["cm"],
        scale: 1e-2,
        dim: Dim::LENGTH,
    },
    UnitDef {
        symbols: &["mm"],
        scale: 1e-3,
        dim: Dim::LENGTH,
    },
    UnitDef {
        symbols: &["um", "µm", "μm"],
        scale: 1e-6,
        dim: Dim::LENGTH,
    },
    UnitDef {
        symbols: &["nm"],
        scale: 1e-9,
        dim: Dim::LENGTH,
    },
    UnitDef {
        symbols: &["T"],
        scale: 1.0,
        dim: Dim::FIELD,
    },
    UnitDef {
        symbols: &["mT"],
        scale: 1e-3,
        dim: Dim::FIELD,
    },
    UnitDef {
        symbols: &["G"],
        scale: 1e-4,
        dim: Dim::FIELD,
    },
    UnitDef {
        symbols: &["mG"],
        scale: 1e-7,
        dim: Dim::FIELD,
    },
    UnitDef {
        symbols: &["uG", "µG", "μG"],
        scale: 1e-10,
        dim: Dim::FIELD,
    },
    UnitDef {
        symbols: &["A"],
        scale: 1.0,
        dim: Dim::CURRENT,
    },
    UnitDef {
        symbols: &["mA"],
        scale: 1e-3,
        dim: Dim::CURRENT,
    },
    UnitDef {
        symbols: &["uA", "µA", "μA"],
        scale: 1e-6,
        dim: Dim::CURRENT,
    },
    UnitDef {
        symbols: &["kg"],
        scale: 1.0,
        dim: Dim::MASS,
    },
    UnitDef {
        symbols: &["u", "amu"],
        scale: AMU,
        dim: Dim::MASS,
    },
    UnitDef {
        symbols: &["Hz"],
        scale: 1.0,
        dim: Dim::FREQUENCY,
    },
    UnitDef {
        symbols: &["kHz"],
        scale: 1e3,
        dim: Dim::FREQUENCY,
    },
    UnitDef {
        symbols: &["K"],
        scale: 1.0,
        dim: Dim::TEMPERATURE,
    },
    UnitDef {
        symbols: &["nK"],
        scale: 1e-9,
        dim: Dim::TEMPERATURE,
    },
    UnitDef {
        symbols: &["J/T"],
        scale: 1.0,
        dim: Dim::MAGNETIC_MOMENT,
    },
    UnitDef {
        symbols: &["muB", "μB", "µB"],
        scale: MU_B,
        dim: Dim::MAGNETIC_MOMENT,
    },
];

/// Parses `"<number> [unit]"` into SI. A bare number is taken to already be
/// in SI units of `expected`; a suffix must have dimension `expected`.
pub fn parse_quantity(text: &str, expected: Dim) -> Result<f64> {
    let text = text.trim();
    let split = text
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || c == '+'
                || c == '-'
                || ((c == 'e' || c == 'E') && is_exponent(text, i)))
        })
        .map(|(i, _)| i)
        .unwrap_or(text.len());
    let (num, unit) = text.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("`{text}` does not start with a number")))?;
    let unit = unit.trim();
    if unit.is_empty() {
        return Ok(value);
    }
    let def = UNITS
        .iter()
        .find(|u| u.symbols.contains(&unit))
        .ok_or_else(|| Error::Parse(format!("unknown unit `{unit}` in `{text}`")))?;
    if def.dim != expected {
        return Err(Error::Parse(format!(
            "unit `{unit}` has dimension {}, expected {expected}",
            def.dim
        )));
    }
    Ok(value * def.scale)
}

fn is_exponent(text: &str, i: usize) -> bool {
    // 'e' is an exponent marker only when followed by a digit or sign and
    // preceded by a digit or '.'.
    let bytes = text.as_bytes();
    let prev_ok = i > 0 && (bytes[i - 1].is_ascii_digit() || bytes[i - 1] == b'.');
    let next_ok = bytes
        .get(i + 1)
        .map(|b| b.is_ascii_digit() || *b == b'-' || *b == b'+')
        .unwrap_or(false);
    prev_ok && next_ok
}
