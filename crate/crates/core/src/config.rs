//! Run configuration read from TOML.
//!
//! Quantities may be written as bare SI numbers or as strings with a unit
//! suffix (`"3 nm"`, `"0.5 G"`, `"1 mG"`). Unknown keys are rejected and
//! every error names the key it concerns. Example:
//!
//! ```toml
//! [roughness]
//! sigma = "3 nm"
//! xi = "20 nm"
//! alpha = 0.5
//!
//! [wire]
//! thickness = "1 um"
//! kappa = 3e7            # A m^-3/2
//!
//! [trap]
//! sqrt_v_max = "1 mG"
//! bias_z = "0.5 G"
//!
//! [atom]
//! species = "Rb87"
//!
//! [design]
//! smallxi = "computed"   # or "reference", or a number
//!
//! [sweep]
//! parameter = "sigma"
//! from = "1 nm"
//! to = "10 nm"
//! count = 10
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::design::{AtomSpecies, DesignInput, SmallXiSource};
use crate::edge_model::EdgeRoughness;
use crate::error::{Error, Result};
use crate::units::{parse_quantity, Dim, MU_B};

/// A number in SI units, or text with a unit suffix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuantityText {
    Number(f64),
    Text(String),
}

impl QuantityText {
    fn resolve(&self, key: &str, dim: Dim) -> Result<f64> {
        let v = match self {
            QuantityText::Number(v) => *v,
            QuantityText::Text(t) => {
                parse_quantity(t, dim).map_err(|e| config_error(key, e.to_string()))?
            }
        };
        if !(v > 0.0 && v.is_finite()) {
            return Err(config_error(key, format!("must be positive, got {v}")));
        }
        Ok(v)
    }
}

fn config_error(key: &str, detail: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRoughness {
    sigma: QuantityText,
    xi: QuantityText,
    alpha: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWire {
    thickness: QuantityText,
    kappa: QuantityText,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrap {
    sqrt_v_max: Option<QuantityText>,
    v_max: Option<QuantityText>,
    bias_z: QuantityText,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    species: Option<String>,
    label: Option<String>,
    mass: Option<QuantityText>,
    mu_z: Option<QuantityText>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDesign {
    smallxi: Option<toml::Value>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    parameter: String,
    from: QuantityText,
    to: QuantityText,
    count: usize,
    spacing: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSynth {
    n: usize,
    dz: QuantityText,
    seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    roughness: Option<RawRoughness>,
    wire: Option<RawWire>,
    trap: Option<RawTrap>,
    atom: Option<RawAtom>,
    design: Option<RawDesign>,
    sweep: Option<RawSweep>,
    synth: Option<RawSynth>,
    output: Option<RawOutput>,
}

/// Design input that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    Sigma,
    Xi,
    Thickness,
    SqrtVMax,
}

impl SweepParameter {
    fn parse(text: &str) -> Result<Self> {
        match text {
            "sigma" => Ok(Self::Sigma),
            "xi" => Ok(Self::Xi),
            "thickness" | "x0" => Ok(Self::Thickness),
            "sqrt_v_max" => Ok(Self::SqrtVMax),
            other => Err(config_error(
                "sweep.parameter",
                format!("unknown parameter `{other}`; expected sigma, xi, thickness or sqrt_v_max"),
            )),
        }
    }

    fn dim(self) -> Dim {
        match self {
            Self::SqrtVMax => Dim::FIELD,
            _ => Dim::LENGTH,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Sigma => "sigma",
            Self::Xi => "xi",
            Self::Thickness => "thickness",
            Self::SqrtVMax => "sqrt_v_max",
        }
    }

    /// Copy of `base` with this parameter set to `value` (SI).
    pub fn apply(self, base: &DesignInput, value: f64) -> Result<DesignInput> {
        let mut out = base.clone();
        match self {
            Self::Sigma => out.rough = EdgeRoughness::new(value, base.rough.xi, base.rough.alpha)?,
            Self::Xi => out.rough = EdgeRoughness::new(base.rough.sigma, value, base.rough.alpha)?,
            Self::Thickness => out.x0 = value,
            Self::SqrtVMax => out.v_max = value * value,
        }
        Ok(out)
    }
}

/// Grid of values for one [`SweepParameter`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// Settings for profile synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthSettings {
    pub n: usize,
    pub dz: f64,
    pub seed: u64,
}

/// A parsed configuration file. Blocks absent from the file are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub roughness: Option<EdgeRoughness>,
    pub design: Option<DesignInput>,
    pub smallxi: SmallXiSource,
    pub sweep: Option<Sweep>,
    pub synth: Option<SynthSettings>,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let key = e
                .span()
                .map(|s| {
                    text[s]
                        .split(['=', '\n'])
                        .next()
                        .unwrap_or("")
                        .trim()
                        .to_string()
                })
                .filter(|k| !k.is_empty())
                .unwrap_or_else(|| "<document>".into());
            config_error(&key, e.message().to_string())
        })?;
        resolve(raw)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// The design input, or an error naming the first missing block.
    pub fn require_design(&self) -> Result<&DesignInput> {
        self.design.as_ref().ok_or_else(|| {
            config_error(
                "design",
                "the roughness, wire, trap and atom blocks are all required for a design run",
            )
        })
    }
}

fn resolve(raw: RawConfig) -> Result<RunConfig> {
    let roughness = raw
        .roughness
        .as_ref()
        .map(|r| {
            let sigma = r.sigma.resolve("roughness.sigma", Dim::LENGTH)?;
            let xi = r.xi.resolve("roughness.xi", Dim::LENGTH)?;
            EdgeRoughness::new(sigma, xi, r.alpha)
                .map_err(|e| config_error("roughness.alpha", e.to_string()))
        })
        .transpose()?;

    let atom = raw.atom.as_ref().map(resolve_atom).transpose()?;

    let design = match (&roughness, &raw.wire, &raw.trap) {
        (Some(rough), Some(wire), Some(trap)) => {
            let v_max = match (&trap.sqrt_v_max, &trap.v_max) {
                (Some(s), None) => s.resolve("trap.sqrt_v_max", Dim::FIELD)?.powi(2),
                (None, Some(v)) => v.resolve("trap.v_max", Dim::FIELD_VARIANCE)?,
                (Some(_), Some(_)) => {
                    return Err(config_error(
                        "trap.v_max",
                        "give either sqrt_v_max or v_max, not both",
                    ))
                }
                (None, None) => {
                    return Err(config_error(
                        "trap.sqrt_v_max",
                        "missing; give sqrt_v_max or v_max",
                    ))
                }
            };
            Some(DesignInput {
                rough: *rough,
                x0: wire.thickness.resolve("wire.thickness", Dim::LENGTH)?,
                kappa: wire.kappa.resolve("wire.kappa", Dim::NONE)?,
                v_max,
                bias_z: trap.bias_z.resolve("trap.bias_z", Dim::FIELD)?,
                atom: atom.clone().unwrap_or_else(AtomSpecies::rb87),
            })
        }
        (_, None, Some(_)) => {
            return Err(config_error(
                "wire",
                "block is required when [trap] is given",
            ))
        }
        (_, Some(_), None) => {
            return Err(config_error(
                "trap",
                "block is required when [wire] is given",
            ))
        }
        (None, Some(_), Some(_)) => {
            return Err(config_error(
                "roughness",
                "block is required for a design run",
            ))
        }
        _ => None,
    };

    let smallxi = match raw.design.and_then(|d| d.smallxi) {
        None => SmallXiSource::Computed,
        Some(toml::Value::String(s)) if s == "computed" => SmallXiSource::Computed,
        Some(toml::Value::String(s)) if s == "reference" => SmallXiSource::Reference,
        Some(toml::Value::Float(c)) if c > 0.0 => SmallXiSource::Fixed(c),
        Some(other) => {
            return Err(config_error(
                "design.smallxi",
                format!("expected \"computed\", \"reference\" or a positive number, got {other}"),
            ))
        }
    };

    let sweep = raw.sweep.as_ref().map(resolve_sweep).transpose()?;

    let synth = raw
        .synth
        .as_ref()
        .map(|s| {
            Ok::<_, Error>(SynthSettings {
                n: s.n,
                dz: s.dz.resolve("synth.dz", Dim::LENGTH)?,
                seed: s.seed,
            })
        })
        .transpose()?;

    Ok(RunConfig {
        roughness,
        design,
        smallxi,
        sweep,
        synth,
        output_dir: raw.output.map(|o| o.dir),
    })
}

fn resolve_atom(a: &RawAtom) -> Result<AtomSpecies> {
    match (&a.species, &a.mass, &a.mu_z) {
        (Some(s), None, None) => match s.to_ascii_lowercase().as_str() {
            "rb87" | "87rb" => Ok(AtomSpecies::rb87()),
            other => Err(config_error(
                "atom.species",
                format!("unknown species `{other}`; built in: Rb87"),
            )),
        },
        (None, Some(m), mu) => {
            let mass = m.resolve("atom.mass", Dim::MASS)?;
            let mu_z = match mu {
                Some(mu) => mu.resolve("atom.mu_z", Dim::MAGNETIC_MOMENT)?,
                None => MU_B,
            };
            AtomSpecies::new(
                a.label.clone().unwrap_or_else(|| "custom".into()),
                mass,
                mu_z,
            )
            .map_err(|e| config_error("atom", e.to_string()))
        }
        (Some(_), _, _) => Err(config_error(
            "atom.species",
            "cannot be combined with mass or mu_z",
        )),
        (None, None, _) => Err(config_error("atom.mass", "missing; give species or mass")),
    }
}

fn resolve_sweep(s: &RawSweep) -> Result<Sweep> {
    let parameter = SweepParameter::parse(&s.parameter)?;
    let from = s.from.resolve("sweep.from", parameter.dim())?;
    let to = s.to.resolve("sweep.to", parameter.dim())?;
    if s.count < 2 {
        return Err(config_error(
            "sweep.count",
            format!("needs at least 2 points, got {}", s.count),
        ));
    }
    if !(to > from) {
        return Err(config_error("sweep.to", "must exceed sweep.from"));
    }
    let steps = (s.count - 1) as f64;
    let values = match s.spacing.as_deref().unwrap_or("linear") {
        "linear" => (0..s.count)
            .map(|i| from + (to - from) * i as f64 / steps)
            .collect(),
        "log" => (0..s.count)
            .map(|i| from * (to / from).powf(i as f64 / steps))
            .collect(),
        other => {
            return Err(config_error(
                "sweep.spacing",
                format!("expected \"linear\" or \"log\", got `{other}`"),
            ))
        }
    };
    Ok(Sweep { parameter, values })
}
