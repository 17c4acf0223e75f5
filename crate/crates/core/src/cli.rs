//! Command-line front end shared by the `wirenoise` binary and the tests.
//!
//! Exit status is 0 on success, 1 on an error and 2 when a validation gate
//! fails or a design warning is raised under `--strict`. Setting
//! `WIRENOISE_THREADS` fixes the size of the worker pool.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{RunConfig, SweepParameter, SynthSettings};
use crate::design::{design_limits, DesignResult, SmallXiSource};
use crate::edge_model::EdgeRoughness;
use crate::error::{Error, Result};
use crate::figures::{write_figure, FigureId, FigureOverrides, VERSION};
use crate::profile_synth::synthesize;
use crate::units::{parse_quantity, Dim};
use crate::validate::{run as run_validation, Suite};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "WIRENOISE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "wirenoise",
    version,
    about = "Wire edge roughness and magnetic trap disorder"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the curve data of one standard figure (ids 2 to 7) as CSV plus a JSON manifest.
    Figure(FigureArgs),
    /// Compute design limits from a TOML configuration file.
    Design(DesignArgs),
    /// Run self-check suites: specfun, spectrum, transfer, variance, oracle or all.
    Validate(ValidateArgs),
    /// Synthesize one rough edge profile as CSV.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure id, 2 to 7.
    pub id: u32,
    /// Output directory.
    #[arg(long, default_value = "figures")]
    pub out: PathBuf,
    /// Replace the default family of curves (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub family: Option<Vec<f64>>,
    /// Add curves to the family (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub extra: Vec<f64>,
    /// Abscissa range as `lo,hi`.
    #[arg(long, value_parser = parse_range, value_name = "LO,HI")]
    pub range: Option<(f64, f64)>,
    /// Number of abscissa points.
    #[arg(long)]
    pub points: Option<usize>,
    /// Seed for sample profiles.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Configuration file.
    pub config: PathBuf,
    /// Output directory for `design.json` and, with a sweep block, `design_sweep.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with status 2 if any applicability warning is raised.
    #[arg(long)]
    pub strict: bool,
    /// Use the rounded constant 0.274 instead of computing it.
    #[arg(long)]
    pub reference_constant: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Suite name or `all`.
    #[arg(default_value = "all")]
    pub suite: String,
    /// Write the JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Configuration file with [roughness] and [synth] blocks. Flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// rms amplitude, e.g. "3 nm".
    #[arg(long)]
    pub sigma: Option<String>,
    /// Correlation length, e.g. "20 nm".
    #[arg(long)]
    pub xi: Option<String>,
    /// Hurst exponent.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Number of samples (power of two).
    #[arg(long)]
    pub n: Option<usize>,
    /// Sample spacing, e.g. "1 nm".
    #[arg(long)]
    pub dz: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_range(text: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = text
        .split_once(',')
        .ok_or_else(|| format!("expected `lo,hi`, got `{text}`"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
    Ok((parse(lo)?, parse(hi)?))
}

/// Applies `WIRENOISE_THREADS` to the global pool. Later calls are no-ops.
pub fn configure_threads() -> Result<()> {
    if let Ok(text) = std::env::var(THREADS_ENV) {
        let n: usize = text.trim().parse().map_err(|_| Error::Config {
            key: THREADS_ENV.into(),
            detail: format!("expected a positive integer, got `{text}`"),
        })?;
        if n == 0 {
            return Err(Error::Config {
                key: THREADS_ENV.into(),
                detail: "must be at least 1".into(),
            });
        }
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

/// Runs a parsed command, writing human-readable output to `out`. Returns the exit status.
pub fn run(cli: Cli, out: &mut dyn std::io::Write) -> Result<i32> {
    configure_threads()?;
    match cli.command {
        Command::Figure(a) => cmd_figure(a, out),
        Command::Design(a) => cmd_design(a, out),
        Command::Validate(a) => cmd_validate(a, out),
        Command::Synth(a) => cmd_synth(a, out),
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))
}

fn cmd_figure(a: FigureArgs, out: &mut dyn std::io::Write) -> Result<i32> {
    let id = FigureId::try_from(a.id)?;
    let overrides = FigureOverrides {
        family: a.family,
        extra: a.extra,
        range: a.range,
        points: a.points,
        seed: a.seed,
    };
    let (manifest, path) = write_figure(id, &overrides, &a.out)?;
    for f in &manifest.files {
        writeln!(out, "{}  {}", f.sha256, a.out.join(&f.file).display()).map_err(io)?;
    }
    writeln!(out, "manifest {}", path.display()).map_err(io)?;
    Ok(0)
}

#[derive(Serialize)]
struct DesignReport<'a> {
    version: &'a str,
    input: &'a crate::design::DesignInput,
    smallxi_source: SmallXiSource,
    result: &'a DesignResult,
}

#[derive(Serialize)]
struct SweepRow {
    parameter: &'static str,
    value: f64,
    result: DesignResult,
}

fn cmd_design(a: DesignArgs, out: &mut dyn std::io::Write) -> Result<i32> {
    let config = RunConfig::load(&a.config)?;
    let input = config.require_design()?;
    let source = if a.reference_constant {
        SmallXiSource::Reference
    } else {
        config.smallxi
    };
    let c = source.value()?;
    let result = design_limits(input, c)?;
    writeln!(out, "{result}").map_err(io)?;
    let mut warned = !result.warnings.is_empty();

    let sweep = match &config.sweep {
        Some(s) => {
            let rows = sweep_rows(input, s.parameter, &s.values, c)?;
            writeln!(
                out,
                "\n{:>14} {:>10} {:>10} {:>10} {:>10}",
                s.parameter.name(),
                "d_min_um",
                "I_max_mA",
                "grad_T/cm",
                "f_max_kHz"
            )
            .map_err(io)?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>14.4e} {:>10.4} {:>10.3} {:>10.4} {:>10.3}",
                    r.value,
                    r.result.d_min * 1e6,
                    r.result.i_max * 1e3,
                    r.result.b_grad_max * 1e-2,
                    r.result.f_max * 1e-3
                )
                .map_err(io)?;
                warned |= !r.result.warnings.is_empty();
            }
            Some(rows)
        }
        None => None,
    };

    if let Some(dir) = a.out.or(config.output_dir.clone()) {
        fs::create_dir_all(&dir)?;
        let report = DesignReport {
            version: VERSION,
            input,
            smallxi_source: source,
            result: &result,
        };
        fs::write(dir.join("design.json"), to_json(&report)?)?;
        if let Some(rows) = &sweep {
            fs::write(dir.join("design_sweep.json"), to_json(rows)?)?;
            fs::write(dir.join("design_sweep.csv"), sweep_csv(rows))?;
        }
        writeln!(out, "wrote {}", dir.display()).map_err(io)?;
    }
    Ok(if a.strict && warned { 2 } else { 0 })
}

fn sweep_rows(
    input: &crate::design::DesignInput,
    parameter: SweepParameter,
    values: &[f64],
    c: f64,
) -> Result<Vec<SweepRow>> {
    use rayon::prelude::*;
    values
        .par_iter()
        .map(|&v| {
            let result = design_limits(&parameter.apply(input, v)?, c)?;
            Ok(SweepRow {
                parameter: parameter.name(),
                value: v,
                result,
            })
        })
        .collect()
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut s = format!("# wirenoise {VERSION}\n");
    s.push_str("parameter,value_si,d_min_m,i_max_A,b_grad_max_T_per_m,f_max_Hz,ground_state_size_m,roughness_temperature_K,warnings\n");
    for r in rows {
        let d = &r.result;
        s.push_str(&format!(
            "{},{:e},{:e},{:e},{:e},{:e},{:e},{:e},{}\n",
            r.parameter,
            r.value,
            d.d_min,
            d.i_max,
            d.b_grad_max,
            d.f_max,
            d.ground_state_size,
            d.roughness_temperature,
            d.warnings.len()
        ));
    }
    s
}

fn cmd_validate(a: ValidateArgs, out: &mut dyn std::io::Write) -> Result<i32> {
    let suites = Suite::parse_selection(&a.suite)?;
    let report = run_validation(&suites);
    writeln!(out, "{report}").map_err(io)?;
    if let Some(path) = a.json {
        if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(&path, to_json(&report)?)?;
    }
    Ok(if report.passed { 0 } else { 2 })
}

fn synth_settings(a: &SynthArgs) -> Result<(EdgeRoughness, SynthSettings)> {
    let config = a.config.as_deref().map(RunConfig::load).transpose()?;
    let base_rough = config.as_ref().and_then(|c| c.roughness);
    let base_synth = config.as_ref().and_then(|c| c.synth);
    let flag = |key: &str, text: &Option<String>| -> Result<Option<f64>> {
        text.as_deref()
            .map(|t| {
                parse_quantity(t, Dim::LENGTH).map_err(|e| Error::Config {
                    key: key.into(),
                    detail: e.to_string(),
                })
            })
            .transpose()
    };
    let missing = |key: &str| Error::Config {
        key: key.into(),
        detail: "missing; give the flag or a config block".into(),
    };
    let sigma = flag("--sigma", &a.sigma)?
        .or(base_rough.map(|r| r.sigma))
        .ok_or_else(|| missing("--sigma"))?;
    let xi = flag("--xi", &a.xi)?
        .or(base_rough.map(|r| r.xi))
        .ok_or_else(|| missing("--xi"))?;
    let alpha = a
        .alpha
        .or(base_rough.map(|r| r.alpha))
        .ok_or_else(|| missing("--alpha"))?;
    let rough = EdgeRoughness::new(sigma, xi, alpha)?;
    let settings = SynthSettings {
        n: a.n.or(base_synth.map(|s| s.n)).unwrap_or(4096),
        dz: flag("--dz", &a.dz)?
            .or(base_synth.map(|s| s.dz))
            .unwrap_or(xi / 16.0),
        seed: a
            .seed
            .or(base_synth.map(|s| s.seed))
            .ok_or_else(|| missing("--seed"))?,
    };
    Ok((rough, settings))
}

fn cmd_synth(a: SynthArgs, out: &mut dyn std::io::Write) -> Result<i32> {
    let (rough, s) = synth_settings(&a)?;
    let profile = synthesize(&rough, s.n, s.dz, s.seed)?;
    let text = format!("# wirenoise {VERSION}\n{}", profile.to_csv());
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            writeln!(out, "wrote {} samples to {}", profile.len(), path.display()).map_err(io)?;
        }
        None => out.write_all(text.as_bytes()).map_err(io)?,
    }
    Ok(0)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("wirenoise").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn synth_is_deterministic() {
        let args = [
            "synth", "--sigma", "3 nm", "--xi", "20 nm", "--alpha", "0.5", "--n", "1024", "--dz",
            "1 nm", "--seed", "9",
        ];
        let mut a = Vec::new();
        let mut b = Vec::new();
        assert_eq!(run(parse(&args), &mut a).unwrap(), 0);
        assert_eq!(run(parse(&args), &mut b).unwrap(), 0);
        assert_eq!(a, b);
        assert!(String::from_utf8(a).unwrap().contains("# seed=9"));
    }

    #[test]
    fn bad_figure_id_is_an_error() {
        let mut sink = Vec::new();
        assert!(run(parse(&["figure", "9", "--out", "/nonexistent"]), &mut sink).is_err());
    }

    #[test]
    fn missing_synth_parameter_names_it() {
        let mut sink = Vec::new();
        match run(
            parse(&["synth", "--sigma", "3 nm", "--alpha", "0.5", "--seed", "1"]),
            &mut sink,
        ) {
            Err(Error::Config { key, .. }) => assert_eq!(key, "--xi"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
