//! Synthesises a self-affine edge, writes it as CSV and re-estimates its
//! roughness parameters.

use wirenoise::edge_model::EdgeRoughness;
use wirenoise::profile_synth::{estimate_statistics, fit_hurst, synthesize};

fn main() -> wirenoise::Result<()> {
    let rough = EdgeRoughness::new(3e-9, 20e-9, 0.5)?;
    let profile = synthesize(&rough, 8192, 1e-9, 42)?;
    let path = std::env::temp_dir().join("wirenoise_edge.csv");
    profile.write_csv(&path)?;

    let stats = estimate_statistics(&profile, 60e-9)?;
    let fit = fit_hurst(&profile)?;
    println!("wrote {} samples to {}", profile.len(), path.display());
    println!("sigma_hat = {:.3} nm (target 3 nm)", stats.sigma_hat * 1e9);
    println!("alpha_hat = {:.3} (target 0.5)", fit.alpha_hat);
    // ξ̂ is the lag where Ĝ crosses (1 − 1/e)·√2σ̂, which the model places at
    // ξ·[−ln(1 − (1 − 1/e)²)]^{1/2α}.
    let level = 1.0 - (-1.0f64).exp();
    let crossing = rough.xi * (-(1.0 - level * level).ln()).powf(0.5 / rough.alpha);
    println!(
        "xi_hat    = {:.1} nm (model crossing {:.1} nm)",
        fit.xi_hat * 1e9,
        crossing * 1e9
    );
    Ok(())
}
