//! Designs the closest-approach trap for a given roughness and heat budget,
//! checks the result by full quadrature and sweeps the edge roughness.

use wirenoise::design::{closure_variance, design_limits, sweep_sigma, AtomSpecies, DesignInput};
use wirenoise::edge_model::EdgeRoughness;
use wirenoise::trap_noise::smallxi_constant;

fn main() -> wirenoise::Result<()> {
    let input = DesignInput {
        rough: EdgeRoughness::new(3e-9, 20e-9, 0.5)?,
        x0: 1e-6,
        kappa: 3e7,
        v_max: 1e-14,
        bias_z: 0.5e-4,
        atom: AtomSpecies::rb87(),
    };
    let c = smallxi_constant(1.0)?;
    let result = design_limits(&input, c)?;
    println!("{result}");
    let closure = closure_variance(&input, &result)?;
    println!(
        "full-quadrature variance / V_max = {:.5}\n",
        closure / input.v_max
    );

    let sigmas: Vec<f64> = (1..=10).map(|i| i as f64 * 1e-9).collect();
    println!(
        "{:>8} {:>10} {:>10} {:>12}",
        "sigma/nm", "d_min/um", "I_max/mA", "f_max/kHz"
    );
    for (s, r) in sigmas.iter().zip(sweep_sigma(&input, &sigmas, c)?) {
        println!(
            "{:8.1} {:10.3} {:10.2} {:12.2}",
            s * 1e9,
            r.d_min * 1e6,
            r.i_max * 1e3,
            r.f_max * 1e-3
        );
    }
    Ok(())
}
