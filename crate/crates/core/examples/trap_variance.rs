//! Field-noise variance above a rough wire: the dimensionless `Ṽ` against
//! `ξ/d`, the small-`ξ` constant, and the variance in physical units.

use wirenoise::edge_model::EdgeRoughness;
use wirenoise::transfer::WireGeometry;
use wirenoise::trap_noise::{
    field_variance, log_grid, smallxi_constant, vtilde, Ratios, TrapContext,
};
use wirenoise::units::MU_B;

fn main() -> wirenoise::Result<()> {
    let c = smallxi_constant(1.0)?;
    println!("small-xi constant c(d = y0) = {c:.6}");
    println!(
        "{:>10} {:>12} {:>12} {:>12}",
        "xi/d", "alpha=1", "alpha=0.25", "c xi/d"
    );
    for xi_over_d in log_grid(1e-3, 100.0, 11) {
        let v = |alpha| {
            vtilde(Ratios {
                d_over_y0: 1.0,
                d_over_xi: 1.0 / xi_over_d,
                alpha,
            })
        };
        println!(
            "{xi_over_d:10.3e} {:12.4e} {:12.4e} {:12.4e}",
            v(1.0)?,
            v(0.25)?,
            c * xi_over_d
        );
    }

    let rough = EdgeRoughness::new(3e-9, 20e-9, 0.5)?;
    let geom = WireGeometry::new(6e-6, 1e-6, 6e-6, 0.17)?;
    let ctx = TrapContext::new(rough, geom, MU_B)?;
    let v = field_variance(&ctx)?;
    println!(
        "\nd = 6 um, I = 170 mA: rms field noise {:.3} mG",
        v.sqrt() * 1e7
    );
    Ok(())
}
