//! Evaluates the transfer function `f̃(qd)` for a thin, a square and a flat
//! wire, alongside its low- and high-frequency forms and the filament limit.

use wirenoise::transfer::{
    ftilde, ftilde2_highq, ftilde_lowq, ftilde_narrow, ftilde_series, WireGeometry,
};
use wirenoise::trap_noise::log_grid;

fn main() -> wirenoise::Result<()> {
    for ratio in [0.6, 2.0, 10.0] {
        let g = WireGeometry::from_ratio(ratio)?;
        println!("d/y0 = {ratio}");
        println!(
            "{:>8} {:>12} {:>6} {:>12} {:>12} {:>12}",
            "qd", "f", "terms", "low-q", "high-q f", "filament"
        );
        for qd in log_grid(0.01, 10.0, 7) {
            let q = qd / g.d;
            let series = ftilde_series(q, &g, 1e-10, 200)?;
            println!(
                "{qd:8.3} {:12.5e} {:6} {:12.5e} {:12.5e} {:12.5e}",
                ftilde(q, &g)?,
                series.terms,
                ftilde_lowq(q, &g),
                ftilde2_highq(q, &g).sqrt(),
                ftilde_narrow(q, g.d)?
            );
        }
        println!();
    }
    Ok(())
}
