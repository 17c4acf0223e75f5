//! Direct Biot–Savart summation over a meandering filament, compared with the
//! analytic filament transfer law. Pass `--ensemble` to also run the
//! rough-filament spectrum comparison (about twenty seconds in release).

use wirenoise::oracle_biot_savart::{rough_filament_check, RoughFilamentSetup, SinusoidSetup};

fn main() -> wirenoise::Result<()> {
    let setup = SinusoidSetup::default();
    println!(
        "{:>6} {:>14} {:>14} {:>10}",
        "q0 d", "numeric", "analytic", "rel err"
    );
    for q0d in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let c = setup.check(q0d)?;
        println!(
            "{:6.2} {:14.6e} {:14.6e} {:10.2e}",
            c.q0d, c.numeric, c.analytic, c.relative_error
        );
    }

    if std::env::args().any(|a| a == "--ensemble") {
        let report = rough_filament_check(&RoughFilamentSetup::default())?;
        println!("\n{:>8} {:>10}", "qd", "ratio");
        for (qd, r) in report.qd.iter().zip(&report.ratio) {
            println!("{qd:8.3} {r:10.4}");
        }
        println!(
            "max deviation {:.3} from {} periodograms",
            report.max_deviation, report.periodograms
        );
    }
    Ok(())
}
