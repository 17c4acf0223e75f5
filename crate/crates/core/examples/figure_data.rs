//! Writes every figure's curve data and manifest into a directory
//! (default `figures/`).

use std::path::PathBuf;

use wirenoise::figures::{write_figure, FigureId, FigureOverrides};

fn main() -> wirenoise::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map_or_else(|| PathBuf::from("figures"), PathBuf::from);
    for id in FigureId::ALL {
        let (manifest, path) = write_figure(id, &FigureOverrides::default(), &dir)?;
        println!(
            "figure {}: {} curves, manifest {}",
            id.number(),
            manifest.files.len(),
            path.display()
        );
    }
    Ok(())
}
