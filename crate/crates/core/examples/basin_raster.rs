//! Basins of the first eight S[k] cycles at the preset F parameters, written as
//! a PPM image next to a JSON color table.
//!
//! `cargo run --release --example basin_raster -- [width height [out.ppm]]`

use std::path::PathBuf;
use std::time::Instant;

use bcnf::explore::{basin_raster, default_window, family_targets, render_image, BasinConfig, Palette};
use bcnf::presets;

fn main() -> bcnf::Result<()> {
    let mut args = std::env::args().skip(1);
    let width: usize = args.next().map_or(256, |s| s.parse().expect("width"));
    let height: usize = args.next().map_or(192, |s| s.parse().expect("height"));
    let out = args
        .next()
        .map_or_else(|| std::env::temp_dir().join("bcnf_basin.ppm"), PathBuf::from);

    let e = presets::by_name("F").expect("preset");
    let k_max = 8;
    let window = default_window(&e.params, &e.x, &e.y, k_max, width, height)?;
    let targets = family_targets(&e.params, &e.x, &e.y, k_max)?;
    let start = Instant::now();
    let img = basin_raster(&e.params, &window, &targets, &BasinConfig::default())?;
    println!("{width}x{height} in {:.2?}", start.elapsed());
    for (label, count) in img.histogram() {
        println!("    label {label:>2}: {count} pixels");
    }

    let mut own = 0;
    let mut total = 0;
    for t in &targets {
        for &z in &t.cycle.points {
            total += 1;
            if img.label_at(z) == Some(t.label) {
                own += 1;
            }
        }
    }
    println!("{own} of {total} cycle points sit in a pixel carrying their own label");

    let sidecar = render_image(&img, &Palette::for_labels(k_max as i32), &out)?;
    println!("wrote {} and {}", out.display(), sidecar.display());
    Ok(())
}
