//! Phase portrait of the RLRLR / LR coexistence point: the S[k] attractors,
//! the S'[k] saddles, and the other attractors that live alongside them.
//!
//! `cargo run --release --example portrait -- [out_dir]`

use std::path::PathBuf;

use bcnf::explore::{portrait, write_bundle, PortraitOptions};
use bcnf::presets;

fn main() -> bcnf::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("bcnf_portrait"), PathBuf::from);
    let e = presets::by_name("C").expect("preset");
    let pt = portrait(&e.params, &e.x, &e.y, &PortraitOptions::default())?;

    for f in &pt.fixed_points {
        println!("fixed point {} at {}: {:?}, {:?}", f.cycle.word, f.cycle.points[0], f.admissibility, f.stability);
    }
    println!("{}-cycle: {:?}", pt.x, pt.x_cycle.stability);
    for (s, sp) in pt.s.iter().zip(&pt.s_prime) {
        println!(
            "k = {}: S {:?} {:?}, S' {:?} {:?}",
            s.k, s.report.admissibility, s.report.stability, sp.report.admissibility, sp.report.stability
        );
    }
    println!("other admissible cycles:");
    for c in &pt.other_cycles {
        println!("    {:<6} {:?}", c.cycle.word.to_string(), c.stability);
    }
    for m in &pt.manifolds {
        println!("{:?} branch: {} vertices", m.branch, m.vertices.len());
    }

    for f in write_bundle(&pt, &out)? {
        println!("wrote {}", f.display());
    }
    Ok(())
}
