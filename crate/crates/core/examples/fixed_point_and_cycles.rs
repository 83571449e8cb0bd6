//! Fixed points and a few periodic cycles of the preset F parameters, with
//! admissibility and stability, plus every admissible cycle up to period 6.

use bcnf::words::lyndon_words;
use bcnf::{classify, presets, Word};

fn main() -> bcnf::Result<()> {
    let p = presets::param_f();
    println!("params: {p:?}\n");

    for w in ["L", "R", "RLR", "RLRLR", "RLRRLRLR"] {
        let r = classify(&p, &Word::parse(w)?)?;
        println!("{w}-cycle: {:?}, {:?}", r.admissibility, r.stability);
        for (z, s) in r.cycle.points.iter().zip(&r.sides) {
            println!("    {z}  {s:?}");
        }
        let [m1, m2] = r.cycle.multipliers;
        println!("    multipliers {m1:.6}, {m2:.6}\n");
    }

    println!("admissible primitive cycles of period <= 6:");
    for w in lyndon_words(6) {
        if let Ok(r) = classify(&p, &w) {
            if r.is_admissible() {
                println!("    {:<6} {:?}", w.to_string(), r.stability);
            }
        }
    }
    Ok(())
}
