//! Replays the closed forms for the (RLR)^k LR family and its saddle
//! partners against direct matrix products.
//!
//! `cargo run --release --example theorem_replay -- 1.5 20`

use bcnf::verify::{closed_trace_det, lambda1, verify_theorem5};

fn main() -> bcnf::Result<()> {
    let mut args = std::env::args().skip(1);
    let delta_r: f64 = args.next().map_or(1.5, |s| s.parse().expect("delta_R"));
    let k_max: usize = args.next().map_or(20, |s| s.parse().expect("k_max"));

    println!("delta_R = {delta_R}, lambda1 = {:.12}", lambda1(delta_r), delta_R = delta_r);
    let reports = verify_theorem5(delta_r, k_max)?;
    println!("{:>3} {:>14} {:>14} {:>11}", "k", "det M", "trace M", "rel err");
    for r in &reports {
        println!(
            "{:>3} {:>14.6e} {:>14.6e} {:>11.2e}",
            r.k, r.det_m, r.trace_m, r.max_rel_err_vs_direct
        );
    }

    let (det, trace) = closed_trace_det(delta_r, k_max)?;
    println!("\nk = {k_max}: 1 - trace + det = {:.6e}, 1 + trace + det = {:.6e}", 1.0 - trace + det, 1.0 + trace + det);

    match verify_theorem5(0.5, 3) {
        Ok(_) => println!("delta_R = 0.5 unexpectedly passed"),
        Err(e) => println!("delta_R = 0.5 is outside the theorem: {e}"),
    }
    Ok(())
}
