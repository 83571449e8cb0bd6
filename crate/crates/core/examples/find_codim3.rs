//! Finds the two numerical coexistence points from rough guesses, and walks
//! the closed RLR / LR family.

use bcnf::design::{closed_family_rlr, residuals, solve_codim3, Pinned, SolverOptions};
use bcnf::{presets, Word};

fn main() -> bcnf::Result<()> {
    let cases = [("I", 0.5, -1.3, 1.2), ("C", -0.7, -3.1, 1.9)];
    for (name, tau_l, tau_r, delta_r) in cases {
        let e = presets::by_name(name).expect("preset");
        let mut guess = e.params;
        guess.tau_r = tau_r;
        guess.delta_r = delta_r;
        let sol = solve_codim3(&e.x, &e.y, Pinned::TauL(tau_l), &guess, SolverOptions::default())?;
        println!(
            "X = {}, Y = {}, tau_L = {tau_l}: tau_R = {:.9}, delta_R = {:.9}, delta_L = {:.9} ({} Newton steps, |r| = {:.1e})",
            e.x,
            e.y,
            sol.params.tau_r,
            sol.params.delta_r,
            sol.params.delta_l,
            sol.iterations,
            sol.residuals.norm()
        );
    }

    println!("\nclosed family for X = RLR, Y = LR:");
    let (x, y) = (Word::parse("RLR")?, Word::parse("LR")?);
    for delta_r in [1.1, 1.5, 2.0, 2.5, 3.0] {
        let p = closed_family_rlr(delta_r)?;
        let r = residuals(&p, &x, &y)?;
        println!(
            "    delta_R = {delta_r:<4} tau_L = {:>10.6} tau_R = {:>10.6} delta_L = {:.6}  |r| = {:.1e}",
            p.tau_l,
            p.tau_r,
            p.delta_l,
            r.norm()
        );
    }
    Ok(())
}
