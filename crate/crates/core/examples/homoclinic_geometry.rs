//! The homoclinic quadrilateral at the preset F parameters, the crossings of
//! its images with the switching line, the coincidence of the stable and
//! unstable branches, and how fast the S[k] cycles approach it.

use bcnf::design::{homoclinic_points, theorem1_check, xi_crossings};
use bcnf::explore::branch_coincidence;
use bcnf::presets;

fn main() -> bcnf::Result<()> {
    let e = presets::by_name("F").expect("preset");
    let (p, x, y) = (&e.params, &e.x, &e.y);

    let quad = homoclinic_points(p, x, y)?;
    println!("lambda1 = {:.9}, lambda2 = {:.9}", quad.frame.lambda1, quad.frame.lambda2);
    for (name, q) in ["a", "b", "c", "d"].iter().zip(quad.points()) {
        println!("    {name} = {}   (u, v) = {}", q.xy, q.uv);
    }
    println!("    phi0 = {}", quad.phi0);

    let xi = xi_crossings(p, x, y, 64)?;
    println!("\ncrossings with x = 0:");
    for c in &xi.crossings {
        println!("    {c}");
    }
    println!("last image off the u-axis by {:.2e}", xi.final_max_v);

    let c = branch_coincidence(p, x, y, 1e-3, 12)?;
    println!("stable / unstable branch distance {:.2e} (scale {:.3})", c.hausdorff, c.scale);

    let report = theorem1_check(p, x, y, 8)?;
    println!(
        "\ngamma22 = {:.1e}, sigma2 = {:.1e}, |lambda1 lambda2 - 1| = {:.1e}",
        report.gamma22, report.sigma2, report.lambda_product_defect
    );
    println!("{:>3} {:>12} {:>8}", "k", "|w - b|", "ratio");
    for (i, row) in report.rows.iter().enumerate() {
        let ratio = if i == 0 { String::new() } else { format!("{:.5}", report.decay_ratios[i - 1]) };
        println!("{:>3} {:>12.4e} {:>8}", row.k, row.dist_to_b, ratio);
    }
    Ok(())
}
