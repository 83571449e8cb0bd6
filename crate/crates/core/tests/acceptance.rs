//! Acceptance criteria. Prints one PASS/FAIL line per criterion. Exits 0
//! unless `ACCEPTANCE_STRICT=1`, so known-red criteria stay visible without
//! breaking `cargo test`.

use std::time::{Duration, Instant};

use bcnf::cycle::multipliers;
use bcnf::design::{closed_family_rlr, residuals, solve_codim3, theorem1_check, xi_crossings, Pinned, SolverOptions};
use bcnf::explore::{
    basin_raster, branch_coincidence, default_window, family_targets, portrait, BasinConfig, PortraitOptions,
};
use bcnf::verify::verify_theorem5;
use bcnf::{classify, presets, solve_cycle, Mat2, Params, Point, Stability, Symbol, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

type Check = fn() -> Result<Outcome, String>;

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn c1_multipliers() -> Result<Outcome, String> {
    let p = presets::param_f();
    let rlr = Word::parse("RLR").map_err(|e| e.to_string())?;
    let _ = multipliers(&p, &rlr);
    let ([a, b], t) = timed(|| multipliers(&p, &rlr));
    let err = rel(a.re, 6.0 / 13.0).max(rel(b.re, 13.0 / 6.0));
    let real = a.im == 0.0 && b.im == 0.0;
    Ok(outcome(
        real && err <= 1e-12 && t < Duration::from_millis(1),
        format!("{:.15}, {:.15}, rel err {err:.1e}, {t:?}", a.re, b.re),
    ))
}

fn c2_fixed_point() -> Result<Outcome, String> {
    let p = presets::param_f();
    let r = Word::parse("R").map_err(|e| e.to_string())?;
    let _ = solve_cycle(&p, &r);
    let (c, t) = timed(|| solve_cycle(&p, &r));
    let z = c.map_err(|e| e.to_string())?.points[0];
    let err = z.dist(Point::new(0.2, -0.3));
    Ok(outcome(
        err <= 1e-12 && t < Duration::from_millis(1),
        format!("{z}, err {err:.1e}, {t:?}"),
    ))
}

fn c3_theorem_replay() -> Result<Outcome, String> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for d in [1.1, 1.5, 2.0, 3.0] {
        match verify_theorem5(d, 20) {
            Ok(reports) => {
                worst = reports.iter().map(|r| r.max_rel_err_vs_direct).fold(worst, f64::max);
            }
            Err(e) => failures.push(format!("delta_R = {d}: {e}")),
        }
    }
    let t = start.elapsed();
    Ok(outcome(
        failures.is_empty() && t < Duration::from_secs(5),
        if failures.is_empty() {
            format!("delta_R in {{1.1, 1.5, 2, 3}}, k <= 20, worst rel err {worst:.1e}, {t:?}")
        } else {
            failures.join("; ")
        },
    ))
}

fn c4_designer() -> Result<Outcome, String> {
    let cases = [
        ("I", 0.5, -1.139755486, 1.378851759),
        ("C", -0.7, -3.308423793, 1.659870677),
    ];
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, tau_l, tau_r, delta_r) in cases {
        let e = presets::by_name(name).ok_or("preset")?;
        let mut slowest = Duration::ZERO;
        let mut worst = 0.0f64;
        let mut failed = 0;
        let mut n = 0;
        for i in 0..=12 {
            for j in 0..=12 {
                let mut guess = e.params;
                guess.tau_l = tau_l;
                guess.tau_r = tau_r - 0.3 + 0.05 * i as f64;
                guess.delta_r = delta_r - 0.3 + 0.05 * j as f64;
                n += 1;
                let (sol, t) = timed(|| solve_codim3(&e.x, &e.y, Pinned::TauL(tau_l), &guess, SolverOptions::default()));
                slowest = slowest.max(t);
                match sol {
                    Ok(s) => {
                        let err = (s.params.tau_r - tau_r).abs().max((s.params.delta_r - delta_r).abs());
                        worst = worst.max(err);
                        if err > 1e-6 {
                            failed += 1;
                        }
                    }
                    Err(_) => failed += 1,
                }
            }
        }
        pass &= failed == 0 && slowest < Duration::from_secs(1);
        parts.push(format!("{name}: {}/{n} starts recovered, max err {worst:.1e}, slowest {slowest:?}", n - failed));
    }
    Ok(outcome(pass, parts.join("; ")))
}

fn c5_closed_family() -> Result<Outcome, String> {
    let (x, y) = (Word::parse("RLR").unwrap(), Word::parse("LR").unwrap());
    let mut worst = 0.0f64;
    for i in 1..=20 {
        let d = 1.0 + 0.1 * i as f64;
        let p = closed_family_rlr(d).map_err(|e| e.to_string())?;
        worst = worst.max(residuals(&p, &x, &y).map_err(|e| e.to_string())?.norm());
    }
    Ok(outcome(worst <= 1e-10, format!("20 values of delta_R in (1, 3], max residual {worst:.1e}")))
}

fn c6_homoclinic() -> Result<Outcome, String> {
    let e = presets::by_name("F").ok_or("preset")?;
    let r = theorem1_check(&e.params, &e.x, &e.y, 8).map_err(|e| e.to_string())?;
    let target = 6.0 / 13.0;
    // decay_ratios[i] = d[k] / d[k - 1] with k = i + 2
    let off: Vec<f64> = r.decay_ratios.iter().map(|q| rel(*q, target)).collect();
    let worst_k = off
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |acc, (i, &o)| if o > acc.1 { (i + 2, o) } else { acc });
    let (ks, logs): (Vec<f64>, Vec<f64>) = r.rows[1..].iter().map(|row| (row.k as f64, row.dist_to_b.ln())).unzip();
    let n = ks.len() as f64;
    let (mk, ml) = (ks.iter().sum::<f64>() / n, logs.iter().sum::<f64>() / n);
    let slope = ks.iter().zip(&logs).map(|(k, l)| (k - mk) * (l - ml)).sum::<f64>()
        / ks.iter().map(|k| (k - mk).powi(2)).sum::<f64>();
    let pass = r.gamma22.abs() <= 1e-10
        && r.sigma2.abs() <= 1e-10
        && r.lambda_product_defect <= 1e-12
        && off.iter().all(|&o| o <= 0.05);
    let ratios: Vec<String> = r.decay_ratios.iter().map(|q| format!("{q:.4}")).collect();
    Ok(outcome(
        pass,
        format!(
            "|gamma22| {:.1e}, |sigma2| {:.1e}, |l1 l2 - 1| {:.1e}; ratios k=2..8 [{}], worst {:.1}% at k={}; fitted rate {:.4}",
            r.gamma22.abs(),
            r.sigma2.abs(),
            r.lambda_product_defect,
            ratios.join(", "),
            100.0 * worst_k.1,
            worst_k.0,
            slope.exp()
        ),
    ))
}

fn c7_geometry() -> Result<Outcome, String> {
    let e = presets::by_name("F").ok_or("preset")?;
    let xi = xi_crossings(&e.params, &e.x, &e.y, 64).map_err(|e| e.to_string())?;
    let s = xi.scale;
    let at_phi0 = xi.crossings.iter().any(|c| c.dist(Point::new(0.0, -1.0)) <= 1e-9 * s);
    let coin = branch_coincidence(&e.params, &e.x, &e.y, 1e-3, 12).map_err(|e| e.to_string())?;
    let pass = xi.crossings.len() == 2
        && at_phi0
        && xi.final_max_v <= 1e-9 * s
        && coin.hausdorff <= 1e-6 * coin.scale;
    Ok(outcome(
        pass,
        format!(
            "{} crossings (one at (0,-1): {at_phi0}), last image off u-axis {:.1e}, branch Hausdorff {:.1e} (scale {:.3})",
            xi.crossings.len(),
            xi.final_max_v,
            coin.hausdorff,
            coin.scale
        ),
    ))
}

fn refined(name: &str, tau_l: f64) -> Result<(Params, Word, Word), String> {
    let e = presets::by_name(name).ok_or("preset")?;
    let sol = solve_codim3(&e.x, &e.y, Pinned::TauL(tau_l), &e.params, SolverOptions::default()).map_err(|e| e.to_string())?;
    Ok((sol.params, e.x, e.y))
}

fn c8_coexistence() -> Result<Outcome, String> {
    let mut notes = Vec::new();
    let mut pass = true;
    for (name, tau_l) in [("I", 0.5), ("C", -0.7)] {
        let (p, x, y) = refined(name, tau_l)?;
        let mut good = 0;
        for k in 1..=8 {
            let s = classify(&p, &x.power(k).unwrap().concat(&y)).map_err(|e| e.to_string())?;
            let sp = classify(&p, &x.power(k).unwrap().concat(&y.flip_first())).map_err(|e| e.to_string())?;
            if s.is_admissible()
                && s.stability == Stability::AsymptoticallyStable
                && sp.is_admissible()
                && sp.stability == Stability::Saddle
            {
                good += 1;
            }
        }
        pass &= good == 8;
        notes.push(format!("{name}: {good}/8 k with S attracting and S' saddle"));
        if name == "C" {
            let pt = portrait(&p, &x, &y, &PortraitOptions::default()).map_err(|e| e.to_string())?;
            for w in ["RL", "RLRLL"] {
                let found = pt
                    .find_cycle(&Word::parse(w).unwrap())
                    .is_some_and(|c| c.stability == Stability::AsymptoticallyStable);
                pass &= found;
                notes.push(format!("attracting {w}: {found}"));
            }
        }
    }
    Ok(outcome(pass, notes.join("; ")))
}

fn c9_basin() -> Result<Outcome, String> {
    let e = presets::by_name("F").ok_or("preset")?;
    let k_max = 8;
    let win = default_window(&e.params, &e.x, &e.y, k_max, 256, 192).map_err(|e| e.to_string())?;
    let targets = family_targets(&e.params, &e.x, &e.y, k_max).map_err(|e| e.to_string())?;
    let cfg = BasinConfig::default();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
    let (img, t) = timed(|| single.install(|| basin_raster(&e.params, &win, &targets, &cfg)));
    let img = img.map_err(|e| e.to_string())?;
    let again = basin_raster(&e.params, &win, &targets, &cfg).map_err(|e| e.to_string())?;
    let deterministic = again == img;
    let doubled = basin_raster(
        &e.params,
        &win,
        &targets,
        &BasinConfig {
            max_iter: 2 * cfg.max_iter,
            ..cfg
        },
    )
    .map_err(|e| e.to_string())?;
    let relabeled = img
        .labels
        .iter()
        .zip(&doubled.labels)
        .filter(|(a, b)| a != b && **a != bcnf::explore::UNRESOLVED)
        .count();
    let mut wrong = vec![0usize; k_max + 1];
    for tg in &targets {
        for &z in &tg.cycle.points {
            if img.label_at(z) != Some(tg.label) {
                wrong[tg.label as usize] += 1;
            }
        }
    }
    let total_wrong: usize = wrong.iter().sum();
    let resolved_up_to = (1..=k_max).take_while(|&k| wrong[k] == 0).last().unwrap_or(0);
    let pass = total_wrong == 0 && deterministic && relabeled == 0 && t < Duration::from_secs(60);
    Ok(outcome(
        pass,
        format!(
            "self-labeled for k <= {resolved_up_to}, mislabeled cycle points per k {:?}; deterministic {deterministic}; \
             relabeled after doubling max_iter {relabeled}; single-threaded {t:.2?}",
            &wrong[1..]
        ),
    ))
}

fn random_params(rng: &mut ChaCha8Rng) -> Params {
    Params::new(
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-2.0..2.0),
        rng.gen_range(-3.0..3.0),
        rng.gen_range(-2.0..2.0),
        if rng.gen_bool(0.5) { 1.0 } else { rng.gen_range(-3.0..3.0) },
    )
    .unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let n = rng.gen_range(1..=max_len);
    Word::new(
        (0..n)
            .map(|_| if rng.gen_bool(0.5) { Symbol::L } else { Symbol::R })
            .collect(),
    )
    .unwrap()
}

fn mat_rel(a: &Mat2, b: &Mat2) -> f64 {
    (*a - *b).max_abs() / a.max_abs().max(b.max_abs()).max(1.0)
}

fn c10_properties() -> Result<Outcome, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_260_101);
    let mut comp = 0.0f64;
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        let w = random_word(&mut rng, 24);
        let (u, v) = if w.len() == 1 {
            (w.clone(), random_word(&mut rng, 4))
        } else {
            let cut = rng.gen_range(1..w.len());
            (
                Word::new(w.symbols()[..cut].to_vec()).unwrap(),
                Word::new(w.symbols()[cut..].to_vec()).unwrap(),
            )
        };
        let (mu, pu) = p.word_matrices(&u);
        let (mv, pv) = p.word_matrices(&v);
        let (muv, puv) = p.word_matrices(&u.concat(&v));
        comp = comp.max(mat_rel(&muv, &(mv * mu))).max(mat_rel(&puv, &(mv * pu + pv)));
    }
    let mut shift = 0.0f64;
    for _ in 0..1000 {
        let p = random_params(&mut rng);
        let w = random_word(&mut rng, 16);
        let m0 = p.word_matrices(&w).0;
        for i in 1..w.len() {
            let mi = p.word_matrices(&w.shift(i)).0;
            let scale = m0.max_abs().max(mi.max_abs()).max(1.0);
            shift = shift.max((mi.trace() - m0.trace()).abs() / scale);
        }
    }
    let mut detp = 0.0f64;
    let mut solved = 0;
    while solved < 500 {
        let p = random_params(&mut rng);
        let w = random_word(&mut rng, 12);
        let Ok(c) = solve_cycle(&p, &w) else { continue };
        solved += 1;
        for i in 0..w.len() {
            let (m, pm) = p.word_matrices(&w.shift(i));
            let lhs = c.points[i].x * (Mat2::IDENTITY - m).det();
            let rhs = pm.det() * p.mu;
            let scale = (pm.max_abs().powi(2) * p.mu.abs()).max(m.max_abs().powi(2)).max(1.0);
            detp = detp.max((lhs - rhs).abs() / scale);
        }
    }
    Ok(outcome(
        comp <= 1e-12 && shift <= 1e-12 && detp <= 1e-9,
        format!("composition {comp:.1e} (1000 splits), shift-trace {shift:.1e} (1000 words), x det(I-M) = detP mu {detp:.1e} (500 cycles)"),
    ))
}

fn main() {
    let checks: [(&str, Check); 10] = [
        ("multiplier reproduction", c1_multipliers),
        ("fixed-point reproduction", c2_fixed_point),
        ("closed-form replay", c3_theorem_replay),
        ("designer reproduction", c4_designer),
        ("closed-family consistency", c5_closed_family),
        ("homoclinic diagnostics", c6_homoclinic),
        ("switching-line geometry", c7_geometry),
        ("coexistence at the numeric examples", c8_coexistence),
        ("basin raster", c9_basin),
        ("property suites", c10_properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let (result, t) = timed(check);
        let o = result.unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name} [{t:.2?}]: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("{} of {} criteria pass", checks.len() - failed, checks.len());
    if failed > 0 && std::env::var("ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
