use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;

use bcnf::design::{residuals, solve_codim3, Pinned, SolverOptions};
use bcnf::explore::{
    basin_raster, default_window, family_targets, portrait, render_image, write_bundle, BasinConfig,
    BasinImage, Palette, PortraitOptions, Window,
};
use bcnf::map::parse_real;
use bcnf::verify::verify_theorem5;
use bcnf::{classify, presets, Error, ParamName, Params, Word};

#[derive(Parser)]
#[command(name = "bcnf", version, about = "Border-collision normal form explorer")]
struct Cli {
    /// Parameters: a JSON file, inline JSON, or a preset name (F, I, C).
    #[arg(long, global = true, default_value = "F")]
    params: String,
    /// Output directory for files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Residual tolerance for `scan`.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Length of the manifold seed segments.
    #[arg(long, global = true, default_value_t = 1e-3)]
    seed_scale: f64,
    /// Worker threads (0 picks the number of cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve and classify the cycles of the given words.
    Cycle { words: Vec<String> },
    /// Newton search for a coexistence point.
    Scan {
        #[arg(long)]
        word_x: String,
        #[arg(long)]
        word_y: String,
        /// `tau_L=<v>` or `delta_R=<v>`.
        #[arg(long)]
        fix: String,
        /// Starting values, e.g. `tau_R=-1.2,delta_R=1.4`; the rest come from --params.
        #[arg(long)]
        guess: Option<String>,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
    },
    /// Replay the closed forms of the (RLR)^k LR family.
    Verify {
        #[arg(long, value_delimiter = ',', default_values_t = vec![1.1, 1.5, 2.0, 3.0])]
        delta_r: Vec<f64>,
        #[arg(long, default_value_t = 20)]
        k_max: usize,
        /// Also write the reports to this JSON file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write the phase-portrait bundle of a design point.
    Portrait {
        #[arg(long)]
        word_x: Option<String>,
        #[arg(long)]
        word_y: Option<String>,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        #[arg(long, default_value_t = 6)]
        max_word_len: usize,
        #[arg(long, default_value_t = 12)]
        manifold_steps: usize,
    },
    /// Label a pixel grid by which X^k Y cycle each orbit goes to.
    Basin {
        #[arg(long)]
        word_x: Option<String>,
        #[arg(long)]
        word_y: Option<String>,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
        #[arg(long, default_value_t = 256)]
        width: usize,
        #[arg(long, default_value_t = 192)]
        height: usize,
        /// `x_min,x_max,y_min,y_max`; defaults to the padded bounding box of the cycles.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        window: Option<Vec<f64>>,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e8)]
        div_radius: f64,
        /// Convergence radius relative to the window diagonal.
        #[arg(long, default_value_t = 1e-8)]
        eps_rel: f64,
    },
    /// Turn a basin label file into a PPM image with a color table.
    Render {
        labels: PathBuf,
        #[arg(long, default_value = "basin.ppm")]
        name: String,
    },
}

/// A check ran and did not pass.
#[derive(Debug)]
struct CheckFailed(String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for CheckFailed {}

fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::EmptyWord
            | Error::InvalidSymbol { .. }
            | Error::InvalidPower(_)
            | Error::InvalidParams(_)
            | Error::InvalidDeltaR(_)
            | Error::InvalidWindow(_)
            | Error::InvalidTargets(_)
            | Error::MissingColor(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_)
            | Error::Image(_)
    )
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<CheckFailed>().is_some() {
        return 1;
    }
    match err.downcast_ref::<Error>() {
        Some(e) if !is_input_error(e) => 1,
        _ => 2,
    }
}

fn load_params(spec: &str) -> anyhow::Result<(Params, Option<(Word, Word)>)> {
    if let Some(e) = presets::by_name(spec) {
        return Ok((e.params, Some((e.x, e.y))));
    }
    let text = if spec.trim_start().starts_with('{') {
        spec.to_string()
    } else {
        std::fs::read_to_string(spec).with_context(|| format!("reading parameters from {spec}"))?
    };
    Ok((Params::from_json(&text)?, None))
}

fn words(
    x: Option<String>,
    y: Option<String>,
    preset: Option<(Word, Word)>,
) -> anyhow::Result<(Word, Word)> {
    match (x, y, preset) {
        (Some(x), Some(y), _) => Ok((Word::parse(&x)?, Word::parse(&y)?)),
        (None, None, Some(pair)) => Ok(pair),
        (Some(x), None, Some((_, y))) => Ok((Word::parse(&x)?, y)),
        (None, Some(y), Some((x, _))) => Ok((x, Word::parse(&y)?)),
        _ => bail!("--word-x and --word-y are required unless --params names a preset"),
    }
}

fn assignments(text: &str) -> anyhow::Result<Vec<(ParamName, f64)>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (name, value) = pair
                .split_once('=')
                .ok_or_else(|| anyhow!("expected name=value, got {pair:?}"))?;
            Ok((name.trim().parse()?, parse_real(value)?))
        })
        .collect()
}

fn write_json(path: &Path, value: &impl Serialize) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    serde_json::to_writer_pretty(BufWriter::new(File::create(path)?), value)?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()?;
    }
    let (params, preset) = load_params(&cli.params)?;
    let out_dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    match cli.cmd {
        Cmd::Cycle { words } => {
            if words.is_empty() {
                bail!("give at least one word");
            }
            let mut reports = Vec::new();
            println!("{:<12} {:>3}  {:<11} {:<24} multipliers", "word", "n", "admissible", "stability");
            for w in &words {
                let r = classify(&params, &Word::parse(w)?)?;
                let [m1, m2] = r.cycle.multipliers.map(|m| {
                    if m.im == 0.0 {
                        format!("{:.6}", m.re)
                    } else {
                        format!("{:.6}{:+.6}i", m.re, m.im)
                    }
                });
                println!(
                    "{:<12} {:>3}  {:<11} {:<24} {}, {}",
                    r.cycle.word.to_string(),
                    r.cycle.period(),
                    format!("{:?}", r.admissibility),
                    format!("{:?}{}", r.stability, if r.conditional { "*" } else { "" }),
                    m1,
                    m2
                );
                reports.push(r);
            }
            if let Some(dir) = &cli.out {
                write_json(&dir.join("cycles.json"), &reports)?;
            }
        }
        Cmd::Scan {
            word_x,
            word_y,
            fix,
            guess,
            max_iter,
        } => {
            let (x, y) = (Word::parse(&word_x)?, Word::parse(&word_y)?);
            let pin = match assignments(&fix)?.as_slice() {
                [(name, value)] => Pinned::from_name(*name, *value)?,
                _ => bail!("--fix takes exactly one name=value"),
            };
            let mut start = params;
            for (name, value) in assignments(guess.as_deref().unwrap_or(""))? {
                start.set(name, value);
            }
            let opts = SolverOptions {
                tol: cli.tol,
                max_iter,
                ..SolverOptions::default()
            };
            let sol = solve_codim3(&x, &y, pin, &start, opts)?;
            let report = serde_json::json!({
                "params": sol.params,
                "residuals": sol.residuals,
                "residual_norm": residuals(&sol.params, &x, &y)?.norm(),
                "iterations": sol.iterations,
            });
            println!("{}", serde_json::to_string_pretty(&report)?);
            if let Some(dir) = &cli.out {
                write_json(&dir.join("scan.json"), &report)?;
            }
        }
        Cmd::Verify {
            delta_r,
            k_max,
            json,
        } => {
            let mut all = Vec::new();
            let mut failures = Vec::new();
            for d in delta_r {
                match verify_theorem5(d, k_max) {
                    Ok(reports) => {
                        let worst = reports
                            .iter()
                            .map(|r| r.max_rel_err_vs_direct)
                            .fold(0.0, f64::max);
                        println!("delta_R = {d}: ok for k = 1..={k_max}, worst relative error {worst:.2e}");
                        all.push(serde_json::json!({ "delta_R": d, "ok": true, "reports": reports }));
                    }
                    Err(e @ Error::Verification { .. }) => {
                        println!("delta_R = {d}: FAILED: {e}");
                        all.push(serde_json::json!({ "delta_R": d, "ok": false, "error": e.to_string() }));
                        failures.push(d);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            if let Some(path) = json {
                write_json(&path, &all)?;
            }
            if !failures.is_empty() {
                return Err(CheckFailed(format!("verification failed for delta_R in {failures:?}")).into());
            }
        }
        Cmd::Portrait {
            word_x,
            word_y,
            k_max,
            max_word_len,
            manifold_steps,
        } => {
            let (x, y) = words(word_x, word_y, preset)?;
            let opts = PortraitOptions {
                k_max,
                max_word_len,
                seed_scale: cli.seed_scale,
                manifold_steps,
            };
            let pt = portrait(&params, &x, &y, &opts)?;
            for f in write_bundle(&pt, &out_dir)? {
                println!("{}", f.display());
            }
        }
        Cmd::Basin {
            word_x,
            word_y,
            k_max,
            width,
            height,
            window,
            max_iter,
            div_radius,
            eps_rel,
        } => {
            let (x, y) = words(word_x, word_y, preset)?;
            let win = match window.as_deref() {
                Some(&[x0, x1, y0, y1]) => Window::new(x0, x1, y0, y1, width, height)?,
                Some(_) => bail!("--window takes four numbers"),
                None => default_window(&params, &x, &y, k_max, width, height)?,
            };
            let targets = family_targets(&params, &x, &y, k_max)?;
            let cfg = BasinConfig {
                max_iter,
                div_radius,
                eps_rel,
            };
            let img = basin_raster(&params, &win, &targets, &cfg)?;
            let path = out_dir.join("basin_labels.json");
            write_json(&path, &img)?;
            for (label, count) in img.histogram() {
                println!("{label:>4} {count}");
            }
            println!("{}", path.display());
        }
        Cmd::Render { labels, name } => {
            let text = std::fs::read_to_string(&labels)
                .with_context(|| format!("reading {}", labels.display()))?;
            let img: BasinImage = serde_json::from_str(&text).map_err(Error::from)?;
            img.window.validate()?;
            if img.labels.len() != img.window.width * img.window.height {
                bail!("label grid does not match the window");
            }
            let max_label = img.labels.iter().copied().max().unwrap_or(0);
            std::fs::create_dir_all(&out_dir)?;
            let path = out_dir.join(name);
            let sidecar = render_image(&img, &Palette::for_labels(max_label), &path)?;
            println!("{}\n{}", path.display(), sidecar.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
