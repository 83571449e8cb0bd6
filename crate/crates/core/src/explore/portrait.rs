use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::manifold::{manifold_polyline, Branch, Manifold, ManifoldPolyline};
use crate::cycle::{classify, CycleReport};
use crate::design::{homoclinic_points, HomoclinicQuad};
use crate::error::{Error, Result};
use crate::map::Params;
use crate::words::{lyndon_words, Word};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PortraitOptions {
    pub k_max: usize,
    /// Admissible cycles of every primitive word up to this length are listed.
    pub max_word_len: usize,
    pub seed_scale: f64,
    pub manifold_steps: usize,
}

impl Default for PortraitOptions {
    fn default() -> Self {
        PortraitOptions {
            k_max: 8,
            max_word_len: 6,
            seed_scale: 1e-3,
            manifold_steps: 12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyMember {
    pub k: usize,
    pub report: CycleReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Portrait {
    pub params: Params,
    pub x: Word,
    pub y: Word,
    /// Fixed points of the `L` and `R` half-maps, admissible or not.
    pub fixed_points: Vec<CycleReport>,
    pub x_cycle: CycleReport,
    /// `X^k Y`.
    pub s: Vec<FamilyMember>,
    /// `X^k Y` with the first symbol of `Y` flipped.
    pub s_prime: Vec<FamilyMember>,
    /// Admissible cycles of the primitive words of length 2 to
    /// `max_word_len` other than `X`, one per rotation class.
    pub other_cycles: Vec<CycleReport>,
    pub manifolds: Vec<ManifoldPolyline>,
    pub quad: Option<HomoclinicQuad>,
}

impl Portrait {
    /// Admissible cycle among `other_cycles` whose word is a rotation of `w`.
    pub fn find_cycle(&self, w: &Word) -> Option<&CycleReport> {
        self.other_cycles.iter().find(|c| c.cycle.word.is_rotation_of(w))
    }
}

fn family(p: &Params, x: &Word, tail: &Word, k_max: usize) -> Result<Vec<FamilyMember>> {
    (1..=k_max)
        .map(|k| {
            Ok(FamilyMember {
                k,
                report: classify(p, &x.power(k)?.concat(tail))?,
            })
        })
        .collect()
}

/// Everything drawn in a phase portrait of a design point.
pub fn portrait(p: &Params, x: &Word, y: &Word, opts: &PortraitOptions) -> Result<Portrait> {
    let fixed_points = ["L", "R"]
        .iter()
        .filter_map(|s| classify(p, &Word::parse(s).expect("static word")).ok())
        .collect();
    let x_cycle = classify(p, x)?;
    let s = family(p, x, y, opts.k_max)?;
    let s_prime = family(p, x, &y.flip_first(), opts.k_max)?;
    let other_cycles = lyndon_words(opts.max_word_len)
        .into_iter()
        .filter(|w| w.len() > 1 && !x.is_rotation_of(w))
        .filter_map(|w| classify(p, &w).ok())
        .filter(|r| r.is_admissible())
        .collect();
    let mut manifolds = Vec::new();
    for b in Branch::ALL {
        match manifold_polyline(p, x, b, opts.seed_scale, opts.manifold_steps) {
            Ok(m) => manifolds.push(m),
            Err(Error::NonInvertible(_)) if b.manifold == Manifold::Stable => {}
            Err(e) => return Err(e),
        }
    }
    Ok(Portrait {
        params: *p,
        x: x.clone(),
        y: y.clone(),
        fixed_points,
        x_cycle,
        s,
        s_prime,
        other_cycles,
        manifolds,
        quad: homoclinic_points(p, x, y).ok(),
    })
}

#[derive(Serialize)]
struct PointRow {
    k: usize,
    i: usize,
    x: f64,
    y: f64,
}

fn write_family_csv(path: &Path, members: &[FamilyMember]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for m in members {
        for (i, z) in m.report.cycle.points.iter().enumerate() {
            w.serialize(PointRow {
                k: m.k,
                i,
                x: z.x,
                y: z.y,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes `portrait.json`, `s_cycles.csv` and `s_prime_cycles.csv` into `dir`.
pub fn write_bundle(portrait: &Portrait, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let json = dir.join("portrait.json");
    serde_json::to_writer_pretty(BufWriter::new(File::create(&json)?), portrait)?;
    let s = dir.join("s_cycles.csv");
    write_family_csv(&s, &portrait.s)?;
    let s_prime = dir.join("s_prime_cycles.csv");
    write_family_csv(&s_prime, &portrait.s_prime)?;
    Ok(vec![json, s, s_prime])
}
