use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::window::Window;
use crate::cycle::{classify, Cycle};
use crate::error::{Error, Result};
use crate::map::{Params, Point};
use crate::words::Word;

/// The orbit left the disc of radius `div_radius`.
pub const DIVERGED: i32 = -1;
/// Neither converged nor diverged within the iteration budget.
pub const UNRESOLVED: i32 = 0;

/// A cycle to detect, reported as `label` (at least 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasinTarget {
    pub label: i32,
    pub cycle: Cycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasinConfig {
    pub max_iter: usize,
    pub div_radius: f64,
    /// Convergence radius as a fraction of the window diagonal.
    pub eps_rel: f64,
}

impl Default for BasinConfig {
    fn default() -> Self {
        BasinConfig {
            max_iter: 100_000,
            div_radius: 1e8,
            eps_rel: 1e-8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasinImage {
    pub window: Window,
    /// Row-major, row 0 on top.
    pub labels: Vec<i32>,
}

impl BasinImage {
    pub fn get(&self, col: usize, row: usize) -> i32 {
        self.labels[row * self.window.width + col]
    }

    /// Label of the pixel containing `z`.
    pub fn label_at(&self, z: Point) -> Option<i32> {
        self.window.pixel_of(z).map(|(c, r)| self.get(c, r))
    }

    /// `(label, count)` sorted by label.
    pub fn histogram(&self) -> Vec<(i32, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for &l in &self.labels {
            *counts.entry(l).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }
}

/// Targets for the `X^k Y` cycles, `k = 1..=k_max`, labeled `k`.
pub fn family_targets(p: &Params, x: &Word, y: &Word, k_max: usize) -> Result<Vec<BasinTarget>> {
    (1..=k_max)
        .map(|k| {
            let report = classify(p, &Word::family(x, y, k)?)?;
            Ok(BasinTarget {
                label: k as i32,
                cycle: report.cycle,
            })
        })
        .collect()
}

/// Cycle points of all targets sorted by `x`, for range lookups.
struct PointIndex {
    entries: Vec<(f64, f64, usize)>,
}

impl PointIndex {
    fn new(targets: &[BasinTarget]) -> Self {
        let mut entries: Vec<(f64, f64, usize)> = targets
            .iter()
            .enumerate()
            .flat_map(|(t, tg)| tg.cycle.points.iter().map(move |z| (z.x, z.y, t)))
            .collect();
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        PointIndex { entries }
    }

    /// Lowest target index with a point within `eps` of `z`.
    fn nearest_target(&self, z: Point, eps: f64) -> Option<usize> {
        let start = self.entries.partition_point(|e| e.0 < z.x - eps);
        let mut best: Option<usize> = None;
        for &(x, y, t) in &self.entries[start..] {
            if x > z.x + eps {
                break;
            }
            if Point::new(x, y).dist(z) <= eps && best.map_or(true, |b| t < b) {
                best = Some(t);
            }
        }
        best
    }
}

fn label_orbit(
    p: &Params,
    start: Point,
    targets: &[BasinTarget],
    index: &PointIndex,
    eps: f64,
    cfg: &BasinConfig,
) -> i32 {
    let mut z = start;
    let mut run: Option<(usize, usize)> = None;
    for _ in 0..=cfg.max_iter {
        if !(z.norm() <= cfg.div_radius) {
            return DIVERGED;
        }
        run = match (index.nearest_target(z, eps), run) {
            (Some(t), Some((prev, n))) if t == prev => Some((t, n + 1)),
            (Some(t), _) => Some((t, 1)),
            (None, _) => None,
        };
        if let Some((t, n)) = run {
            if n >= targets[t].cycle.period() {
                return targets[t].label;
            }
        }
        z = p.apply(z);
    }
    UNRESOLVED
}

/// Labels each pixel by where the orbit of its center goes: the label of the
/// first target whose cycle it stays within `eps` of for a full period,
/// `DIVERGED`, or `UNRESOLVED`. Rows run in parallel on the current rayon pool;
/// the result does not depend on scheduling.
pub fn basin_raster(
    p: &Params,
    window: &Window,
    targets: &[BasinTarget],
    cfg: &BasinConfig,
) -> Result<BasinImage> {
    window.validate()?;
    if targets.is_empty() {
        return Err(Error::InvalidTargets("no targets".into()));
    }
    for t in targets {
        if t.label < 1 {
            return Err(Error::InvalidTargets(format!(
                "label {} of {} is reserved",
                t.label, t.cycle.word
            )));
        }
        let report = classify(p, &t.cycle.word)?;
        if !report.is_admissible() {
            return Err(Error::InvalidTargets(format!(
                "{} is not admissible",
                t.cycle.word
            )));
        }
    }
    let index = PointIndex::new(targets);
    let eps = cfg.eps_rel * window.diagonal();
    let labels: Vec<i32> = (0..window.height)
        .into_par_iter()
        .flat_map_iter(|row| {
            let index = &index;
            (0..window.width).map(move |col| {
                label_orbit(p, window.pixel_center(col, row), targets, index, eps, cfg)
            })
        })
        .collect();
    Ok(BasinImage {
        window: *window,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn param_f() -> (Params, Vec<BasinTarget>) {
        let e = presets::by_name("F").unwrap();
        let t = family_targets(&e.params, &e.x, &e.y, 3).unwrap();
        (e.params, t)
    }

    #[test]
    fn cycle_points_label_themselves() {
        let (p, targets) = param_f();
        let index = PointIndex::new(&targets);
        for t in &targets {
            for &z in &t.cycle.points {
                let l = label_orbit(&p, z, &targets, &index, 1e-9, &BasinConfig::default());
                assert_eq!(l, t.label);
            }
        }
    }

    #[test]
    fn far_field_diverges() {
        let (p, targets) = param_f();
        let index = PointIndex::new(&targets);
        let l = label_orbit(&p, Point::new(1e6, 1e6), &targets, &index, 1e-9, &BasinConfig::default());
        assert_eq!(l, DIVERGED);
    }

    #[test]
    fn rejects_bad_targets() {
        let (p, mut targets) = param_f();
        let w = Window::new(-1.0, 1.0, -1.0, 1.0, 2, 2).unwrap();
        assert!(basin_raster(&p, &w, &[], &BasinConfig::default()).is_err());
        targets[0].label = UNRESOLVED;
        assert!(basin_raster(&p, &w, &targets, &BasinConfig::default()).is_err());
    }

    #[test]
    fn histogram_counts_every_pixel() {
        let (p, targets) = param_f();
        let w = Window::new(-3.0, 3.0, -3.0, 3.0, 8, 6).unwrap();
        let img = basin_raster(&p, &w, &targets, &BasinConfig { max_iter: 2000, ..Default::default() }).unwrap();
        assert_eq!(img.labels.len(), 48);
        assert_eq!(img.histogram().iter().map(|h| h.1).sum::<usize>(), 48);
    }
}
