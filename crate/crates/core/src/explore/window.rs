use serde::{Deserialize, Serialize};

use crate::cycle::solve_cycle;
use crate::error::{Error, Result};
use crate::map::{Params, Point};
use crate::words::Word;

/// Fraction of the bounding box added on every side of the default window.
pub const DEFAULT_PADDING: f64 = 0.2;

/// A rectangle of the plane sampled on a `width x height` pixel grid.
/// Row 0 is the top (`y_max`) row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub width: usize,
    pub height: usize,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, width: usize, height: usize) -> Result<Self> {
        let w = Window {
            x_min,
            x_max,
            y_min,
            y_max,
            width,
            height,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.x_min >= self.x_max || self.y_min >= self.y_max {
            return Err(Error::InvalidWindow(format!(
                "need finite x_min < x_max and y_min < y_max, got [{}, {}] x [{}, {}]",
                self.x_min, self.x_max, self.y_min, self.y_max
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidWindow(format!(
                "empty pixel grid {}x{}",
                self.width, self.height
            )));
        }
        Ok(())
    }

    /// Smallest window holding `points`, grown by `padding` times its extent on
    /// each side. A zero extent is widened to 1.
    pub fn bounding(points: &[Point], padding: f64, width: usize, height: usize) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidWindow("no points to bound".into()));
        }
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for z in points {
            x0 = x0.min(z.x);
            x1 = x1.max(z.x);
            y0 = y0.min(z.y);
            y1 = y1.max(z.y);
        }
        let dx = if x1 > x0 { x1 - x0 } else { 1.0 };
        let dy = if y1 > y0 { y1 - y0 } else { 1.0 };
        Window::new(
            x0 - padding * dx,
            x1 + padding * dx,
            y0 - padding * dy,
            y1 + padding * dy,
            width,
            height,
        )
    }

    pub fn pixel_width(&self) -> f64 {
        (self.x_max - self.x_min) / self.width as f64
    }

    pub fn pixel_height(&self) -> f64 {
        (self.y_max - self.y_min) / self.height as f64
    }

    pub fn diagonal(&self) -> f64 {
        Point::new(self.x_max - self.x_min, self.y_max - self.y_min).norm()
    }

    pub fn pixel_center(&self, col: usize, row: usize) -> Point {
        Point::new(
            self.x_min + (col as f64 + 0.5) * self.pixel_width(),
            self.y_max - (row as f64 + 0.5) * self.pixel_height(),
        )
    }

    /// `(col, row)` of the pixel containing `z`, if inside the window.
    pub fn pixel_of(&self, z: Point) -> Option<(usize, usize)> {
        let c = ((z.x - self.x_min) / self.pixel_width()).floor();
        let r = ((self.y_max - z.y) / self.pixel_height()).floor();
        if c < 0.0 || r < 0.0 || c >= self.width as f64 || r >= self.height as f64 {
            return None;
        }
        Some((c as usize, r as usize))
    }
}

/// Bounding box of the `X^k Y` cycle points for `k <= k_max`, padded 20%.
pub fn default_window(
    p: &Params,
    x: &Word,
    y: &Word,
    k_max: usize,
    width: usize,
    height: usize,
) -> Result<Window> {
    let mut points = Vec::new();
    for k in 1..=k_max.max(1) {
        points.extend(solve_cycle(p, &Word::family(x, y, k)?)?.points);
    }
    Window::bounding(&points, DEFAULT_PADDING, width, height)
}
