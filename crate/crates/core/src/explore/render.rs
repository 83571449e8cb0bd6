use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, ImageEncoder, Rgb, RgbImage};
use serde::{Deserialize, Serialize};

use super::basin::{BasinImage, DIVERGED, UNRESOLVED};
use super::window::Window;
use crate::error::{Error, Result};

pub const WHITE: [u8; 3] = [255, 255, 255];
pub const BLACK: [u8; 3] = [0, 0, 0];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette {
    pub colors: BTreeMap<i32, [u8; 3]>,
}

fn hsv(h: f64, s: f64, v: f64) -> [u8; 3] {
    let i = (h * 6.0).floor();
    let f = h * 6.0 - i;
    let (p, q, t) = (v * (1.0 - s), v * (1.0 - f * s), v * (1.0 - (1.0 - f) * s));
    let (r, g, b) = match i as i32 % 6 {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    [r, g, b].map(|c| (c * 255.0).round() as u8)
}

impl Palette {
    /// White for `DIVERGED`, black for `UNRESOLVED`, and hues spread by the
    /// golden ratio for labels `1..=max_label`.
    pub fn for_labels(max_label: i32) -> Self {
        let mut colors = BTreeMap::new();
        colors.insert(DIVERGED, WHITE);
        colors.insert(UNRESOLVED, BLACK);
        for k in 1..=max_label {
            let h = ((k - 1) as f64 * 0.618_033_988_749_895).fract();
            let v = if k % 2 == 0 { 0.7 } else { 0.95 };
            colors.insert(k, hsv(h, 0.75, v));
        }
        Palette { colors }
    }

    pub fn color(&self, label: i32) -> Result<[u8; 3]> {
        self.colors.get(&label).copied().ok_or(Error::MissingColor(label))
    }
}

pub fn to_rgb(img: &BasinImage, palette: &Palette) -> Result<RgbImage> {
    let (w, h) = (img.window.width, img.window.height);
    let mut out = RgbImage::new(w as u32, h as u32);
    for row in 0..h {
        for col in 0..w {
            out.put_pixel(col as u32, row as u32, Rgb(palette.color(img.get(col, row))?));
        }
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
pub struct Sidecar {
    pub image: String,
    pub window: Window,
    /// Label to RGB.
    pub colors: BTreeMap<i32, [u8; 3]>,
}

/// Writes a binary PPM to `path` and the label-to-color table beside it
/// (same name, `.json`). Returns the sidecar path.
pub fn render_image(img: &BasinImage, palette: &Palette, path: &Path) -> Result<PathBuf> {
    let rgb = to_rgb(img, palette)?;
    let file = BufWriter::new(File::create(path)?);
    PnmEncoder::new(file)
        .with_subtype(PnmSubtype::Pixmap(SampleEncoding::Binary))
        .write_image(rgb.as_raw(), rgb.width(), rgb.height(), ExtendedColorType::Rgb8)?;
    let sidecar = path.with_extension("json");
    let used: std::collections::BTreeSet<i32> = img.labels.iter().copied().collect();
    let meta = Sidecar {
        image: path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        window: img.window,
        colors: palette
            .colors
            .iter()
            .filter(|(l, _)| used.contains(l))
            .map(|(&l, &c)| (l, c))
            .collect(),
    };
    serde_json::to_writer_pretty(BufWriter::new(File::create(&sidecar)?), &meta)?;
    Ok(sidecar)
}
