use serde::{Deserialize, Serialize};

use crate::design::{homoclinic_points, SaddleFrame};
use crate::error::{Error, Result};
use crate::map::{Params, Point};
use crate::polyline;
use crate::words::Word;

/// Pieces in the seed fundamental domain.
const SEED_PIECES: usize = 16;
/// Growth stops once a vertex gets this far from the origin.
const MAX_EXTENT: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Manifold {
    Stable,
    Unstable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Plus => 1.0,
            Direction::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub manifold: Manifold,
    pub direction: Direction,
}

impl Branch {
    pub const ALL: [Branch; 4] = [
        Branch::new(Manifold::Unstable, Direction::Plus),
        Branch::new(Manifold::Unstable, Direction::Minus),
        Branch::new(Manifold::Stable, Direction::Plus),
        Branch::new(Manifold::Stable, Direction::Minus),
    ];

    pub const fn new(manifold: Manifold, direction: Direction) -> Self {
        Branch {
            manifold,
            direction,
        }
    }
}

/// One branch of the stable or unstable manifold of the `X`-cycle point
/// `x^X_0`, as a polyline in arc order starting at that point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifoldPolyline {
    pub word: Word,
    pub branch: Branch,
    pub vertices: Vec<Point>,
    /// Index of the first vertex of each fundamental piece.
    pub piece_starts: Vec<usize>,
    /// Iterates of `f^X` taken per piece: 2 when the eigenvalue is negative.
    pub power: usize,
}

impl ManifoldPolyline {
    /// `max(1, |vertex|)` over the polyline.
    pub fn scale(&self) -> f64 {
        self.vertices.iter().map(|z| z.norm()).fold(1.0, f64::max)
    }
}

fn step(p: &Params, manifold: Manifold, vertices: &[Point], iterates: usize) -> Result<Vec<Point>> {
    let mut cur = vertices.to_vec();
    for _ in 0..iterates {
        cur = match manifold {
            Manifold::Unstable => polyline::forward(p, &cur),
            Manifold::Stable => polyline::backward(p, &cur)?,
        };
    }
    Ok(cur)
}

/// Grows a branch from the seed segment of length `seed_scale` along the
/// eigenvector: the fundamental domain between the seed tip and its image
/// under `f^X` is mapped `steps` times (by the inverse for the stable branch)
/// and the pieces are concatenated.
pub fn manifold_polyline(
    p: &Params,
    x: &Word,
    branch: Branch,
    seed_scale: f64,
    steps: usize,
) -> Result<ManifoldPolyline> {
    if !(seed_scale > 0.0 && seed_scale.is_finite()) {
        return Err(Error::InvalidParams(format!("seed scale {seed_scale}")));
    }
    if branch.manifold == Manifold::Stable && !p.is_invertible() {
        return Err(Error::NonInvertible(p.delta_l * p.delta_r));
    }
    let frame = SaddleFrame::new(p, x)?;
    if !(frame.lambda1.abs() < 1.0 && frame.lambda2.abs() > 1.0) {
        return Err(Error::NotSaddle(x.to_string()));
    }
    let (growth, zeta) = match branch.manifold {
        Manifold::Unstable => (frame.lambda2, frame.zeta2),
        Manifold::Stable => (1.0 / frame.lambda1, frame.zeta1),
    };
    let power = if growth > 0.0 { 1 } else { 2 };
    let dir = zeta * branch.direction.sign();
    let tip = frame.origin + dir * seed_scale;
    let tip_image = frame.origin + dir * (seed_scale * growth.powi(power as i32));
    let mut piece = polyline::segment(tip, tip_image, SEED_PIECES);
    let mut vertices = vec![frame.origin];
    let mut piece_starts = vec![1];
    vertices.extend_from_slice(&piece);
    for _ in 0..steps {
        let next = step(p, branch.manifold, &piece, power * x.len())?;
        if next.iter().any(|z| !z.is_finite() || z.dist(frame.origin) > MAX_EXTENT) {
            break;
        }
        piece_starts.push(vertices.len());
        vertices.extend_from_slice(&next[1..]);
        piece = next;
    }
    Ok(ManifoldPolyline {
        word: x.clone(),
        branch,
        vertices,
        piece_starts,
        power,
    })
}

/// Largest distance from `f^{power n_X}` (its inverse for a stable branch) of
/// a vertex to the polyline, over all vertices but the last piece, whose
/// images run past the end.
pub fn invariance_defect(p: &Params, m: &ManifoldPolyline) -> Result<f64> {
    let end = *m.piece_starts.last().unwrap_or(&0);
    let images = m.vertices[..end]
        .iter()
        .map(|&z| {
            let mut cur = z;
            for _ in 0..m.power * m.word.len() {
                cur = match m.branch.manifold {
                    Manifold::Unstable => p.apply(cur),
                    Manifold::Stable => p.invert(cur)?,
                };
            }
            Ok(cur)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(images
        .into_iter()
        .map(|z| polyline::point_polyline_distance(z, &m.vertices))
        .fold(0.0, f64::max))
}

/// The first stretch of `vertices`, in arc order, on which `coord` lies in
/// `[lo, hi]`, with interpolated end points.
fn first_run_in_slab(vertices: &[Point], coord: impl Fn(Point) -> f64, lo: f64, hi: f64) -> Vec<Point> {
    let inside = |z: Point| (lo..=hi).contains(&coord(z));
    let mut run = Vec::new();
    for (i, &v) in vertices.iter().enumerate() {
        let prev = if i > 0 { Some(vertices[i - 1]) } else { None };
        match (prev, inside(v)) {
            (Some(u), true) if run.is_empty() && !inside(u) => {
                let (cu, cv) = (coord(u), coord(v));
                let edge = if cu < lo { lo } else { hi };
                run.push(u.lerp(v, (edge - cu) / (cv - cu)));
                run.push(v);
            }
            (_, true) => run.push(v),
            (Some(u), false) if !run.is_empty() => {
                let (cu, cv) = (coord(u), coord(v));
                let edge = if cv < lo { lo } else { hi };
                run.push(u.lerp(v, (edge - cu) / (cv - cu)));
                break;
            }
            _ => {}
        }
    }
    run
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Coincidence {
    /// `f^Y` applied to the unstable arc from `a` to `b`.
    pub unstable_image: Vec<Point>,
    /// The stable arc over the same stretch of the `u`-axis.
    pub stable: Vec<Point>,
    pub hausdorff: f64,
    pub scale: f64,
}

/// Compares the image under `f^Y` of the unstable arc from `a` to `b` with the
/// stable branch it is supposed to lie on.
pub fn branch_coincidence(
    p: &Params,
    x: &Word,
    y: &Word,
    seed_scale: f64,
    steps: usize,
) -> Result<Coincidence> {
    let quad = homoclinic_points(p, x, y)?;
    let frame = &quad.frame;
    let side = |t: f64| {
        if t >= 0.0 {
            Direction::Plus
        } else {
            Direction::Minus
        }
    };
    let unstable = manifold_polyline(
        p,
        x,
        Branch::new(Manifold::Unstable, side(quad.b.uv.y)),
        seed_scale,
        steps,
    )?;
    let (v0, v1) = (quad.a.uv.y, quad.b.uv.y);
    let arc = first_run_in_slab(&unstable.vertices, |z| frame.to_uv(z).y, v0.min(v1), v0.max(v1));
    if arc.len() < 2 {
        return Err(Error::DegenerateDesign(
            "unstable branch does not reach the homoclinic quad".into(),
        ));
    }
    let mut image = arc;
    for _ in 0..y.len() {
        image = polyline::forward(p, &image);
    }
    let us: Vec<f64> = image.iter().map(|&z| frame.to_uv(z).x).collect();
    let (u0, u1) = us
        .iter()
        .fold((f64::MAX, f64::MIN), |(a, b), &u| (a.min(u), b.max(u)));
    let stable_branch = manifold_polyline(
        p,
        x,
        Branch::new(Manifold::Stable, side(u0 + u1)),
        seed_scale,
        steps,
    )?;
    let stable = first_run_in_slab(&stable_branch.vertices, |z| frame.to_uv(z).x, u0, u1);
    let hausdorff = if stable.len() < 2 {
        f64::INFINITY
    } else {
        polyline::hausdorff(&image, &stable, 4)
    };
    Ok(Coincidence {
        unstable_image: image,
        stable,
        hausdorff,
        scale: quad.scale(),
    })
}
