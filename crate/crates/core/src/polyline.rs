//! Exact images of polylines under the piecewise-affine map and its inverse.
//!
//! An edge that lies in one half-plane maps to a straight edge, so splitting
//! every edge where it crosses the switching line before mapping keeps the
//! image exact.

use crate::error::Result;
use crate::map::{Params, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    fn get(self, z: Point) -> f64 {
        match self {
            Axis::X => z.x,
            Axis::Y => z.y,
        }
    }
}

/// Splits edges where the `axis` coordinate changes sign, inserting the
/// crossing vertex with that coordinate set to exactly zero.
pub fn split_at_zero(vertices: &[Point], axis: Axis) -> Vec<Point> {
    let mut out = Vec::with_capacity(vertices.len() + 4);
    for (i, &v) in vertices.iter().enumerate() {
        if i > 0 {
            let u = vertices[i - 1];
            let (cu, cv) = (axis.get(u), axis.get(v));
            if (cu < 0.0 && cv > 0.0) || (cu > 0.0 && cv < 0.0) {
                let mut z = u.lerp(v, cu / (cu - cv));
                match axis {
                    Axis::X => z.x = 0.0,
                    Axis::Y => z.y = 0.0,
                }
                out.push(z);
            }
        }
        out.push(v);
    }
    out
}

/// Image of a polyline under one iterate of the map.
pub fn forward(p: &Params, vertices: &[Point]) -> Vec<Point> {
    split_at_zero(vertices, Axis::X)
        .into_iter()
        .map(|z| p.apply(z))
        .collect()
}

/// Image under the inverse map. The inverse switches branch on `y = 0`.
pub fn backward(p: &Params, vertices: &[Point]) -> Result<Vec<Point>> {
    split_at_zero(vertices, Axis::Y)
        .into_iter()
        .map(|z| p.invert(z))
        .collect()
}

pub fn point_segment_distance(z: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return z.dist(a);
    }
    let t = ((z - a).dot(ab) / len2).clamp(0.0, 1.0);
    z.dist(a + ab * t)
}

pub fn point_polyline_distance(z: Point, vertices: &[Point]) -> f64 {
    match vertices {
        [] => f64::INFINITY,
        [only] => z.dist(*only),
        _ => vertices
            .windows(2)
            .map(|e| point_segment_distance(z, e[0], e[1]))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Largest distance from a point of `a` to the polyline `b`; each edge of `a`
/// is sampled at `samples` interior points besides its vertices.
pub fn directed_hausdorff(a: &[Point], b: &[Point], samples: usize) -> f64 {
    let mut worst = 0.0f64;
    for (i, &v) in a.iter().enumerate() {
        worst = worst.max(point_polyline_distance(v, b));
        if let Some(&next) = a.get(i + 1) {
            for s in 1..=samples {
                let z = v.lerp(next, s as f64 / (samples + 1) as f64);
                worst = worst.max(point_polyline_distance(z, b));
            }
        }
    }
    worst
}

pub fn hausdorff(a: &[Point], b: &[Point], samples: usize) -> f64 {
    directed_hausdorff(a, b, samples).max(directed_hausdorff(b, a, samples))
}

/// Uniformly subdivided segment with `pieces` edges.
pub fn segment(a: Point, b: Point, pieces: usize) -> Vec<Point> {
    let pieces = pieces.max(1);
    (0..=pieces)
        .map(|i| a.lerp(b, i as f64 / pieces as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    #[test]
    fn split_inserts_exact_crossing() {
        let v = [Point::new(-1.0, 0.0), Point::new(3.0, 4.0)];
        let s = split_at_zero(&v, Axis::X);
        assert_eq!(s.len(), 3);
        assert_eq!(s[1], Point::new(0.0, 1.0));
    }

    #[test]
    fn forward_image_is_exact_on_sample_points() {
        let p = presets::param_f();
        let seg = segment(Point::new(-0.7, 0.4), Point::new(1.3, -0.9), 3);
        let image = forward(&p, &seg);
        for t in [0.05, 0.3, 0.51, 0.77, 0.99] {
            let z = seg[0].lerp(*seg.last().unwrap(), t);
            assert!(point_polyline_distance(p.apply(z), &image) < 1e-14);
        }
    }

    #[test]
    fn backward_undoes_forward() {
        let p = presets::param_f();
        let seg = segment(Point::new(-0.7, 0.4), Point::new(1.3, -0.9), 5);
        let there = forward(&p, &seg);
        let back = backward(&p, &there).unwrap();
        assert!(hausdorff(&seg, &back, 4) < 1e-13);
    }

    #[test]
    fn hausdorff_of_offset_segments() {
        let a = segment(Point::new(0.0, 0.0), Point::new(1.0, 0.0), 1);
        let b = segment(Point::new(0.0, 0.5), Point::new(1.0, 0.5), 1);
        assert!((hausdorff(&a, &b, 3) - 0.5).abs() < 1e-15);
        assert_eq!(hausdorff(&a, &a, 3), 0.0);
    }
}
