//! The homoclinic orbit that `S[k] = X^k Y` cycles accumulate on, and the
//! diagnostics that go with it.

use serde::{Deserialize, Serialize};

use super::frame::SaddleFrame;
use super::locus::hat_y;
use crate::cycle::solve_cycle;
use crate::error::{Error, Result};
use crate::map::{AffineMap2, Mat2, Params, Point};
use crate::polyline;
use crate::words::Word;

/// `g^Y` counts as mapping the v-axis to the u-axis when `|gamma22|` and
/// `|sigma2|` are below this, relative to the size of `g^Y`.
pub const HOMOCLINIC_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadPoint {
    pub uv: Point,
    pub xy: Point,
}

/// `a -> b` follows `X`, `b -> c` follows `Y`, `c -> d` follows `X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomoclinicQuad {
    pub x: Word,
    pub y: Word,
    pub frame: SaddleFrame,
    pub g_y: AffineMap2,
    pub a: QuadPoint,
    pub b: QuadPoint,
    pub c: QuadPoint,
    pub d: QuadPoint,
    /// `(0, y_hat)`.
    pub phi0: Point,
    /// Image of `phi0` after `alpha` iterates following `XY`.
    pub phi_alpha: Point,
    pub alpha: usize,
}

impl HomoclinicQuad {
    /// `max(1, |a|, |b|, |c|, |d|)` in `(x, y)`.
    pub fn scale(&self) -> f64 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|q| q.xy.norm())
            .fold(1.0, f64::max)
    }

    pub fn points(&self) -> [QuadPoint; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

fn g_y_size(g: &AffineMap2) -> f64 {
    1.0 + g.linear.max_abs() + g.offset.norm_inf()
}

/// Builds `a, b, c, d` from `g^Y` in the unit eigenframe of the `X`-cycle.
pub fn homoclinic_points(p: &Params, x: &Word, y: &Word) -> Result<HomoclinicQuad> {
    let frame = SaddleFrame::new(p, x)?;
    let g_y = frame.conjugate(p, y);
    let [[_, g12], [g21, g22]] = g_y.linear.0;
    let (sigma1, sigma2) = (g_y.offset.x, g_y.offset.y);
    let tol = HOMOCLINIC_TOL * g_y_size(&g_y);
    if g22.abs() > tol || sigma2.abs() > tol {
        return Err(Error::NotHomoclinic {
            gamma22: g22,
            sigma2,
        });
    }
    let den = 1.0 - g12 * g21;
    if den.abs() <= 1e-12 * (1.0 + (g12 * g21).abs()) {
        return Err(Error::DegenerateQuad);
    }
    let l1 = frame.lambda1;
    let quad = |uv: Point| QuadPoint {
        uv,
        xy: frame.to_xy(uv),
    };
    let a = quad(Point::new(0.0, g21 * sigma1 * l1 / den));
    let b = quad(Point::new(0.0, g21 * sigma1 / den));
    let c = quad(Point::new(sigma1 / den, 0.0));
    let d = quad(Point::new(sigma1 * l1 / den, 0.0));
    let alpha = Word::alpha(x, y)?;
    let phi0 = Point::new(0.0, hat_y(p, x, y)?);
    let phi_alpha = p.follow(&x.concat(y), phi0)[alpha];
    Ok(HomoclinicQuad {
        x: x.clone(),
        y: y.clone(),
        frame,
        g_y,
        a,
        b,
        c,
        d,
        phi0,
        phi_alpha,
        alpha,
    })
}

/// Largest mismatch in the chain `a -X-> b -Y-> c -X-> d`, in `(x, y)`.
pub fn chain_defect(p: &Params, quad: &HomoclinicQuad) -> f64 {
    let fx = p.word_map(&quad.x);
    let fy = p.word_map(&quad.y);
    [
        fx.apply(quad.a.xy).dist(quad.b.xy),
        fy.apply(quad.b.xy).dist(quad.c.xy),
        fx.apply(quad.c.xy).dist(quad.d.xy),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiGeometry {
    /// Transversal crossings of `Phi_0 u ... u Phi_{n_X + n_Y - 1}` with `x = 0`.
    pub crossings: Vec<Point>,
    /// `Phi_0, ..., Phi_{n_X + n_Y}`.
    pub phis: Vec<Vec<Point>>,
    /// Largest distance from a vertex of the last `Phi` to the u-axis.
    pub final_max_v: f64,
    pub scale: f64,
}

fn crossings_of(vertices: &[Point], tol: f64, out: &mut Vec<Point>) {
    let mut last: Option<Point> = None;
    for &v in vertices {
        if v.x.abs() <= tol {
            continue;
        }
        if let Some(u) = last {
            if u.x.signum() != v.x.signum() {
                out.push(u.lerp(v, u.x / (u.x - v.x)));
            }
        }
        last = Some(v);
    }
}

/// Successive images of the segment `a b` and their crossings with `x = 0`.
pub fn xi_crossings(
    p: &Params,
    x: &Word,
    y: &Word,
    segment_resolution: usize,
) -> Result<XiGeometry> {
    let quad = homoclinic_points(p, x, y)?;
    let scale = quad.scale();
    let n = x.len() + y.len();
    let mut phis = vec![polyline::segment(
        quad.a.xy,
        quad.b.xy,
        segment_resolution,
    )];
    for i in 0..n {
        let next = polyline::forward(p, &phis[i]);
        phis.push(next);
    }
    let tol = 1e-12 * scale;
    let mut found = Vec::new();
    for phi in &phis[..n] {
        crossings_of(phi, tol, &mut found);
    }
    let mut crossings: Vec<Point> = Vec::new();
    for z in found {
        if crossings.iter().all(|c| c.dist(z) > 1e-9 * scale) {
            crossings.push(z);
        }
    }
    let axis = quad.frame.zeta1 * (1.0 / quad.frame.zeta1.norm());
    let final_max_v = phis[n]
        .iter()
        .map(|&z| {
            let r = z - quad.frame.origin;
            (r.x * axis.y - r.y * axis.x).abs()
        })
        .fold(0.0, f64::max);
    Ok(XiGeometry {
        crossings,
        phis,
        final_max_v,
        scale,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnchorRow {
    pub k: usize,
    /// Largest gap between solved `w_{j n_X}` and the closed form, `j = 0..=k`.
    pub anchor_error: f64,
    /// `|w_{k n_X} - b|` in `(u, v)`.
    pub dist_to_b: f64,
    /// `|w_0 - c|` in `(u, v)`.
    pub dist_to_c: f64,
    /// `|w'_{k n_X} - phi0|` in `(u, v)` for the `X^k Y^0bar` cycle.
    pub prime_dist_to_phi0: Option<f64>,
    /// Gap between the linear part of `g^{S[k]}` and the composed form.
    pub composition_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomoclinicReport {
    pub lambda1: f64,
    pub lambda2: f64,
    pub gamma22: f64,
    pub sigma2: f64,
    pub lambda_product_defect: f64,
    /// `xi22` of `g^{Y^0bar}`; nonzero is the premise for the saddle family.
    pub xi22: f64,
    pub rows: Vec<AnchorRow>,
    /// `dist_to_b[k + 1] / dist_to_b[k]`.
    pub decay_ratios: Vec<f64>,
}

/// Closed form of `w_{j n_X}` for the `X^k Y` cycle, general `sigma2`.
pub fn closed_anchor(frame: &SaddleFrame, g_y: &AffineMap2, k: usize, j: usize) -> Point {
    let [[g11, g12], [g21, _]] = g_y.linear.0;
    let (s1, s2) = (g_y.offset.x, g_y.offset.y);
    let (l1, l2) = (frame.lambda1, frame.lambda2);
    let (l1k, l2k) = (l1.powi(k as i32), l2.powi(k as i32));
    let (l1j, l2j) = (l1.powi(j as i32), l2.powi(j as i32));
    let den = 1.0 - g11 * l1k - g12 * g21 * l1k * l2k;
    Point::new(
        (s1 * l1j + g12 * s2 * l1j * l2k) / den,
        ((g21 * s1 - g11 * s2) * l1k * l2j + s2 * l2j) / den,
    )
}

/// Numerical replay of the coexistence theorem's hypotheses and conclusions.
pub fn theorem1_check(p: &Params, x: &Word, y: &Word, k_max: usize) -> Result<HomoclinicReport> {
    let frame = SaddleFrame::new(p, x)?;
    let g_y = frame.conjugate(p, y);
    let xi22 = frame.conjugate(p, &y.flip_first()).linear.0[1][1];
    let quad = homoclinic_points(p, x, y).ok();
    let phi0_uv = quad.as_ref().map(|q| frame.to_uv(q.phi0));
    let nx = x.len();
    let mut rows = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let word = Word::family(x, y, k)?;
        let cycle = solve_cycle(p, &word)?;
        let mut anchor_error = 0.0f64;
        for j in 0..=k {
            let solved = frame.to_uv(cycle.points[j * nx]);
            let closed = closed_anchor(&frame, &g_y, k, j);
            anchor_error = anchor_error.max(solved.dist(closed));
        }
        let (dist_to_b, dist_to_c) = match &quad {
            Some(q) => (
                frame.to_uv(cycle.points[k * nx]).dist(q.b.uv),
                frame.to_uv(cycle.points[0]).dist(q.c.uv),
            ),
            None => (f64::NAN, f64::NAN),
        };
        let prime = x.power(k)?.concat(&y.flip_first());
        let prime_dist_to_phi0 = match (phi0_uv, solve_cycle(p, &prime)) {
            (Some(phi0), Ok(c)) => Some(frame.to_uv(c.points[k * nx]).dist(phi0)),
            _ => None,
        };
        let composed = {
            let [[g11, g12], [g21, g22]] = g_y.linear.0;
            let (l1k, l2k) = (frame.lambda1.powi(k as i32), frame.lambda2.powi(k as i32));
            Mat2::new(g11 * l1k, g12 * l2k, g21 * l1k, g22 * l2k)
        };
        let direct = frame.conjugate(p, &word).linear;
        let composition_error = (direct - composed).max_abs() / (1.0 + composed.max_abs());
        rows.push(AnchorRow {
            k,
            anchor_error,
            dist_to_b,
            dist_to_c,
            prime_dist_to_phi0,
            composition_error,
        });
    }
    let decay_ratios = rows
        .windows(2)
        .map(|w| w[1].dist_to_b / w[0].dist_to_b)
        .collect();
    Ok(HomoclinicReport {
        lambda1: frame.lambda1,
        lambda2: frame.lambda2,
        gamma22: g_y.linear.0[1][1],
        sigma2: g_y.offset.y,
        lambda_product_defect: (frame.lambda1 * frame.lambda2 - 1.0).abs(),
        xi22,
        rows,
        decay_ratios,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn quad_at_param_f() {
        let p = presets::param_f();
        let q = homoclinic_points(&p, &w("RLR"), &w("LR")).unwrap();
        assert_eq!(q.alpha, 1);
        assert_eq!(q.phi0, Point::new(0.0, -1.0));
        assert!(q.phi_alpha.x.abs() < 1e-12);
        assert_eq!(q.b.uv.x, 0.0);
        assert_eq!(q.c.uv.y, 0.0);
        assert!(chain_defect(&p, &q) < 1e-9 * q.scale());
    }

    #[test]
    fn quad_requires_homoclinic_g_y() {
        let mut p = presets::param_f();
        p.tau_l += 0.05;
        assert!(matches!(
            homoclinic_points(&p, &w("RLR"), &w("LR")),
            Err(Error::NotHomoclinic { .. })
        ));
    }

    #[test]
    fn xi_has_two_crossings_at_param_f() {
        let p = presets::param_f();
        let xi = xi_crossings(&p, &w("RLR"), &w("LR"), 16).unwrap();
        assert_eq!(xi.crossings.len(), 2, "{:?}", xi.crossings);
        assert!(xi.crossings.iter().any(|z| z.dist(Point::new(0.0, -1.0)) < 1e-12));
        assert!(xi.final_max_v <= 1e-9 * xi.scale);
    }

    #[test]
    fn theorem1_replay_at_param_f() {
        let p = presets::param_f();
        let r = theorem1_check(&p, &w("RLR"), &w("LR"), 8).unwrap();
        assert!(r.gamma22.abs() <= 1e-10);
        assert!(r.sigma2.abs() <= 1e-10);
        assert!(r.lambda_product_defect <= 1e-10);
        assert!(r.xi22.abs() > 1e-3);
        for row in &r.rows {
            // the v-component passes through lambda2^k
            assert!(row.anchor_error < 1e-12 * r.lambda2.powi(row.k as i32), "{row:?}");
            assert!(row.composition_error < 1e-8, "{row:?}");
        }
        let last = *r.decay_ratios.last().unwrap();
        assert!((last / (6.0 / 13.0) - 1.0).abs() < 0.05, "{last}");
    }
}
