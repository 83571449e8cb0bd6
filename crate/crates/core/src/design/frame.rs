use serde::{Deserialize, Serialize};

use crate::cycle::solve_cycle;
use crate::error::{Error, Result};
use crate::map::{AffineMap2, Mat2, Params, Point};
use crate::words::Word;

const EIGEN_TOL: f64 = 1e-12;

/// Eigenframe of a saddle `X`-cycle: `(u, v) = Q^{-1} ((x, y) - origin)` with
/// `Q = [zeta1 zeta2]`, in which `f^X` acts as `diag(lambda1, lambda2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaddleFrame {
    pub word: Word,
    pub lambda1: f64,
    pub lambda2: f64,
    pub zeta1: Point,
    pub zeta2: Point,
    pub q: Mat2,
    pub q_inv: Mat2,
    /// The cycle point `(x^X_0, y^X_0)`.
    pub origin: Point,
}

/// Real eigenvalues of `M_X` ordered by modulus, checked distinct and `!= 1`.
pub(crate) fn real_eigenvalues(m: &Mat2, label: &Word) -> Result<(f64, f64)> {
    let [a, b] = m.eigenvalues();
    let scale = 1.0 + m.max_abs();
    if a.im != 0.0 {
        return Err(Error::ComplexEigenvalues(label.to_string()));
    }
    if (a.re - b.re).abs() <= EIGEN_TOL * scale {
        return Err(Error::RepeatedEigenvalue(label.to_string()));
    }
    if (a.re - 1.0).abs() <= EIGEN_TOL * scale || (b.re - 1.0).abs() <= EIGEN_TOL * scale {
        return Err(Error::UnitEigenvalue(label.to_string()));
    }
    Ok((a.re, b.re))
}

/// Unit eigenvector of `m` for the real eigenvalue `lambda`.
pub fn eigenvector(m: &Mat2, lambda: f64) -> Point {
    let [[a, b], [c, d]] = m.0;
    let first = Point::new(b, lambda - a);
    let second = Point::new(lambda - d, c);
    let v = if first.norm() >= second.norm() {
        first
    } else {
        second
    };
    v * (1.0 / v.norm())
}

impl SaddleFrame {
    /// Frame with unit eigenvectors.
    pub fn new(p: &Params, x: &Word) -> Result<Self> {
        let (m, _) = p.word_matrices(x);
        let (l1, l2) = real_eigenvalues(&m, x)?;
        Self::assemble(p, x, l1, l2, eigenvector(&m, l1), eigenvector(&m, l2))
    }

    /// Frame whose axes are the supplied vectors (e.g. the design vectors);
    /// the eigenvalues still come from `M_X`.
    pub fn with_vectors(p: &Params, x: &Word, zeta1: Point, zeta2: Point) -> Result<Self> {
        let (m, _) = p.word_matrices(x);
        let (l1, l2) = real_eigenvalues(&m, x)?;
        Self::assemble(p, x, l1, l2, zeta1, zeta2)
    }

    fn assemble(p: &Params, x: &Word, l1: f64, l2: f64, z1: Point, z2: Point) -> Result<Self> {
        let q = Mat2::from_cols(z1, z2);
        let q_inv = q.inverse().ok_or(Error::Singular("eigenvector matrix Q"))?;
        let origin = solve_cycle(p, x)?.points[0];
        Ok(SaddleFrame {
            word: x.clone(),
            lambda1: l1,
            lambda2: l2,
            zeta1: z1,
            zeta2: z2,
            q,
            q_inv,
            origin,
        })
    }

    pub fn to_uv(&self, z: Point) -> Point {
        self.q_inv.apply(z - self.origin)
    }

    pub fn to_xy(&self, w: Point) -> Point {
        self.q.apply(w) + self.origin
    }

    /// `f^w` written in `(u, v)`-coordinates.
    pub fn conjugate(&self, p: &Params, w: &Word) -> AffineMap2 {
        let f = p.word_map(w);
        AffineMap2 {
            linear: self.q_inv * f.linear * self.q,
            offset: self.q_inv.apply(f.apply(self.origin) - self.origin),
        }
    }

    /// `||Q^{-1} M_X Q - diag(lambda1, lambda2)||_inf`.
    pub fn diagonal_defect(&self, p: &Params) -> f64 {
        let (m, _) = p.word_matrices(&self.word);
        let omega = self.q_inv * m * self.q;
        (omega - Mat2::new(self.lambda1, 0.0, 0.0, self.lambda2)).norm_inf()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn rlr_frame_at_param_f() {
        let p = presets::param_f();
        let frame = SaddleFrame::new(&p, &w("RLR")).unwrap();
        assert!((frame.lambda1 - 6.0 / 13.0).abs() < 1e-14);
        assert!((frame.lambda2 - 13.0 / 6.0).abs() < 1e-14);
        let (m, _) = p.word_matrices(&w("RLR"));
        assert!(frame.diagonal_defect(&p) <= 1e-9 * (1.0 + m.norm_inf()));
        // directions (3/2, 1/2) and (-1/3, 2/3), up to scale
        let cross = |a: Point, b: Point| a.x * b.y - a.y * b.x;
        assert!(cross(frame.zeta2, Point::new(1.5, 0.5)).abs() < 1e-14);
        assert!(cross(frame.zeta1, Point::new(-1.0 / 3.0, 2.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn frame_conjugates_x_to_diagonal() {
        let p = presets::param_f();
        let frame = SaddleFrame::new(&p, &w("RLR")).unwrap();
        let g = frame.conjugate(&p, &w("RLR"));
        let target = Mat2::new(6.0 / 13.0, 0.0, 0.0, 13.0 / 6.0);
        assert!((g.linear - target).max_abs() < 1e-10);
        assert!(g.offset.norm() < 1e-10);
        assert!(frame.to_xy(frame.to_uv(Point::new(0.3, -2.0))).dist(Point::new(0.3, -2.0)) < 1e-14);
    }

    #[test]
    fn complex_pair_is_rejected() {
        // A_R alone with tau^2 < 4 delta
        let p = Params::new(0.0, 1.0, 0.5, 1.0, 1.0).unwrap();
        assert!(matches!(
            SaddleFrame::new(&p, &w("R")),
            Err(Error::ComplexEigenvalues(_))
        ));
    }

    #[test]
    fn unit_eigenvalue_is_rejected() {
        let p = Params::new(0.0, 1.0, 1.5, 0.5, 1.0).unwrap();
        assert!(matches!(
            SaddleFrame::new(&p, &w("R")),
            Err(Error::UnitEigenvalue(_))
        ));
    }
}
