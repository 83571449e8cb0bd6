//! Existence, admissibility and stability of `S`-cycles.
//!
//! The `i`-th point of an `S`-cycle is the fixed point of `f^{S^(i)}`,
//! `(I - M_{S^(i)})^{-1} P_{S^(i)} (1,0) mu`. Its x-component also equals
//! `det(P_{S^(i)}) mu / det(I - M_S)`, so admissibility reduces to sign checks.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{Params, Point, SWITCH_TOL};
use crate::words::{Symbol, Word};

/// Relative tolerance for `det(I - M_S) = 0`.
pub const UNIQUENESS_TOL: f64 = 1e-12;

/// Relative tolerance for equality in the stability triangle.
pub const STABILITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cycle {
    pub word: Word,
    /// `points[i]` is the fixed point of `f^{word.shift(i)}`.
    pub points: Vec<Point>,
    /// `det(I - M_S)`.
    pub det_im: f64,
    /// `det(P_{S^(i)})` for each shift `i`, recovered from the points.
    pub det_p: Vec<f64>,
    pub det_m: f64,
    pub trace_m: f64,
    pub multipliers: [Complex64; 2],
}

impl Cycle {
    pub fn period(&self) -> usize {
        self.points.len()
    }

    /// Point `i` counts as on the switching manifold when `|det P_{S^(i)}|`
    /// is at most `SWITCH_TOL`. `det P` does not depend on `mu` or on how
    /// large the rest of the cycle is, so a point that is tiny but has a
    /// well-resolved sign is not misreported.
    pub fn is_boundary(&self, i: usize) -> bool {
        self.det_p[i].abs() <= SWITCH_TOL
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Admissibility {
    Admissible,
    Virtual,
    /// Sign rules hold wherever they apply, but some point lies on `x = 0`.
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stability {
    AsymptoticallyStable,
    StableNotAsymptotic,
    Saddle,
    Unstable,
    NonUnique,
}

impl Stability {
    pub fn is_attracting(self) -> bool {
        self == Stability::AsymptoticallyStable
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub cycle: Cycle,
    pub admissibility: Admissibility,
    pub sides: Vec<Side>,
    pub stability: Stability,
    /// Set when a point lies on the switching manifold; the multiplier-based
    /// stability verdict then need not hold for the full map.
    pub conditional: bool,
}

impl CycleReport {
    pub fn is_admissible(&self) -> bool {
        self.admissibility == Admissibility::Admissible
    }
}

/// `det M_w` as the product of the half-map determinants, which avoids the
/// cancellation of `ad - bc` on a long product.
pub fn word_det(p: &Params, w: &Word) -> f64 {
    let l = w.count_l() as i32;
    let r = (w.len() - w.count_l()) as i32;
    p.delta_l.powi(l) * p.delta_r.powi(r)
}

/// Solves for all `n` points of the `w`-cycle.
///
/// The orbit is found from the block-cyclic system `z_{i+1} - A_i z_i = (mu, 0)`
/// rather than from `(I - M_S)^{-1} P_S`: for long words the entries of `M_S`
/// grow like the unstable multiplier and the single product loses the points
/// to cancellation, while the cyclic system stays as well conditioned as the
/// orbit itself.
pub fn solve_cycle(p: &Params, w: &Word) -> Result<Cycle> {
    let (m, _) = p.word_matrices(w);
    let det_m = word_det(p, w);
    let trace_m = m.trace();
    let det_im = 1.0 - trace_m + det_m;
    if det_im.abs() <= UNIQUENESS_TOL * (1.0 + m.max_abs()) {
        return Err(Error::NonUnique(det_im));
    }
    let n = w.len();
    let mut a = DMatrix::<f64>::zeros(2 * n, 2 * n);
    let mut rhs = DVector::<f64>::zeros(2 * n);
    for i in 0..n {
        let next = (i + 1) % n;
        let h = p.half_matrix(w.at(i)).0;
        for r in 0..2 {
            a[(2 * i + r, 2 * next + r)] += 1.0;
            for c in 0..2 {
                a[(2 * i + r, 2 * i + c)] -= h[r][c];
            }
        }
        rhs[2 * i] = p.mu;
    }
    let z = a.lu().solve(&rhs).ok_or(Error::NonUnique(det_im))?;
    let points: Vec<Point> = (0..n).map(|i| Point::new(z[2 * i], z[2 * i + 1])).collect();
    if !points.iter().all(|q| q.is_finite()) {
        return Err(Error::NonUnique(det_im));
    }
    // x_i det(I - M_S) = det(P_{S^(i)}) mu
    let det_p = if p.mu != 0.0 {
        points.iter().map(|q| q.x * det_im / p.mu).collect()
    } else {
        (0..n).map(|i| p.word_matrices(&w.shift(i)).1.det()).collect()
    };
    Ok(Cycle {
        word: w.clone(),
        points,
        det_im,
        det_p,
        det_m,
        trace_m,
        multipliers: crate::map::quadratic_eigenvalues(trace_m, det_m),
    })
}

/// Which side of `x = 0` each point of the cycle lies on.
pub fn sides(c: &Cycle) -> Vec<Side> {
    c.points
        .iter()
        .enumerate()
        .map(|(i, z)| {
            if c.is_boundary(i) {
                Side::Boundary
            } else if z.x < 0.0 {
                Side::Left
            } else {
                Side::Right
            }
        })
        .collect()
}

/// Admissibility from the signs of `det(P_{S^(i)})` relative to `mu det(I - M_S)`.
pub fn admissibility(p: &Params, c: &Cycle) -> Result<(Admissibility, Vec<Side>)> {
    if p.mu == 0.0 {
        return Err(Error::ZeroMu);
    }
    let sides = sides(c);
    let reference = (p.mu * c.det_im).signum();
    let mut boundary = false;
    for (i, side) in sides.iter().enumerate() {
        if *side == Side::Boundary {
            boundary = true;
            continue;
        }
        let required = match c.word.at(i) {
            Symbol::L => -reference,
            Symbol::R => reference,
        };
        if c.det_p[i].signum() != required {
            return Ok((Admissibility::Virtual, sides));
        }
    }
    let verdict = if boundary {
        Admissibility::Boundary
    } else {
        Admissibility::Admissible
    };
    Ok((verdict, sides))
}

/// Stability from the triangle conditions on `(det M, trace M)`.
pub fn stability_from_trace_det(det: f64, trace: f64) -> Stability {
    let tol = STABILITY_TOL * (1.0 + det.abs() + trace.abs());
    let saddle_node = det - trace + 1.0;
    let period_doubling = det + trace + 1.0;
    let neimark = 1.0 - det;
    if saddle_node.abs() <= tol {
        return Stability::NonUnique;
    }
    let conditions = [saddle_node, period_doubling, neimark];
    if conditions.iter().all(|&c| c > tol) {
        return Stability::AsymptoticallyStable;
    }
    if conditions.iter().all(|&c| c >= -tol) {
        return Stability::StableNotAsymptotic;
    }
    let [a, b] = crate::map::quadratic_eigenvalues(trace, det);
    if a.im == 0.0 && a.norm() < 1.0 - tol && b.norm() > 1.0 + tol {
        Stability::Saddle
    } else {
        Stability::Unstable
    }
}

pub fn stability(c: &Cycle) -> Stability {
    stability_from_trace_det(c.det_m, c.trace_m)
}

/// Eigenvalues of `M_w`, sorted by modulus.
pub fn multipliers(p: &Params, w: &Word) -> [Complex64; 2] {
    p.word_matrices(w).0.eigenvalues()
}

/// Solves, and classifies the admissibility and stability of, the `w`-cycle.
pub fn classify(p: &Params, w: &Word) -> Result<CycleReport> {
    let cycle = solve_cycle(p, w)?;
    let (admissibility, sides) = admissibility(p, &cycle)?;
    let stability = stability(&cycle);
    let conditional = sides.contains(&Side::Boundary);
    Ok(CycleReport {
        cycle,
        admissibility,
        sides,
        stability,
        conditional,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::Mat2;
    use crate::presets;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn right_fixed_point() {
        let c = solve_cycle(&presets::param_f(), &w("R")).unwrap();
        assert_eq!(c.period(), 1);
        assert!(c.points[0].dist(Point::new(0.2, -0.3)) < 1e-15);
    }

    #[test]
    fn rlr_cycle_determinant() {
        let c = solve_cycle(&presets::param_f(), &w("RLR")).unwrap();
        assert_eq!(c.period(), 3);
        assert!((c.det_im + 49.0 / 78.0).abs() < 1e-13);
    }

    #[test]
    fn points_agree_with_single_product_and_close_up() {
        let p = presets::param_f();
        let word = Word::family(&w("RLR"), &w("LR"), 3).unwrap();
        let c = solve_cycle(&p, &word).unwrap();
        for i in 0..word.len() {
            let (mi, pi) = p.word_matrices(&word.shift(i));
            let direct = (Mat2::IDENTITY - mi).inverse().unwrap().apply(pi.col(0) * p.mu);
            assert!(c.points[i].dist(direct) < 1e-12);
            assert!((c.det_p[i] - pi.det()).abs() < 1e-12 * (1.0 + pi.max_abs().powi(2)));
            let image = p.apply_half(word.at(i), c.points[i]);
            assert!(image.dist(c.points[(i + 1) % word.len()]) < 1e-13);
        }
    }

    #[test]
    fn long_words_stay_accurate() {
        // the single product M_S has entries near 1e8 here
        let p = crate::design::closed_family_rlr(2.0).unwrap();
        let word = Word::family(&w("RLR"), &w("LR"), 20).unwrap();
        let r = classify(&p, &word).unwrap();
        assert_eq!(r.admissibility, Admissibility::Admissible);
        assert_eq!(r.stability, Stability::AsymptoticallyStable);
        let n = word.len();
        for i in 0..n {
            let image = p.apply_half(word.at(i), r.cycle.points[i]);
            assert!(image.dist(r.cycle.points[(i + 1) % n]) < 1e-12);
        }
    }

    #[test]
    fn singular_cycle_is_rejected() {
        // tau_R = 1 + delta_R puts eigenvalue 1 in A_R
        let p = Params::new(0.0, 0.5, 1.5, 0.5, 1.0).unwrap();
        assert!(matches!(solve_cycle(&p, &w("R")), Err(Error::NonUnique(_))));
    }

    #[test]
    fn rlr_is_admissible_saddle() {
        let p = presets::param_f();
        let r = classify(&p, &w("RLR")).unwrap();
        assert_eq!(r.admissibility, Admissibility::Admissible);
        assert_eq!(r.stability, Stability::Saddle);
        let [a, b] = r.cycle.multipliers;
        assert!((a.re - 6.0 / 13.0).abs() < 1e-13);
        assert!((b.re - 13.0 / 6.0).abs() < 1e-13);
    }

    #[test]
    fn first_family_member_attracts() {
        let p = presets::param_f();
        let r = classify(&p, &w("RLRLR")).unwrap();
        assert_eq!(r.admissibility, Admissibility::Admissible);
        assert_eq!(r.stability, Stability::AsymptoticallyStable);
        assert!((r.cycle.det_m - 2.0 / 3.0).abs() < 1e-14);
        assert!((r.cycle.trace_m + 60.0 / 169.0).abs() < 1e-14);
    }

    #[test]
    fn flipped_signs_are_virtual() {
        let p = presets::param_f();
        let mut c = solve_cycle(&p, &w("RLRLR")).unwrap();
        for d in &mut c.det_p {
            *d = -*d;
        }
        for z in &mut c.points {
            z.x = -z.x;
        }
        assert_eq!(admissibility(&p, &c).unwrap().0, Admissibility::Virtual);
    }

    #[test]
    fn boundary_points_are_flagged() {
        // force one point onto x = 0
        let p = presets::param_f();
        let mut c = solve_cycle(&p, &w("RLR")).unwrap();
        c.points[1].x = 0.0;
        c.det_p[1] = 0.0;
        let (verdict, sides) = admissibility(&p, &c).unwrap();
        assert_eq!(verdict, Admissibility::Boundary);
        assert_eq!(sides[1], Side::Boundary);
    }

    #[test]
    fn zero_mu_is_an_error() {
        let mut p = presets::param_f();
        let c = solve_cycle(&p, &w("RLR")).unwrap();
        p.mu = 0.0;
        assert!(matches!(admissibility(&p, &c), Err(Error::ZeroMu)));
    }

    #[test]
    fn area_preserving_family_is_not_asymptotic() {
        // delta_R = 1 with tau_L = 1 / tau_R puts the family on the unit circle
        let tau_r = -2.5;
        let p = Params::new(1.0 / tau_r, 1.0, tau_r, 1.0, 1.0).unwrap();
        for k in 1..=4 {
            let word = Word::family(&w("RLR"), &w("LR"), k).unwrap();
            let c = solve_cycle(&p, &word).unwrap();
            assert!((c.det_m - 1.0).abs() < 1e-12);
            assert_eq!(stability(&c), Stability::StableNotAsymptotic, "k = {k}");
        }
    }

    #[test]
    fn triangle_edges() {
        assert_eq!(stability_from_trace_det(0.5, 0.0), Stability::AsymptoticallyStable);
        assert_eq!(stability_from_trace_det(0.5, 1.5), Stability::NonUnique);
        assert_eq!(stability_from_trace_det(0.5, -1.5), Stability::StableNotAsymptotic);
        assert_eq!(stability_from_trace_det(1.0, 0.3), Stability::StableNotAsymptotic);
        assert_eq!(stability_from_trace_det(1.0, 205.0 / 78.0), Stability::Saddle);
        assert_eq!(stability_from_trace_det(-0.5, 1.0), Stability::Saddle);
        assert_eq!(stability_from_trace_det(2.0, 0.0), Stability::Unstable);
        assert_eq!(stability_from_trace_det(6.0, 5.5), Stability::Unstable);
    }

    #[test]
    fn half_map_fixed_point_multipliers() {
        let p = presets::param_f();
        let [a, b] = multipliers(&p, &w("R"));
        for l in [a, b] {
            let res = l * l - l * p.tau_r + p.delta_r;
            assert!(res.norm() < 1e-13);
        }
    }
}
