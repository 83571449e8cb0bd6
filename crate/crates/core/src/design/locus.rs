//! The three scalar conditions that cut out the coexistence locus for a pair
//! `(X, Y)`: `det M_X = 1` (solved for `delta_L`) and the vanishing of both
//! off-diagonal entries of `Q^{-1} M_X Q`, where the columns of `Q` are built
//! from the point `(0, y_hat)` at which the unstable manifold of the
//! `X`-cycle meets the switching manifold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{Mat2, Params, Point};
use crate::words::Word;

/// `Q` whose column-normalized condition number exceeds this is degenerate.
pub const MAX_Q_CONDITION: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignResiduals {
    /// `delta_L - delta_R^{-(n_X - l_X) / l_X}`.
    pub r_delta: f64,
    pub r_omega12: f64,
    pub r_omega21: f64,
}

impl DesignResiduals {
    pub fn norm(&self) -> f64 {
        (self.r_delta.powi(2) + self.r_omega12.powi(2) + self.r_omega21.powi(2)).sqrt()
    }

    pub fn omega_norm(&self) -> f64 {
        self.r_omega12.hypot(self.r_omega21)
    }
}

/// `delta_L` that makes `det M_X = 1`.
pub fn delta_l_for_unit_det(x: &Word, delta_r: f64) -> Result<f64> {
    let l = x.count_l();
    if l == 0 {
        return Err(Error::DegenerateDesign(format!("{x} contains no L")));
    }
    let r = (x.len() - l) as f64;
    let value = delta_r.powf(-r / l as f64);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::DegenerateDesign(format!(
            "delta_R = {delta_r} gives no real delta_L"
        )))
    }
}

/// `y_hat` such that `(0, y_hat)` lands on `x = 0` after `alpha` iterates
/// following `XY`.
pub fn hat_y(p: &Params, x: &Word, y: &Word) -> Result<f64> {
    if p.mu == 0.0 {
        return Err(Error::ZeroMu);
    }
    let alpha = Word::alpha(x, y)?;
    let prefix = x.concat(y).prefix(alpha)?;
    let f = p.word_map(&prefix);
    // x-component of f(0, y_hat) = linear[0][1] y_hat + offset.x
    let slope = f.linear.0[0][1];
    if slope.abs() <= 1e-14 * (1.0 + f.offset.x.abs()) {
        return Err(Error::DegenerateHatY);
    }
    Ok(-f.offset.x / slope)
}

/// `zeta2 = (I - M_X)(0, y_hat) - P_X (1, 0) mu` and `zeta1 = M_X^{-1} M_Y zeta2`.
pub fn design_vectors(p: &Params, x: &Word, y: &Word) -> Result<(Point, Point)> {
    let y_hat = hat_y(p, x, y)?;
    let (mx, px) = p.word_matrices(x);
    let (my, _) = p.word_matrices(y);
    let zeta2 = (Mat2::IDENTITY - mx).apply(Point::new(0.0, y_hat)) - px.col(0) * p.mu;
    let mx_inv = mx.inverse().ok_or(Error::Singular("M_X"))?;
    let zeta1 = mx_inv.apply(my.apply(zeta2));
    Ok((zeta1, zeta2))
}

fn normalized_condition(q: &Mat2) -> f64 {
    let (c0, c1) = (q.col(0), q.col(1));
    if c0.norm() == 0.0 || c1.norm() == 0.0 {
        return f64::INFINITY;
    }
    Mat2::from_cols(c0 * (1.0 / c0.norm()), c1 * (1.0 / c1.norm())).condition()
}

/// Residuals of the three design conditions at `p`.
pub fn residuals(p: &Params, x: &Word, y: &Word) -> Result<DesignResiduals> {
    let r_delta = p.delta_l - delta_l_for_unit_det(x, p.delta_r)?;
    let (zeta1, zeta2) = design_vectors(p, x, y)?;
    let q = Mat2::from_cols(zeta1, zeta2);
    let cond = normalized_condition(&q);
    if !(cond <= MAX_Q_CONDITION) {
        return Err(Error::DegenerateDesign(format!(
            "Q = [zeta1 zeta2] is near-singular (condition {cond:e})"
        )));
    }
    let q_inv = q.inverse().ok_or(Error::Singular("Q"))?;
    let (mx, _) = p.word_matrices(x);
    let omega = q_inv * mx * q;
    Ok(DesignResiduals {
        r_delta,
        r_omega12: omega.0[0][1],
        r_omega21: omega.0[1][0],
    })
}

/// Closed-form locus for `X = RLR`, `Y = LR`, parametrized by `delta_R`:
/// `tau_L = -1 + 1/delta_R - 1/(delta_R^2 (delta_R^2 + 1))`,
/// `delta_L = 1/delta_R^2`, `tau_R = -1 - delta_R`, with `mu = 1`.
pub fn closed_family_rlr(delta_r: f64) -> Result<Params> {
    if delta_r == 0.0 || !delta_r.is_finite() {
        return Err(Error::InvalidDeltaR(delta_r));
    }
    let d2 = delta_r * delta_r;
    Params::new(
        -1.0 + 1.0 / delta_r - 1.0 / (d2 * (d2 + 1.0)),
        1.0 / d2,
        -1.0 - delta_r,
        delta_r,
        1.0,
    )
}
