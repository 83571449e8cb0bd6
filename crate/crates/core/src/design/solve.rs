//! Damped Newton iteration onto the coexistence locus.
//!
//! One of `tau_L`, `delta_R` is pinned, `delta_L` is eliminated through
//! `det M_X = 1`, and the two off-diagonal residuals are driven to zero over
//! the two remaining free parameters.

use serde::{Deserialize, Serialize};

use super::locus::{delta_l_for_unit_det, residuals, DesignResiduals};
use crate::error::{Error, Result};
use crate::map::{Mat2, ParamName, Params, Point};
use crate::words::Word;

/// Roots this close to `delta_R = 1` lie on the area-preserving branch.
const AREA_PRESERVING_BAND: f64 = 1e-6;
const MAX_HALVINGS: usize = 40;
// Newton steps are capped to a radius that grows on full steps and shrinks on
// damped ones, so the iteration follows the Newton flow from the guess
// instead of jumping to a distant root of the same equations.
const FIRST_STEP: f64 = 0.05;
const MIN_STEP: f64 = 1e-6;
const MAX_STEP: f64 = 1.0;

/// The pinned parameter of a codimension-three search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Pinned {
    TauL(f64),
    DeltaR(f64),
}

impl Pinned {
    pub fn from_name(name: ParamName, value: f64) -> Result<Self> {
        match name {
            ParamName::TauL => Ok(Pinned::TauL(value)),
            ParamName::DeltaR => Ok(Pinned::DeltaR(value)),
            other => Err(Error::InvalidParams(format!(
                "only tau_L or delta_R may be pinned, not {other:?}"
            ))),
        }
    }

    fn free(&self) -> [ParamName; 2] {
        match self {
            Pinned::TauL(_) => [ParamName::TauR, ParamName::DeltaR],
            Pinned::DeltaR(_) => [ParamName::TauL, ParamName::TauR],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Half-width of the square of extra starting points around the guess.
    pub search_radius: f64,
    /// Starting points per side of that square; 0 runs from the guess only.
    pub search_points: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-10,
            max_iter: 100,
            search_radius: 0.3,
            search_points: 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Codim3Solution {
    pub params: Params,
    pub residuals: DesignResiduals,
    pub iterations: usize,
}

struct Problem<'a> {
    x: &'a Word,
    y: &'a Word,
    pinned: Pinned,
    base: Params,
}

impl Problem<'_> {
    fn params_at(&self, theta: Point) -> Result<Params> {
        let mut p = self.base;
        match self.pinned {
            Pinned::TauL(v) => p.tau_l = v,
            Pinned::DeltaR(v) => p.delta_r = v,
        }
        let [a, b] = self.pinned.free();
        p.set(a, theta.x);
        p.set(b, theta.y);
        p.delta_l = delta_l_for_unit_det(self.x, p.delta_r)?;
        p.validate()?;
        Ok(p)
    }

    /// `|(omega12, omega21)|` together with the Newton residual
    /// `((omega12 + omega21) / (delta_R - 1), omega12 - omega21)`.
    ///
    /// The sum carries the area-preserving factor `delta_R - 1`; with it left
    /// in, `omega12` and `-omega21` nearly coincide over the whole plane and
    /// Newton slides along the valley to the spurious `delta_R = 1` roots.
    fn eval(&self, theta: Point) -> Result<(f64, Point)> {
        let p = self.params_at(theta)?;
        let r = residuals(&p, self.x, self.y)?;
        let g = Point::new(
            (r.r_omega12 + r.r_omega21) / (p.delta_r - 1.0),
            r.r_omega12 - r.r_omega21,
        );
        Ok((r.omega_norm(), g))
    }

    fn jacobian_of(&self, theta: Point, f: impl Fn(Point) -> Result<Point>) -> Result<Mat2> {
        let mut cols = [Point::ORIGIN; 2];
        for (j, col) in cols.iter_mut().enumerate() {
            let h = 1e-7 * (1.0 + if j == 0 { theta.x.abs() } else { theta.y.abs() });
            let e = if j == 0 {
                Point::new(h, 0.0)
            } else {
                Point::new(0.0, h)
            };
            let plus = f(theta + e)?;
            let minus = f(theta - e)?;
            *col = (plus - minus) * (0.5 / h);
        }
        Ok(Mat2::from_cols(cols[0], cols[1]))
    }
}

/// Newton's method with central-difference Jacobian and step halving.
///
/// `guess` supplies starting values for the free parameters and `mu`; its
/// `delta_L` is ignored. The locus usually has several isolated roots close
/// together, and Newton from a given start may reach any of them, so Newton
/// is also run from a grid of starts around the guess and the converged root
/// nearest the guess is returned. Errors are those of the run from the guess
/// when no start converges.
pub fn solve_codim3(
    x: &Word,
    y: &Word,
    pinned: Pinned,
    guess: &Params,
    opts: SolverOptions,
) -> Result<Codim3Solution> {
    let problem = Problem {
        x,
        y,
        pinned,
        base: *guess,
    };
    let [a, b] = pinned.free();
    let theta0 = Point::new(guess.get(a), guess.get(b));
    let mut starts = vec![theta0];
    let n = opts.search_points;
    for i in 0..n {
        for j in 0..n {
            let s = |k: usize| {
                if n == 1 {
                    0.0
                } else {
                    opts.search_radius * (2.0 * k as f64 / (n - 1) as f64 - 1.0)
                }
            };
            starts.push(theta0 + Point::new(s(i), s(j)));
        }
    }
    let mut first_err = None;
    let mut best: Option<(f64, Codim3Solution)> = None;
    for start in starts {
        match newton(&problem, start, opts) {
            Ok(sol) => {
                let at = Point::new(sol.params.get(a), sol.params.get(b));
                let d = (at - theta0).norm();
                if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
                    best = Some((d, sol));
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    match best {
        Some((_, sol)) => Ok(sol),
        None => Err(first_err.expect("at least one start")),
    }
}

fn newton(problem: &Problem, start: Point, opts: SolverOptions) -> Result<Codim3Solution> {
    let (x, y) = (problem.x, problem.y);
    let mut theta = start;
    let (mut omega, mut g) = problem.eval(theta)?;
    let mut iterations = 0;
    let mut radius = FIRST_STEP;
    while omega > opts.tol {
        if iterations == opts.max_iter {
            return Err(Error::MaxIterations {
                iterations,
                residual: omega,
            });
        }
        iterations += 1;
        let jac = problem.jacobian_of(theta, |t| Ok(problem.eval(t)?.1))?;
        let det = jac.det();
        let inv = match jac.inverse() {
            Some(inv) if det.abs() > 1e-14 * jac.max_abs().powi(2) => inv,
            _ => return Err(Error::JacobianSingular(det)),
        };
        let mut step = -inv.apply(g);
        if step.norm() > radius {
            step = step * (radius / step.norm());
        }
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial = theta + step * t;
            if let Ok((wt, gt)) = problem.eval(trial) {
                if gt.norm() < g.norm() || wt <= opts.tol {
                    accepted = Some((trial, wt, gt));
                    break;
                }
            }
            t *= 0.5;
        }
        let (next, wn, gn) = accepted.ok_or(Error::NoDescent(omega))?;
        radius = if t == 1.0 {
            (radius * 2.0).min(MAX_STEP)
        } else {
            (radius * t).max(MIN_STEP)
        };
        theta = next;
        omega = wn;
        g = gn;
    }
    let params = problem.params_at(theta)?;
    if (params.delta_r - 1.0).abs() <= AREA_PRESERVING_BAND {
        return Err(Error::DegenerateDesign(
            "converged onto the area-preserving branch delta_R = 1".into(),
        ));
    }
    // re-checks the conditioning of Q at the root
    let residuals = residuals(&params, x, y)?;
    Ok(Codim3Solution {
        params,
        residuals,
        iterations,
    })
}
