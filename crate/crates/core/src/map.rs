//! The piecewise-linear continuous normal form
//!
//! ```text
//! z' = A_J z + (mu, 0),   A_J = [tau_J 1; -delta_J 0],   J = L if x <= 0, R if x >= 0
//! ```
//!
//! together with the affine compositions `f^S(z) = M_S z + P_S (1,0) mu` along a word.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::words::{Symbol, Word};

/// Width of the band around `x = 0` treated as "on the switching manifold".
pub const SWITCH_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_inf(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Row-major 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[f64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1.0, 0.0], [0.0, 1.0]]);
    pub const ZERO: Mat2 = Mat2([[0.0, 0.0], [0.0, 0.0]]);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn from_cols(c0: Point, c1: Point) -> Self {
        Mat2::new(c0.x, c1.x, c0.y, c1.y)
    }

    pub fn col(&self, j: usize) -> Point {
        Point::new(self.0[0][j], self.0[1][j])
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let [[a, b], [c, d]] = self.0;
        Some(Mat2::new(d / det, -b / det, -c / det, a / det))
    }

    pub fn apply(&self, z: Point) -> Point {
        Point::new(
            self.0[0][0] * z.x + self.0[0][1] * z.y,
            self.0[1][0] * z.x + self.0[1][1] * z.y,
        )
    }

    pub fn scale(&self, s: f64) -> Mat2 {
        let [[a, b], [c, d]] = self.0;
        Mat2::new(a * s, b * s, c * s, d * s)
    }

    pub fn pow(&self, k: u32) -> Mat2 {
        (0..k).fold(Mat2::IDENTITY, |acc, _| *self * acc)
    }

    pub fn norm_inf(&self) -> f64 {
        self.0
            .iter()
            .map(|row| row[0].abs() + row[1].abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }

    /// Condition number in the Frobenius norm.
    pub fn condition(&self) -> f64 {
        match self.inverse() {
            Some(inv) => frobenius(self) * frobenius(&inv),
            None => f64::INFINITY,
        }
    }

    /// Roots of `lambda^2 - trace lambda + det`, sorted by modulus.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        quadratic_eigenvalues(self.trace(), self.det())
    }
}

fn frobenius(m: &Mat2) -> f64 {
    m.0.iter().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

/// Eigenvalues of any 2x2 matrix with the given trace and determinant,
/// sorted so that `|first| <= |second|`.
pub fn quadratic_eigenvalues(trace: f64, det: f64) -> [Complex64; 2] {
    let disc = trace * trace - 4.0 * det;
    let (a, b) = if disc >= 0.0 {
        // avoid cancellation: the larger root first, the other from Vieta
        let root = disc.sqrt();
        let big = 0.5 * (trace + trace.signum() * root);
        let big = if trace == 0.0 { 0.5 * root } else { big };
        let small = if big != 0.0 { det / big } else { -big };
        (Complex64::new(small, 0.0), Complex64::new(big, 0.0))
    } else {
        let im = 0.5 * (-disc).sqrt();
        (
            Complex64::new(0.5 * trace, -im),
            Complex64::new(0.5 * trace, im),
        )
    };
    if a.norm() <= b.norm() {
        [a, b]
    } else {
        [b, a]
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let a = self.0;
        let b = o.0;
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let (a, b) = (self.0, o.0);
        Mat2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        self + o.scale(-1.0)
    }
}

/// `z -> linear z + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap2 {
    pub linear: Mat2,
    pub offset: Point,
}

impl AffineMap2 {
    pub fn apply(&self, z: Point) -> Point {
        self.linear.apply(z) + self.offset
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AffineMap2) -> AffineMap2 {
        AffineMap2 {
            linear: other.linear * self.linear,
            offset: other.linear.apply(self.offset) + other.offset,
        }
    }
}

/// Which parameter is meant by a name such as `tau_L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamName {
    TauL,
    DeltaL,
    TauR,
    DeltaR,
    Mu,
}

impl std::str::FromStr for ParamName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "tau_l" => Ok(ParamName::TauL),
            "delta_l" => Ok(ParamName::DeltaL),
            "tau_r" => Ok(ParamName::TauR),
            "delta_r" => Ok(ParamName::DeltaR),
            "mu" => Ok(ParamName::Mu),
            _ => Err(Error::InvalidParams(format!("unknown parameter name {s:?}"))),
        }
    }
}

/// The five parameters of the normal form.
///
/// JSON form: `{"tau_L": .., "delta_L": .., "tau_R": .., "delta_R": .., "mu": ..}`.
/// Values may be numbers or strings; strings may be decimals (`"-2.5"`) or
/// exact ratios (`"-55/117"`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(rename = "tau_L", deserialize_with = "number_or_string")]
    pub tau_l: f64,
    #[serde(rename = "delta_L", deserialize_with = "number_or_string")]
    pub delta_l: f64,
    #[serde(rename = "tau_R", deserialize_with = "number_or_string")]
    pub tau_r: f64,
    #[serde(rename = "delta_R", deserialize_with = "number_or_string")]
    pub delta_r: f64,
    #[serde(deserialize_with = "number_or_string")]
    pub mu: f64,
}

impl Params {
    pub fn new(tau_l: f64, delta_l: f64, tau_r: f64, delta_r: f64, mu: f64) -> Result<Self> {
        let p = Params {
            tau_l,
            delta_l,
            tau_r,
            delta_r,
            mu,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.tau_l, self.delta_l, self.tau_r, self.delta_r, self.mu];
        if all.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("non-finite value in {self:?}")))
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: Params = serde_json::from_str(text)?;
        p.validate()?;
        Ok(p)
    }

    pub fn get(&self, name: ParamName) -> f64 {
        match name {
            ParamName::TauL => self.tau_l,
            ParamName::DeltaL => self.delta_l,
            ParamName::TauR => self.tau_r,
            ParamName::DeltaR => self.delta_r,
            ParamName::Mu => self.mu,
        }
    }

    pub fn set(&mut self, name: ParamName, value: f64) {
        match name {
            ParamName::TauL => self.tau_l = value,
            ParamName::DeltaL => self.delta_l = value,
            ParamName::TauR => self.tau_r = value,
            ParamName::DeltaR => self.delta_r = value,
            ParamName::Mu => self.mu = value,
        }
    }

    /// The map is invertible iff `delta_L * delta_R > 0`.
    pub fn is_invertible(&self) -> bool {
        self.delta_l * self.delta_r > 0.0
    }

    /// Companion matrix `A_J`.
    pub fn half_matrix(&self, j: Symbol) -> Mat2 {
        let (tau, delta) = match j {
            Symbol::L => (self.tau_l, self.delta_l),
            Symbol::R => (self.tau_r, self.delta_r),
        };
        Mat2::new(tau, 1.0, -delta, 0.0)
    }

    pub fn apply_half(&self, j: Symbol, z: Point) -> Point {
        self.half_matrix(j).apply(z) + Point::new(self.mu, 0.0)
    }

    /// One iterate of the map. On `x = 0` the right branch is used; both agree there.
    pub fn apply(&self, z: Point) -> Point {
        let j = if z.x < 0.0 { Symbol::L } else { Symbol::R };
        self.apply_half(j, z)
    }

    /// Orbit that follows `w` from `z`, ignoring admissibility. Length `n + 1`.
    pub fn follow(&self, w: &Word, z: Point) -> Vec<Point> {
        let mut orbit = Vec::with_capacity(w.len() + 1);
        orbit.push(z);
        let mut cur = z;
        for &s in w.symbols() {
            cur = self.apply_half(s, cur);
            orbit.push(cur);
        }
        orbit
    }

    /// `(M_w, P_w)` with `M_w = A_{n-1} ... A_0` and
    /// `P_w = I + A_{n-1} + A_{n-1} A_{n-2} + ... + A_{n-1} ... A_1`.
    pub fn word_matrices(&self, w: &Word) -> (Mat2, Mat2) {
        w.symbols()
            .iter()
            .fold((Mat2::IDENTITY, Mat2::ZERO), |(m, p), &s| {
                let a = self.half_matrix(s);
                (a * m, a * p + Mat2::IDENTITY)
            })
    }

    /// `f^w` as an affine map.
    pub fn word_map(&self, w: &Word) -> AffineMap2 {
        let (m, p) = self.word_matrices(w);
        AffineMap2 {
            linear: m,
            offset: p.col(0) * self.mu,
        }
    }

    /// Inverse of the map, for `delta_L * delta_R > 0`.
    pub fn invert(&self, z: Point) -> Result<Point> {
        if !self.is_invertible() {
            return Err(Error::NonInvertible(self.delta_l * self.delta_r));
        }
        let shifted = z - Point::new(self.mu, 0.0);
        let tol = SWITCH_TOL * (1.0 + z.norm_inf());
        for j in [Symbol::R, Symbol::L] {
            let inv = self
                .half_matrix(j)
                .inverse()
                .ok_or(Error::Singular("half-map matrix"))?;
            let w = inv.apply(shifted);
            let on_side = match j {
                Symbol::L => w.x <= tol,
                Symbol::R => w.x >= -tol,
            };
            if on_side {
                return Ok(w);
            }
        }
        Err(Error::NoConsistentBranch { x: z.x, y: z.y })
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumberOrString {
    Number(f64),
    Text(String),
}

/// Parses a decimal or `p/q` ratio.
pub fn parse_real(text: &str) -> Result<f64> {
    let text = text.trim();
    let bad = || Error::InvalidParams(format!("cannot parse {text:?} as a real number"));
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            num / den
        }
        None => text.parse().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

fn number_or_string<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    match NumberOrString::deserialize(d)? {
        NumberOrString::Number(v) => Ok(v),
        NumberOrString::Text(s) => parse_real(&s).map_err(serde::de::Error::custom),
    }
}
