//! Closed forms for the `S[k] = (RLR)^k LR` and `S'[k] = (RLR)^k RR` cycles on
//! the closed `RLR` family, and their replay against direct products.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycle::{self, Admissibility, Stability};
use crate::design::closed_family_rlr;
use crate::error::{Error, Result};
use crate::map::{Mat2, Params};
use crate::words::Word;

/// Expected signs of `det P_{S[k]^(i)}` for `i = 3j, 3j+1, 3j+2, 3k, 3k+1`.
pub const S_SIGNS: [f64; 5] = [1.0, -1.0, 1.0, -1.0, 1.0];
/// Same for `S'[k]`, where `det(I - M) < 0` flips the reference sign.
pub const S_PRIME_SIGNS: [f64; 5] = [-1.0, 1.0, -1.0, -1.0, -1.0];

pub fn lambda1(delta_r: f64) -> f64 {
    delta_r / (delta_r * delta_r + 1.0)
}

fn check_delta(delta_r: f64) -> Result<()> {
    if delta_r == 0.0 || !delta_r.is_finite() {
        Err(Error::InvalidDeltaR(delta_r))
    } else {
        Ok(())
    }
}

fn check_not_one(delta_r: f64) -> Result<()> {
    check_delta(delta_r)?;
    if delta_r == 1.0 {
        Err(Error::InvalidDeltaR(delta_r))
    } else {
        Ok(())
    }
}

/// `(det M_{S[k]}, trace M_{S[k]})`.
pub fn closed_trace_det(delta_r: f64, k: usize) -> Result<(f64, f64)> {
    check_delta(delta_r)?;
    let d = delta_r;
    let trace = -(d + 1.0) * lambda1(d).powi(k as i32) / (d * d + 1.0);
    Ok((1.0 / d, trace))
}

/// `M_{RLR}^k` through its eigen-decomposition.
pub fn mrlr_power(delta_r: f64, k: usize) -> Result<Mat2> {
    check_not_one(delta_r)?;
    let d = delta_r;
    let c = d / ((d - 1.0) * (d - 1.0));
    let s = 1.0 / (1.0 + c);
    let lk = lambda1(d).powi(k as i32);
    let lmk = 1.0 / lk;
    Ok(Mat2::new(
        lk + c * lmk,
        -d / (d - 1.0) * (lk - lmk),
        -1.0 / (d - 1.0) * (lk - lmk),
        c * lk + lmk,
    )
    .scale(s))
}

/// `sum_{p=0}^{j-1} M_{RLR}^p`.
pub fn geometric_sum(delta_r: f64, j: usize) -> Result<Mat2> {
    check_not_one(delta_r)?;
    let d = delta_r;
    let l = lambda1(d);
    let c = d / ((d - 1.0) * (d - 1.0));
    let a = 1.0 - l.powi(j as i32);
    let b = l * (l.powi(-(j as i32)) - 1.0);
    Ok(Mat2::new(
        a + c * b,
        -d / (d - 1.0) * (a - b),
        -1.0 / (d - 1.0) * (a - b),
        c * a + b,
    )
    .scale(1.0 / ((1.0 + c) * (1.0 - l))))
}

/// `det P_{S[k]^(i)}` for `0 <= i <= 3k + 1`.
pub fn closed_det_p(delta_r: f64, k: usize, i: usize) -> Result<f64> {
    check_delta(delta_r)?;
    if i > 3 * k + 1 {
        return Err(Error::IndexOutOfRange { k, index: i });
    }
    let d = delta_r;
    let d2 = d * d;
    let l = lambda1(d);
    let lk = l.powi(k as i32);
    let h = d2 - d + 1.0;
    let e = d2 + d + 1.0;
    let f = d2 + 1.0;
    if i == 3 * k {
        return Ok(-(1.0 - lk) / h);
    }
    if i == 3 * k + 1 {
        return Ok(((d.powi(5) + d.powi(3) + d - 1.0) * lk + 1.0) / (d2 * f * h));
    }
    let j = (i / 3) as i32;
    let lkj = l.powi(k as i32 - j);
    let lj = l.powi(j);
    Ok(match i % 3 {
        0 => (d * (d + 1.0) + d2 * (d + 1.0) / f * lk - e * lkj - (d.powi(3) - 1.0) / f * lj) / h,
        1 => -((d + 1.0) * f + d * (d + 1.0) * lk - f * e / d * lkj - d2 * e / f * lj) / h,
        _ => {
            ((d + 1.0) / d2 + (d + 1.0) / (d * f) * lk + (d - 1.0) * e * f / d.powi(3) * lkj
                - e / (f * f) * lj)
                / h
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeForms {
    pub det_m: f64,
    pub trace_m: f64,
    pub det_p: Vec<f64>,
}

/// Closed forms for `S'[k] = (RLR)^k RR`.
pub fn closed_prime_forms(delta_r: f64, k: usize) -> Result<PrimeForms> {
    check_delta(delta_r)?;
    let d = delta_r;
    let d2 = d * d;
    let l = lambda1(d);
    let lk = l.powi(k as i32);
    let lmk = 1.0 / lk;
    let h = d2 - d + 1.0;
    let e = d2 + d + 1.0;
    let f = d2 + 1.0;
    let d3m1 = d.powi(3) - 1.0;
    let mut det_p = Vec::with_capacity(3 * k + 2);
    for j in 0..k as i32 {
        let lj = l.powi(j);
        let lmj = 1.0 / lj;
        let mix = lmk - lmj + l.powi(k as i32 - j);
        det_p.push(-(d2 * e * mix - d2 * f - d3m1 * lj * (lmk - 1.0) - d.powi(3) * lk) / h);
        det_p.push(d / h * (e * f * mix - f * f - d * e * lj * (lmk - 1.0) - d * f * lk));
        det_p.push(
            -(e * lmk - d * e / f * lj * (lmk - 1.0) - f * d3m1 * lmj * (lk - 1.0) - f - d * lk)
                / (d * h),
        );
    }
    det_p.push(-(1.0 - lk) / h);
    det_p.push(-d.powi(3) * (1.0 - lk) / h);
    Ok(PrimeForms {
        det_m: d2,
        trace_m: -d * lk + e * lmk,
        det_p,
    })
}

/// Sign class of index `i` within a period-`3k + 2` word.
pub fn index_class(k: usize, i: usize) -> usize {
    if i >= 3 * k {
        3 + (i - 3 * k)
    } else {
        i % 3
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormReport {
    pub k: usize,
    pub delta_r: f64,
    pub lambda1: f64,
    pub det_m: f64,
    pub trace_m: f64,
    pub det_p_by_index: Vec<f64>,
    pub prime: PrimeForms,
    pub max_rel_err_vs_direct: f64,
    pub classification_agreement: bool,
}

/// Relative error tolerance of the closed forms against the direct products.
pub const TOLERANCE: f64 = 1e-9;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    fn from(v: f64) -> Dd {
        Dd { hi: v, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        Dd { hi: s, lo: lo - (s - hi) }
    }

    fn add(self, o: Dd) -> Dd {
        let s = self.hi + o.hi;
        let bb = s - self.hi;
        let e = (self.hi - (s - bb)) + (o.hi - bb);
        Dd::renorm(s, e + self.lo + o.lo)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Dd::renorm(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    fn div(self, o: Dd) -> Dd {
        let q = self.hi / o.hi;
        // one correction step against the exact remainder
        let r = self.sub(o.mul(Dd::from(q)));
        Dd::renorm(q, r.hi / o.hi)
    }
}

/// 2x2 matrix in double-double arithmetic.
///
/// The direct side of the replay is computed this way, with the family
/// parameters also derived from `delta_R` in double-double: rounding `tau_L`
/// to `f64` alone moves `det P` of a long word by far more than `1e-9`.
#[derive(Clone, Copy)]
struct DdMat([[Dd; 2]; 2]);

impl DdMat {
    fn new(a: Dd, b: Dd, c: Dd, d: Dd) -> Self {
        DdMat([[a, b], [c, d]])
    }

    fn identity() -> Self {
        DdMat::new(Dd::ONE, Dd::ZERO, Dd::ZERO, Dd::ONE)
    }

    fn zero() -> Self {
        DdMat::new(Dd::ZERO, Dd::ZERO, Dd::ZERO, Dd::ZERO)
    }

    fn mul(&self, o: &DdMat) -> DdMat {
        let (a, b) = (self.0, o.0);
        let e = |i: usize, j: usize| a[i][0].mul(b[0][j]).add(a[i][1].mul(b[1][j]));
        DdMat::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    fn add(&self, o: &DdMat) -> DdMat {
        let (a, b) = (self.0, o.0);
        let e = |i: usize, j: usize| a[i][j].add(b[i][j]);
        DdMat::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    fn det(&self) -> f64 {
        let a = self.0;
        a[0][0].mul(a[1][1]).sub(a[0][1].mul(a[1][0])).hi
    }

    fn trace(&self) -> f64 {
        self.0[0][0].add(self.0[1][1]).hi
    }

    fn to_mat2(self) -> Mat2 {
        let a = self.0;
        Mat2::new(a[0][0].hi, a[0][1].hi, a[1][0].hi, a[1][1].hi)
    }
}

/// Half-map matrices of the closed family, `[A_L, A_R]`.
fn dd_family(delta_r: f64) -> [DdMat; 2] {
    let one = Dd::ONE;
    let d = Dd::from(delta_r);
    let d2 = d.mul(d);
    let tau_l = one.div(d).sub(one).sub(one.div(d2.mul(d2.add(one))));
    let delta_l = one.div(d2);
    let tau_r = one.add(d).neg();
    [
        DdMat::new(tau_l, one, delta_l.neg(), Dd::ZERO),
        DdMat::new(tau_r, one, d.neg(), Dd::ZERO),
    ]
}

/// `(M_w, P_w)` in double-double.
fn dd_word(family: &[DdMat; 2], w: &Word) -> (DdMat, DdMat) {
    w.symbols().iter().fold((DdMat::identity(), DdMat::zero()), |(m, p), &s| {
        let a = &family[match s {
            crate::words::Symbol::L => 0,
            crate::words::Symbol::R => 1,
        }];
        (a.mul(&m), a.mul(&p).add(&DdMat::identity()))
    })
}

fn rel_err(closed: f64, direct: f64, floor: f64) -> f64 {
    let m = closed.abs().max(direct.abs()).max(floor);
    if m == 0.0 {
        0.0
    } else {
        (closed - direct).abs() / m
    }
}

fn mat_rel_err(closed: &Mat2, direct: &Mat2) -> f64 {
    (*closed - *direct).max_abs() / closed.max_abs().max(direct.max_abs()).max(f64::MIN_POSITIVE)
}

struct Check<'a> {
    k: usize,
    tol: f64,
    worst: &'a mut f64,
}

impl Check<'_> {
    fn close(&mut self, quantity: &str, index: Option<usize>, closed: f64, direct: f64, floor: f64) -> Result<()> {
        let err = rel_err(closed, direct, floor);
        *self.worst = self.worst.max(err);
        if err <= self.tol {
            Ok(())
        } else {
            Err(self.fail(
                quantity,
                index,
                format!("closed form {closed:e} vs direct {direct:e} (relative error {err:e})"),
            ))
        }
    }

    fn fail(&self, quantity: &str, index: Option<usize>, detail: String) -> Error {
        Error::Verification {
            k: self.k,
            index,
            quantity: quantity.to_string(),
            detail,
        }
    }
}

fn s_word(k: usize) -> Result<Word> {
    Word::family(&Word::parse("RLR")?, &Word::parse("LR")?, k)
}

fn s_prime_word(k: usize) -> Result<Word> {
    Ok(Word::parse("RLR")?.power(k)?.concat(&Word::parse("RR")?))
}

fn check_k(p: &Params, delta_r: f64, k: usize) -> Result<ClosedFormReport> {
    let mut worst = 0.0f64;
    let mut chk = Check {
        k,
        tol: TOLERANCE,
        worst: &mut worst,
    };
    let l = lambda1(delta_r);
    let big = l.powi(-(k as i32));
    let family = dd_family(delta_r);

    let (m_rlr, _) = dd_word(&family, &Word::parse("RLR")?);
    let mut direct_pow = DdMat::identity();
    let mut direct_sum = DdMat::zero();
    for _ in 0..k {
        direct_sum = direct_sum.add(&direct_pow);
        direct_pow = m_rlr.mul(&direct_pow);
    }
    let err = mat_rel_err(&mrlr_power(delta_r, k)?, &direct_pow.to_mat2());
    chk.close("M_RLR^k", None, err, 0.0, 1.0)?;
    let err = mat_rel_err(&geometric_sum(delta_r, k)?, &direct_sum.to_mat2());
    chk.close("sum M_RLR^p", None, err, 0.0, 1.0)?;

    let s = s_word(k)?;
    let (m, _) = dd_word(&family, &s);
    let (det_m, trace_m) = closed_trace_det(delta_r, k)?;
    chk.close("det M_S", None, det_m, m.det(), 0.0)?;
    chk.close("trace M_S", None, trace_m, m.trace(), 0.0)?;
    let mut det_p = Vec::with_capacity(s.len());
    for i in 0..s.len() {
        let closed = closed_det_p(delta_r, k, i)?;
        let pi = dd_word(&family, &s.shift(i)).1;
        chk.close("det P_S", Some(i), closed, pi.det(), 0.0)?;
        det_p.push(closed);
    }

    // S' forms are compared against the size of their largest term, lambda1^{-k}
    let prime = closed_prime_forms(delta_r, k)?;
    let sp = s_prime_word(k)?;
    let (mp, _) = dd_word(&family, &sp);
    chk.close("det M_S'", None, prime.det_m, mp.det(), 0.0)?;
    chk.close("trace M_S'", None, prime.trace_m, mp.trace(), big)?;
    for (i, &closed) in prime.det_p.iter().enumerate() {
        let pi = dd_word(&family, &sp.shift(i)).1;
        chk.close("det P_S'", Some(i), closed, pi.det(), big)?;
    }

    let closed_stability = cycle::stability_from_trace_det(det_m, trace_m);
    if closed_stability != Stability::AsymptoticallyStable {
        return Err(chk.fail(
            "stability S",
            None,
            format!("triangle conditions give {closed_stability:?}"),
        ));
    }
    for (i, &v) in det_p.iter().enumerate() {
        if v.signum() != S_SIGNS[index_class(k, i)] {
            return Err(chk.fail("sign det P_S", Some(i), format!("value {v:e}")));
        }
    }
    for (i, &v) in prime.det_p.iter().enumerate() {
        if v.signum() != S_PRIME_SIGNS[index_class(k, i)] {
            return Err(chk.fail("sign det P_S'", Some(i), format!("value {v:e}")));
        }
    }

    let direct_s = cycle::classify(p, &s)?;
    let direct_sp = cycle::classify(p, &sp)?;
    let classification_agreement = direct_s.admissibility == Admissibility::Admissible
        && direct_s.stability == closed_stability
        && direct_sp.admissibility == Admissibility::Admissible
        && direct_sp.stability == Stability::Saddle;
    if !classification_agreement {
        return Err(chk.fail(
            "classification",
            None,
            format!(
                "S: {:?} {:?}, S': {:?} {:?}",
                direct_s.admissibility,
                direct_s.stability,
                direct_sp.admissibility,
                direct_sp.stability
            ),
        ));
    }

    Ok(ClosedFormReport {
        k,
        delta_r,
        lambda1: l,
        det_m,
        trace_m,
        det_p_by_index: det_p,
        prime,
        max_rel_err_vs_direct: worst,
        classification_agreement,
    })
}

/// Replays the closed-form proof for `k = 1..=k_max`. The first failure in
/// order of `k` is returned as [`Error::Verification`].
pub fn verify_theorem5(delta_r: f64, k_max: usize) -> Result<Vec<ClosedFormReport>> {
    check_not_one(delta_r)?;
    let p = closed_family_rlr(delta_r)?;
    let results: Vec<Result<ClosedFormReport>> = (1..=k_max)
        .into_par_iter()
        .map(|k| check_k(&p, delta_r, k))
        .collect();
    results.into_iter().collect()
}
