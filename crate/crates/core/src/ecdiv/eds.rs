use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::{CurveQ, DenomSequence, EcError, RationalPoint};

/// `w_0 = 0, w_1 = 1, w_2, ..., w_N` with `w_n = psi_n(Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdsSequence {
    terms: Vec<BigInt>,
}

impl EdsSequence {
    /// Wraps arbitrary values `w_1..w_N` (used to test the checkers).
    pub fn from_terms(w: &[BigInt]) -> EdsSequence {
        let mut terms = vec![BigInt::zero()];
        terms.extend_from_slice(w);
        EdsSequence { terms }
    }

    /// Largest index `N`.
    pub fn len(&self) -> u32 {
        self.terms.len() as u32 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `w_n` for `0 <= n <= N`.
    pub fn w(&self, n: u32) -> &BigInt {
        &self.terms[n as usize]
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.terms[1..]
    }

    /// Every `(n, m)` with `n > m >= 1`, `n + m <= N` that fails the
    /// recurrence.
    pub fn ward_failures(&self) -> Vec<(u32, u32)> {
        let big_n = self.len();
        let mut out = Vec::new();
        for n in 2..big_n {
            for m in 1..n.min(big_n - n + 1) {
                if !ward_identity(self, n, m) {
                    out.push((n, m));
                }
            }
        }
        out
    }
}

/// Division-polynomial values at an integral point, evaluated through the
/// integers `f_n = psi_n` (odd `n`) and `f_n = psi_n / 2y` (even `n`), whose
/// duplication formulas need no division.
pub fn division_polynomial_eds(curve: &CurveQ, q: &RationalPoint, n_max: u32) -> Result<EdsSequence, EcError> {
    if !curve.contains(q) {
        return Err(EcError::PointNotOnCurve);
    }
    let RationalPoint::Affine { a: x, b: y, d } = q else {
        return Err(EcError::NonIntegralBasePoint);
    };
    if !d.is_one() {
        return Err(EcError::NonIntegralBasePoint);
    }
    let f = f_values(curve.a(), curve.b(), x, y, n_max.max(4) as usize);
    let two_y = y * 2;
    let terms = f
        .into_iter()
        .take(n_max as usize + 1)
        .enumerate()
        .map(|(n, fn_)| if n % 2 == 0 { fn_ * &two_y } else { fn_ })
        .collect();
    Ok(EdsSequence { terms })
}

fn f_values(a: &BigInt, b: &BigInt, x: &BigInt, y: &BigInt, n_max: usize) -> Vec<BigInt> {
    let x2 = x * x;
    let x3 = &x2 * x;
    let x4 = &x2 * &x2;
    let x6 = &x3 * &x3;
    let a2 = a * a;
    let psi3 = &x4 * 3 + a * &x2 * 6 + b * x * 12 - &a2;
    let f4 = (&x6 + a * &x4 * 5 + b * &x3 * 20 - &a2 * &x2 * 5 - a * b * x * 4 - b * b * 8 - &a2 * a) * 2;
    let two_y_4 = Pow::pow(y * 2, 4u32);
    let mut f = vec![BigInt::zero(), BigInt::one(), BigInt::one(), psi3, f4];
    for n in 5..=n_max {
        let m = n / 2;
        let next = if n % 2 == 1 {
            let lhs = &f[m + 2] * Pow::pow(&f[m], 3u32);
            let rhs = &f[m - 1] * Pow::pow(&f[m + 1], 3u32);
            if m % 2 == 0 {
                lhs * &two_y_4 - rhs
            } else {
                lhs - rhs * &two_y_4
            }
        } else {
            &f[m] * (&f[m + 2] * &f[m - 1] * &f[m - 1] - &f[m - 2] * &f[m + 1] * &f[m + 1])
        };
        f.push(next);
    }
    f
}

fn ward_identity(w: &EdsSequence, n: u32, m: u32) -> bool {
    let t = |k: u32| w.w(k);
    t(n + m) * t(n - m) == t(n + 1) * t(n - 1) * t(m) * t(m) - t(m + 1) * t(m - 1) * t(n) * t(n)
}

/// `w_{n+m} w_{n-m} = w_{n+1} w_{n-1} w_m^2 - w_{m+1} w_{m-1} w_n^2`.
pub fn ward_recurrence_check(w: &EdsSequence, n: u32, m: u32) -> Result<bool, EcError> {
    if m < 1 || n <= m || n + m > w.len() {
        return Err(EcError::IndexOutOfRange);
    }
    Ok(ward_identity(w, n, m))
}

pub fn disc_w(w2: &BigInt, w3: &BigInt, w4: &BigInt) -> BigInt {
    let p = |v: &BigInt, k: u32| Pow::pow(v, k);
    w4 * p(w2, 15) - p(w3, 3) * p(w2, 12) + p(w4, 2) * p(w2, 10) * 3 - w4 * p(w3, 3) * p(w2, 7) * 20
        + p(w4, 3) * p(w2, 5) * 3
        + p(w3, 6) * p(w2, 4) * 16
        + p(w4, 2) * p(w3, 3) * p(w2, 2) * 8
        + p(w4, 4)
}

/// `w_2 w_3 Disc(w) != 0`; needs `N >= 4`.
pub fn is_nonsingular(w: &EdsSequence) -> bool {
    if w.len() < 4 {
        return false;
    }
    let (w2, w3, w4) = (w.w(2), w.w(3), w.w(4));
    !w2.is_zero() && !w3.is_zero() && !disc_w(w2, w3, w4).is_zero()
}

/// `d_n | w_n` (in absolute value) for every index both sequences cover.
pub fn dn_divides_wn_check(seq: &DenomSequence, w: &EdsSequence) -> bool {
    (1..=seq.len().min(w.len())).all(|n| w.w(n).is_multiple_of(&BigInt::from(seq.d(n).clone())))
}
