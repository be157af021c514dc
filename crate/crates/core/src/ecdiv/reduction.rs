use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{CurveQ, EcError, RationalPoint};
use crate::arith::{factor_u64, inv_mod_u64, is_prime_u64, primes_up_to};

/// Largest prime accepted by the exhaustive point count.
pub const POINT_COUNT_LIMIT: u64 = 1_000_000;

fn residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

fn require_good(curve: &CurveQ, p: u64) -> Result<(), EcError> {
    if !is_prime_u64(p) {
        return Err(EcError::NotPrime(p));
    }
    if residue(curve.discriminant(), p) == 0 {
        return Err(EcError::BadReduction(p));
    }
    Ok(())
}

/// `#E(F_p)`, counted as `p + 1 + sum_x (x^3 + Ax + B | p)`.
pub fn point_count(curve: &CurveQ, p: u64) -> Result<u64, EcError> {
    require_good(curve, p)?;
    if p > POINT_COUNT_LIMIT {
        return Err(EcError::LimitExceeded("point counts need p <= 10^6"));
    }
    Ok(count_unchecked(residue(curve.a(), p), residue(curve.b(), p), p))
}

fn count_unchecked(a: u64, b: u64, p: u64) -> u64 {
    let mut square = vec![false; p as usize];
    for y in 1..p {
        square[(y * y % p) as usize] = true;
    }
    let mut n = 1;
    for x in 0..p {
        let v = ((x * x % p * x % p) + a * x % p + b) % p;
        n += if v == 0 { 1 } else if square[v as usize] { 2 } else { 0 };
    }
    n
}

/// Affine point mod `p`; `None` is the point at infinity.
type Pt = Option<(u64, u64)>;

struct ModCurve {
    a: u64,
    p: u64,
}

impl ModCurve {
    fn add(&self, s: Pt, t: Pt) -> Pt {
        let ((x1, y1), (x2, y2)) = match (s, t) {
            (None, t) => return t,
            (s, None) => return s,
            (Some(s), Some(t)) => (s, t),
        };
        let p = self.p;
        let lambda = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return None;
            }
            let num = (3 * x1 % p * x1 + self.a) % p;
            num * inv_mod_u64(2 * y1 % p, p).expect("nonzero mod p") % p
        } else {
            let num = (y2 + p - y1) % p;
            num * inv_mod_u64((x2 + p - x1) % p, p).expect("nonzero mod p") % p
        };
        let x3 = (lambda * lambda % p + 2 * p - x1 - x2) % p;
        let y3 = (lambda * ((x1 + p - x3) % p) % p + p - y1) % p;
        Some((x3, y3))
    }

    fn mul(&self, s: Pt, mut k: u64) -> Pt {
        let (mut acc, mut base) = (None, s);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }
}

fn reduce(q: &RationalPoint, p: u64) -> Pt {
    let RationalPoint::Affine { a, b, d } = q else { return None };
    let d = residue(&BigInt::from(d.clone()), p);
    if d == 0 {
        return None;
    }
    let inv_d = inv_mod_u64(d, p).expect("d is a unit mod p");
    let inv_d2 = inv_d * inv_d % p;
    Some((residue(a, p) * inv_d2 % p, residue(b, p) * (inv_d2 * inv_d % p) % p))
}

/// `(o_p(Q), #E(F_p))`; the order is found by removing prime factors of the
/// group order while the multiple stays at infinity.
pub fn reduction_order(curve: &CurveQ, q: &RationalPoint, p: u64) -> Result<(u64, u64), EcError> {
    if !curve.contains(q) {
        return Err(EcError::PointNotOnCurve);
    }
    let n = point_count(curve, p)?;
    let ec = ModCurve { a: residue(curve.a(), p), p };
    let pt = reduce(q, p);
    if ec.mul(pt, n).is_some() {
        return Err(EcError::InvariantViolated("group order annihilates the point"));
    }
    let mut o = n;
    for (l, _) in factor_u64(n) {
        while o % l == 0 && ec.mul(pt, o / l).is_none() {
            o /= l;
        }
    }
    Ok((o, n))
}

/// Least `n <= limit` with `p | psi_n(Q)`, from the division-polynomial
/// recursion mod `p`. For a good prime and an integral point this is
/// `min{n : p | d_n}`: `p` never divides both `phi_n(Q)` and `psi_n(Q)^2`
/// there, so `p | d_n` exactly when `p | psi_n(Q)`.
pub fn apparition_rank(curve: &CurveQ, q: &RationalPoint, p: u64, limit: u64) -> Result<Option<u64>, EcError> {
    if !curve.contains(q) {
        return Err(EcError::PointNotOnCurve);
    }
    require_good(curve, p)?;
    let RationalPoint::Affine { a: x, b: y, d } = q else {
        return Err(EcError::NonIntegralBasePoint);
    };
    if !d.is_one() {
        return Err(EcError::NonIntegralBasePoint);
    }
    let (a, b, x, y) = (residue(curve.a(), p), residue(curve.b(), p), residue(x, p), residue(y, p));
    let m = |u: u64, v: u64| (u as u128 * v as u128 % p as u128) as u64;
    let sub = |u: u64, v: u64| (u + p - v) % p;
    let cube = |u: u64| m(m(u, u), u);
    let (x2, x3) = (m(x, x), m(m(x, x), x));
    let (x4, x6) = (m(x2, x2), m(x3, x3));
    let a2 = m(a, a);
    let psi3 = sub((3 * x4 % p + m(6 * a % p, x2) + m(12 * b % p, x)) % p, a2);
    let inner = [x6, m(5 * a % p, x4), m(20 * b % p, x3)].iter().fold(0, |s, &t| (s + t) % p);
    let inner = sub(inner, (m(5 * a2 % p, x2) + m(m(4 * a % p, b), x) + m(8 * b % p, b) + m(a2, a)) % p);
    let f4 = 2 * inner % p;
    let two_y = 2 * y % p;
    let two_y_4 = m(m(two_y, two_y), m(two_y, two_y));
    let divides = |n: usize, fn_: u64| if n.is_multiple_of(2) { m(fn_, two_y) == 0 } else { fn_ == 0 };
    let mut f: Vec<u64> = vec![0, 1, 1, psi3, f4];
    for (n, &fn_) in f.iter().enumerate().take(limit.min(4) as usize + 1).skip(1) {
        if divides(n, fn_) {
            return Ok(Some(n as u64));
        }
    }
    for n in 5..=limit as usize {
        let k = n / 2;
        let next = if n % 2 == 1 {
            let lhs = m(f[k + 2], cube(f[k]));
            let rhs = m(f[k - 1], cube(f[k + 1]));
            if k % 2 == 0 {
                sub(m(lhs, two_y_4), rhs)
            } else {
                sub(lhs, m(rhs, two_y_4))
            }
        } else {
            let t1 = m(f[k + 2], m(f[k - 1], f[k - 1]));
            let t2 = m(f[k - 2], m(f[k + 1], f[k + 1]));
            m(f[k], sub(t1, t2))
        };
        f.push(next);
        if divides(n, next) {
            return Ok(Some(n as u64));
        }
    }
    Ok(None)
}

/// Counts of good primes `p <= X` with `m | #E(F_p)` on a CM curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CmReport {
    pub m: u64,
    pub x: u64,
    pub count: u64,
    /// Largest divisor of `m` built from primes that split in the CM field.
    pub m_sp: u64,
    pub tau_m_sp: u64,
    /// `pi(X)`, all primes up to `X`.
    pub prime_count: u64,
    /// `count / (tau(m_sp) pi(X) / m)`
    pub bound_ratio: f64,
}

pub fn cm_divisor_count(curve: &CurveQ, m: u64, x: u64) -> Result<CmReport, EcError> {
    let splits: fn(u64) -> bool = if curve.has_j0() {
        |l| l % 3 == 1
    } else if curve.has_j1728() {
        |l| l % 4 == 1
    } else {
        return Err(EcError::WrongJInvariant);
    };
    if m == 0 {
        return Err(EcError::IndexOutOfRange);
    }
    if x > POINT_COUNT_LIMIT {
        return Err(EcError::LimitExceeded("point counts need X <= 10^6"));
    }
    let (mut m_sp, mut tau_m_sp) = (1u64, 1u64);
    for (l, e) in factor_u64(m) {
        if splits(l) {
            m_sp *= l.pow(e);
            tau_m_sp *= e as u64 + 1;
        }
    }
    let primes = primes_up_to(x);
    let (a, b) = (curve.a(), curve.b());
    let mut count = 0;
    for &p in &primes {
        if residue(curve.discriminant(), p) == 0 {
            continue;
        }
        if count_unchecked(residue(a, p), residue(b, p), p).is_multiple_of(m) {
            count += 1;
        }
    }
    let prime_count = primes.len() as u64;
    let expected = tau_m_sp as f64 * prime_count as f64 / m as f64;
    let bound_ratio = if expected.is_zero() { 0.0 } else { count as f64 / expected };
    Ok(CmReport { m, x, count, m_sp, tau_m_sp, prime_count, bound_ratio })
}

#[cfg(test)]
mod tests {
    use super::super::tests::example;
    use super::super::{curve_new, denom_sequence};
    use super::*;
    use num_bigint::BigUint;

    /// Brute force over all pairs `(x, y)`.
    fn naive_count(a: i64, b: i64, p: u64) -> u64 {
        let p_i = p as i64;
        let mut n = 1;
        for x in 0..p_i {
            for y in 0..p_i {
                if (y * y - x * x * x - a * x - b).rem_euclid(p_i) == 0 {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn counts_match_brute_force() {
        for (a, b) in [(0, -11), (1, 0), (-2, 5), (3, 7)] {
            let e = curve_new(a, b).unwrap();
            for p in primes_up_to(200) {
                match point_count(&e, p) {
                    Ok(n) => assert_eq!(n, naive_count(a, b, p), "{a} {b} {p}"),
                    Err(err) => assert_eq!(err, EcError::BadReduction(p)),
                }
            }
        }
    }

    #[test]
    fn example_orders() {
        let (e, q) = example();
        assert_eq!(point_count(&e, 5), Ok(6));
        assert_eq!(reduction_order(&e, &q, 5), Ok((6, 6)));
        assert_eq!(reduction_order(&e, &q, 2), Err(EcError::BadReduction(2)));
        assert_eq!(reduction_order(&e, &q, 9), Err(EcError::NotPrime(9)));
    }

    #[test]
    fn orders_match_first_appearance() {
        let (e, q) = example();
        let seq = denom_sequence(&e, &q, 40).unwrap();
        for p in primes_up_to(200) {
            let Ok((o, n)) = reduction_order(&e, &q, p) else { continue };
            assert_eq!(n % o, 0);
            let rank = apparition_rank(&e, &q, p, 2 * p + 2).unwrap();
            assert_eq!(rank, Some(o), "p = {p}");
            let direct = (1..=40).find(|&k| (seq.d(k) % BigUint::from(p)).is_zero());
            if o <= 40 {
                assert_eq!(direct, Some(o as u32), "p = {p}");
            } else {
                assert_eq!(direct, None);
            }
        }
    }

    #[test]
    fn cm_counts() {
        let (e, _) = example();
        let r = cm_divisor_count(&e, 12, 1000).unwrap();
        assert_eq!((r.m_sp, r.tau_m_sp), (1, 1));
        let r = cm_divisor_count(&e, 7, 1000).unwrap();
        assert_eq!((r.m_sp, r.tau_m_sp), (7, 2));
        let r = cm_divisor_count(&e, 1, 1000).unwrap();
        // 2, 3 and 11 divide the discriminant
        assert_eq!(r.count, r.prime_count - 3);
        let general = curve_new(-2, 5).unwrap();
        assert_eq!(cm_divisor_count(&general, 3, 100), Err(EcError::WrongJInvariant));
    }
}
