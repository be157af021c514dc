use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::{point_mul, CurveQ, EcError, RationalPoint};
use crate::arith::{factor, ln_biguint, FactorBudget};

/// The zero-sum triple coming from the curve equation at `nQ`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbcReport {
    pub n: u32,
    /// `(b^2, -a^3, -B d^6)` for `j = 0`, `(b^2, -a^3, -A a d^4)` for
    /// `j = 1728`, divided by their gcd.
    pub triple: [BigInt; 3],
    pub identity_holds: bool,
    pub gcd_removed: BigUint,
    /// Exact when `radical_exact`, otherwise the product of the primes found.
    pub radical: BigUint,
    pub radical_exact: bool,
    /// `log max |.| / log rad`, only for an exact radical.
    pub quality: Option<f64>,
}

fn multiple(curve: &CurveQ, q: &RationalPoint, n: u32) -> Result<(BigInt, BigInt, BigInt), EcError> {
    if n == 0 {
        return Err(EcError::IndexOutOfRange);
    }
    match point_mul(curve, q, n as i64)? {
        RationalPoint::Infinity => Err(EcError::TorsionPoint(n)),
        RationalPoint::Affine { a, b, d } => Ok((a, b, BigInt::from(d))),
    }
}

/// The coefficient (`B` or `A`) and the unreduced triple.
fn raw_triple(curve: &CurveQ, a: &BigInt, b: &BigInt, d: &BigInt) -> Result<(BigInt, [BigInt; 3]), EcError> {
    let (coef, third) = if curve.has_j0() {
        (curve.b().clone(), -(curve.b() * Pow::pow(d, 6u32)))
    } else if curve.has_j1728() {
        (curve.a().clone(), -(curve.a() * a * Pow::pow(d, 4u32)))
    } else {
        return Err(EcError::WrongJInvariant);
    };
    Ok((coef, [b * b, -(a * a * a), third]))
}

/// The curve equation at `nQ` written as a zero sum, without the radical.
pub fn abc_identity_check(curve: &CurveQ, q: &RationalPoint, n: u32) -> Result<bool, EcError> {
    let (a, b, d) = multiple(curve, q, n)?;
    let (_, raw) = raw_triple(curve, &a, &b, &d)?;
    Ok((&raw[0] + &raw[1] + &raw[2]).is_zero())
}

pub fn abc_triple(curve: &CurveQ, q: &RationalPoint, n: u32, budget: &FactorBudget) -> Result<AbcReport, EcError> {
    let (a, b, d) = multiple(curve, q, n)?;
    let (coef, raw) = raw_triple(curve, &a, &b, &d)?;
    let identity_holds = (&raw[0] + &raw[1] + &raw[2]).is_zero();
    let g = raw[0].gcd(&raw[1]).gcd(&raw[2]);
    let triple = raw.map(|t| t / &g);

    // every prime of the reduced triple divides a, b, d or the coefficient
    let mut radical = BigUint::one();
    let mut radical_exact = true;
    let mut seen: Vec<BigUint> = Vec::new();
    for part in [&a, &b, &d, &coef] {
        if part.is_zero() {
            continue;
        }
        let f = factor(part, budget)?;
        radical_exact &= f.is_complete();
        for p in f.primes() {
            if seen.contains(p) {
                continue;
            }
            seen.push(p.clone());
            let p_int = BigInt::from(p.clone());
            if triple.iter().any(|t| t.is_multiple_of(&p_int)) {
                radical *= p;
            }
        }
    }
    let quality = radical_exact.then(|| {
        let top = triple.iter().map(|t| t.magnitude()).max().expect("three entries");
        ln_biguint(top) / ln_biguint(&radical)
    });
    Ok(AbcReport { n, triple, identity_holds, gcd_removed: g.magnitude().clone(), radical, radical_exact, quality })
}

/// `|a_n b_n| <= sqrt(2) max(|a_n|^3, |B| d_n^6)^(5/6)`, compared as
/// `|a_n b_n|^6 <= 8 max^5`.
pub fn anb_bound_check(curve: &CurveQ, q: &RationalPoint, n: u32) -> Result<bool, EcError> {
    if !curve.has_j0() {
        return Err(EcError::WrongJInvariant);
    }
    let (a, b, d) = multiple(curve, q, n)?;
    let lhs = Pow::pow((&a * &b).magnitude(), 6u32);
    let a3 = Pow::pow(a.magnitude(), 3u32);
    let bd6 = curve.b().magnitude() * Pow::pow(d.magnitude(), 6u32);
    let max = a3.max(bd6);
    Ok(lhs <= Pow::pow(&max, 5u32) * 8u32)
}
