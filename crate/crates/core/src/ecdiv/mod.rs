//! Elliptic curves `y^2 = x^3 + Ax + B` over `Q`: exact multiples of a
//! rational point, the denominator sequence `d_n`, its primitive divisors,
//! reductions modulo primes and the integer sequence of division-polynomial
//! values `psi_n(Q)`.

mod abc;
mod eds;
mod primitive;
mod reduction;

use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::arith::ArithError;

pub use abc::{abc_identity_check, abc_triple, anb_bound_check, AbcReport};
pub use eds::{
    disc_w, division_polynomial_eds, dn_divides_wn_check, is_nonsingular, ward_recurrence_check,
    EdsSequence,
};
pub use primitive::{
    factor_denominators, growth_report, height_growth, lemma_dn_dn_check, primitive_divisors,
    DenomFactorRow, GrowthRow, HeightReport, LemmaPart, LemmaReport, PrimitiveDivisors, RowMode, BAND,
    BAND_START,
};
pub use reduction::{
    apparition_rank, cm_divisor_count, point_count, reduction_order, CmReport, POINT_COUNT_LIMIT,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EcError {
    #[error("curve is singular (4A^3 + 27B^2 = 0)")]
    SingularCurve,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("point has finite order: {0}Q = O")]
    TorsionPoint(u32),
    #[error("{0} divides the discriminant")]
    BadReduction(u64),
    #[error("division-polynomial values need an integral base point (d_1 = 1)")]
    NonIntegralBasePoint,
    #[error("index out of range")]
    IndexOutOfRange,
    #[error("needs j-invariant 0 or 1728")]
    WrongJInvariant,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("claimed factorization of d_{0} does not match")]
    ClaimMismatch(u32),
    #[error("limit exceeded: {0}")]
    LimitExceeded(&'static str),
    #[error("invariant violated: {0}")]
    InvariantViolated(&'static str),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `y^2 = x^3 + Ax + B` with nonzero discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveQ {
    a: BigInt,
    b: BigInt,
    discriminant: BigInt,
    j: BigRational,
}

pub fn curve_new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<CurveQ, EcError> {
    let (a, b) = (a.into(), b.into());
    let four_a3: BigInt = Pow::pow(&a, 3u32) * 4;
    let core: BigInt = &four_a3 + Pow::pow(&b, 2u32) * 27;
    if core.is_zero() {
        return Err(EcError::SingularCurve);
    }
    let discriminant = -(&core * BigInt::from(16));
    let j = BigRational::new(four_a3 * 1728, core);
    Ok(CurveQ { a, b, discriminant, j })
}

impl CurveQ {
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    /// `-16(4A^3 + 27B^2)`
    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn j_invariant(&self) -> &BigRational {
        &self.j
    }

    pub fn has_j0(&self) -> bool {
        self.a.is_zero()
    }

    pub fn has_j1728(&self) -> bool {
        self.b.is_zero()
    }

    pub fn contains(&self, p: &RationalPoint) -> bool {
        match p {
            RationalPoint::Infinity => true,
            RationalPoint::Affine { a, b, d } => {
                let d = BigInt::from(d.clone());
                let d2 = &d * &d;
                let d4 = &d2 * &d2;
                let d6 = &d4 * &d2;
                b * b == a * a * a + &self.a * a * d4 + &self.b * d6
            }
        }
    }

    pub fn point(&self, x: BigRational, y: BigRational) -> Result<RationalPoint, EcError> {
        let p = RationalPoint::from_xy(&x, &y).ok_or(EcError::PointNotOnCurve)?;
        if !self.contains(&p) {
            return Err(EcError::PointNotOnCurve);
        }
        Ok(p)
    }

    pub fn integral_point(&self, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Result<RationalPoint, EcError> {
        self.point(BigRational::from_integer(x.into()), BigRational::from_integer(y.into()))
    }

    pub fn neg(&self, p: &RationalPoint) -> RationalPoint {
        match p {
            RationalPoint::Infinity => RationalPoint::Infinity,
            RationalPoint::Affine { a, b, d } => {
                RationalPoint::Affine { a: a.clone(), b: -b, d: d.clone() }
            }
        }
    }

    pub fn add(&self, p: &RationalPoint, q: &RationalPoint) -> RationalPoint {
        let (RationalPoint::Affine { .. }, RationalPoint::Affine { .. }) = (p, q) else {
            return if p.is_infinity() { q.clone() } else { p.clone() };
        };
        let (x1, y1) = (p.x().unwrap(), p.y().unwrap());
        let (x2, y2) = (q.x().unwrap(), q.y().unwrap());
        let lambda = if x1 == x2 {
            if y1 != y2 || y1.is_zero() {
                return RationalPoint::Infinity;
            }
            let three_x2 = &x1 * &x1 * BigInt::from(3);
            (three_x2 + BigRational::from_integer(self.a.clone())) / (&y1 * BigInt::from(2))
        } else {
            (&y2 - &y1) / (&x2 - &x1)
        };
        let x3 = &lambda * &lambda - &x1 - &x2;
        let y3 = lambda * (&x1 - &x3) - &y1;
        RationalPoint::from_xy(&x3, &y3).expect("sum of curve points is a curve point")
    }
}

/// A point of `E(Q)`: infinity, or `(a/d^2, b/d^3)` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RationalPoint {
    Infinity,
    Affine { a: BigInt, b: BigInt, d: BigUint },
}

impl RationalPoint {
    /// Canonical form of `(x, y)`; `None` unless the denominators are
    /// `d^2` and `d^3` for a common `d`.
    fn from_xy(x: &BigRational, y: &BigRational) -> Option<RationalPoint> {
        let xden = x.denom().magnitude();
        let d = xden.sqrt();
        if &(&d * &d) != xden {
            return None;
        }
        let d3 = BigInt::from(Pow::pow(&d, 3u32));
        if y.denom().magnitude() != d3.magnitude() {
            return None;
        }
        let b = y.numer() * (&d3 / y.denom());
        Some(RationalPoint::Affine { a: x.numer().clone(), b, d })
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, RationalPoint::Infinity)
    }

    pub fn x(&self) -> Option<BigRational> {
        match self {
            RationalPoint::Infinity => None,
            RationalPoint::Affine { a, d, .. } => {
                Some(BigRational::new(a.clone(), BigInt::from(d * d)))
            }
        }
    }

    pub fn y(&self) -> Option<BigRational> {
        match self {
            RationalPoint::Infinity => None,
            RationalPoint::Affine { b, d, .. } => {
                Some(BigRational::new(b.clone(), BigInt::from(Pow::pow(d, 3u32))))
            }
        }
    }

    /// The denominator `d`; `None` at infinity.
    pub fn d(&self) -> Option<&BigUint> {
        match self {
            RationalPoint::Infinity => None,
            RationalPoint::Affine { d, .. } => Some(d),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.d().is_some_and(|d| d.is_one())
    }

    /// `gcd(a, d) = gcd(b, d) = 1`, `d >= 1`.
    pub fn is_canonical(&self) -> bool {
        match self {
            RationalPoint::Infinity => true,
            RationalPoint::Affine { a, b, d } => {
                let d = BigInt::from(d.clone());
                d.is_positive() && a.gcd(&d).is_one() && b.gcd(&d).is_one()
            }
        }
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPoint::Infinity => f.write_str("O"),
            RationalPoint::Affine { a, b, d } if d.is_one() => write!(f, "({a}, {b})"),
            RationalPoint::Affine { a, b, d } => write!(f, "({a}/{d}^2, {b}/{d}^3)"),
        }
    }
}

/// `nQ` by double-and-add; negative `n` gives `-|n|Q`.
pub fn point_mul(curve: &CurveQ, q: &RationalPoint, n: i64) -> Result<RationalPoint, EcError> {
    if !curve.contains(q) {
        return Err(EcError::PointNotOnCurve);
    }
    let mut acc = RationalPoint::Infinity;
    let mut base = q.clone();
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc = curve.add(&acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = curve.add(&base, &base);
        }
    }
    Ok(if n < 0 { curve.neg(&acc) } else { acc })
}

/// Multiples `Q, 2Q, ..., NQ`, each in canonical form.
#[derive(Clone, Debug)]
pub struct DenomSequence {
    curve: CurveQ,
    base: RationalPoint,
    points: Vec<RationalPoint>,
}

/// Largest torsion order over `Q` is 12; multiples up to this index are
/// always inspected before a point is accepted as non-torsion.
pub const TORSION_SCAN: u32 = 16;

pub fn denom_sequence(curve: &CurveQ, q: &RationalPoint, n_max: u32) -> Result<DenomSequence, EcError> {
    if !curve.contains(q) {
        return Err(EcError::PointNotOnCurve);
    }
    let mut points = Vec::with_capacity(n_max as usize);
    let mut current = RationalPoint::Infinity;
    for n in 1..=n_max.max(TORSION_SCAN) {
        current = curve.add(&current, q);
        if current.is_infinity() {
            return Err(EcError::TorsionPoint(n));
        }
        if n <= n_max {
            points.push(current.clone());
        }
    }
    let seq = DenomSequence { curve: curve.clone(), base: q.clone(), points };
    for n in 1..=n_max {
        for m in (1..n).filter(|m| n % m == 0) {
            if !(seq.d(n) % seq.d(m)).is_zero() {
                return Err(EcError::InvariantViolated("d_m divides d_n for m | n"));
            }
        }
    }
    Ok(seq)
}

impl DenomSequence {
    pub fn curve(&self) -> &CurveQ {
        &self.curve
    }

    pub fn base(&self) -> &RationalPoint {
        &self.base
    }

    pub fn len(&self) -> u32 {
        self.points.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `nQ` for `1 <= n <= len`.
    pub fn point(&self, n: u32) -> &RationalPoint {
        &self.points[n as usize - 1]
    }

    pub fn d(&self, n: u32) -> &BigUint {
        self.point(n).d().expect("multiples in the sequence are affine")
    }

    pub fn a(&self, n: u32) -> &BigInt {
        match self.point(n) {
            RationalPoint::Affine { a, .. } => a,
            RationalPoint::Infinity => unreachable!("multiples in the sequence are affine"),
        }
    }

    pub fn b(&self, n: u32) -> &BigInt {
        match self.point(n) {
            RationalPoint::Affine { b, .. } => b,
            RationalPoint::Infinity => unreachable!("multiples in the sequence are affine"),
        }
    }
}
