//! Residue rings used by the primality test and by Pollard rho.
//!
//! Two Montgomery kernels cover moduli below 2^64 and 2^127; anything larger
//! falls back to plain `BigUint` reduction.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub(crate) trait ModRing {
    type Elem: Clone + PartialEq;

    fn modulus(&self) -> BigUint;
    fn lift(&self, x: &BigUint) -> Self::Elem;
    #[cfg_attr(not(test), allow(dead_code))]
    fn to_big(&self, x: &Self::Elem) -> BigUint;
    fn one(&self) -> Self::Elem;
    fn zero(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// gcd of the raw representative with the modulus. Montgomery scaling
    /// multiplies by a unit, so the gcd is unaffected.
    fn gcd_modulus(&self, x: &Self::Elem) -> BigUint;

    fn pow(&self, base: &Self::Elem, exp: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        let bits = exp.bits();
        for i in (0..bits).rev() {
            acc = self.mul(&acc, &acc);
            if exp.bit(i) {
                acc = self.mul(&acc, base);
            }
        }
        acc
    }
}

pub(crate) struct Mont64 {
    n: u64,
    ninv: u64,
    r2: u64,
}

impl Mont64 {
    pub(crate) fn new(n: u64) -> Self {
        debug_assert!(n & 1 == 1 && n > 1);
        let mut inv = n;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % n as u128) as u64;
        let r2 = ((r as u128 * r as u128) % n as u128) as u64;
        Mont64 { n, ninv: inv.wrapping_neg(), r2 }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.ninv);
        let (s, carry) = t.overflowing_add(m as u128 * self.n as u128);
        let hi = (s >> 64) as u64;
        if carry || hi >= self.n {
            hi.wrapping_sub(self.n)
        } else {
            hi
        }
    }

    #[inline]
    pub(crate) fn mulm(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    pub(crate) fn addm(&self, a: u64, b: u64) -> u64 {
        let (s, c) = a.overflowing_add(b);
        if c || s >= self.n {
            s.wrapping_sub(self.n)
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn subm(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(b).wrapping_add(self.n)
        }
    }

    pub(crate) fn to_mont(&self, x: u64) -> u64 {
        self.mulm(x % self.n, self.r2)
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub(crate) fn leave_mont(&self, x: u64) -> u64 {
        self.redc(x as u128)
    }
}

impl ModRing for Mont64 {
    type Elem = u64;

    fn modulus(&self) -> BigUint {
        BigUint::from(self.n)
    }
    fn lift(&self, x: &BigUint) -> u64 {
        let r = (x % self.n).to_u64().unwrap_or(0);
        self.to_mont(r)
    }
    fn to_big(&self, x: &u64) -> BigUint {
        BigUint::from(self.leave_mont(*x))
    }
    fn one(&self) -> u64 {
        self.to_mont(1)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.addm(*a, *b)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        self.subm(*a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulm(*a, *b)
    }
    fn gcd_modulus(&self, x: &u64) -> BigUint {
        BigUint::from(x.gcd(&self.n))
    }
}

#[inline]
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a0, a1) = (a as u64 as u128, a >> 64);
    let (b0, b1) = (b as u64 as u128, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 as u64 as u128) + (p10 as u64 as u128);
    let lo = (p00 as u64 as u128) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (lo, hi)
}

/// Montgomery arithmetic for odd moduli below 2^127.
pub(crate) struct Mont128 {
    n: u128,
    ninv: u128,
    r2: u128,
}

impl Mont128 {
    pub(crate) const LIMIT_BITS: u64 = 127;

    pub(crate) fn new(n: u128) -> Self {
        debug_assert!(n & 1 == 1 && n > 1 && n >> 127 == 0);
        let mut inv = n;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        // R mod n, then R^2 mod n by 128 modular doublings.
        let r = (u128::MAX % n + 1) % n;
        let mut r2 = r;
        for _ in 0..128 {
            r2 <<= 1;
            if r2 >= n {
                r2 -= n;
            }
        }
        Mont128 { n, ninv: inv.wrapping_neg(), r2 }
    }

    #[inline]
    fn redc(&self, lo: u128, hi: u128) -> u128 {
        let m = lo.wrapping_mul(self.ninv);
        let (mlo, mhi) = mul_wide(m, self.n);
        let (_, carry) = lo.overflowing_add(mlo);
        let res = hi + mhi + carry as u128;
        if res >= self.n {
            res - self.n
        } else {
            res
        }
    }

    #[inline]
    pub(crate) fn mulm(&self, a: u128, b: u128) -> u128 {
        let (lo, hi) = mul_wide(a, b);
        self.redc(lo, hi)
    }

    pub(crate) fn to_mont(&self, x: u128) -> u128 {
        self.mulm(x % self.n, self.r2)
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub(crate) fn leave_mont(&self, x: u128) -> u128 {
        self.redc(x, 0)
    }
}

impl ModRing for Mont128 {
    type Elem = u128;

    fn modulus(&self) -> BigUint {
        BigUint::from(self.n)
    }
    fn lift(&self, x: &BigUint) -> u128 {
        let r = (x % self.n).to_u128().unwrap_or(0);
        self.to_mont(r)
    }
    fn to_big(&self, x: &u128) -> BigUint {
        BigUint::from(self.leave_mont(*x))
    }
    fn one(&self) -> u128 {
        self.to_mont(1)
    }
    fn zero(&self) -> u128 {
        0
    }
    #[inline]
    fn add(&self, a: &u128, b: &u128) -> u128 {
        // both < n < 2^127, no overflow
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u128, b: &u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }
    #[inline]
    fn mul(&self, a: &u128, b: &u128) -> u128 {
        self.mulm(*a, *b)
    }
    fn gcd_modulus(&self, x: &u128) -> BigUint {
        BigUint::from(x.gcd(&self.n))
    }
}

/// Plain reduction modulo an arbitrary `BigUint`.
pub(crate) struct BigMod {
    n: BigUint,
}

impl BigMod {
    pub(crate) fn new(n: BigUint) -> Self {
        BigMod { n }
    }
}

impl ModRing for BigMod {
    type Elem = BigUint;

    fn modulus(&self) -> BigUint {
        self.n.clone()
    }
    fn lift(&self, x: &BigUint) -> BigUint {
        x % &self.n
    }
    fn to_big(&self, x: &BigUint) -> BigUint {
        x.clone()
    }
    fn one(&self) -> BigUint {
        BigUint::one() % &self.n
    }
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.n {
            s - &self.n
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.n - (b - a)
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.n
    }
    fn gcd_modulus(&self, x: &BigUint) -> BigUint {
        x.gcd(&self.n)
    }
    fn pow(&self, base: &BigUint, exp: &BigUint) -> BigUint {
        base.modpow(exp, &self.n)
    }
}

/// `a * b mod m` for 64-bit operands.
#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod_u64(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}
