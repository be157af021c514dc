use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{factor_u64, is_prime_u64};

use super::raw;
use super::FfError;

/// Largest `q = p^r` accepted for extension fields (`r > 1`); their
/// multiplication runs through log/exp tables of size `q`.
pub const MAX_EXTENSION_ORDER: u64 = 1 << 20;

/// An element of `F_q`, encoded as the integer `sum c_i p^i` of its
/// coordinates `c_i` in the basis `1, g, ..., g^(r-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FqElement(pub u32);

/// `F_q` with `q = p^r`, presented as `F_p[g] / (modulus(g))`.
#[derive(Debug)]
pub struct FieldSpec {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<u32>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// Builds `F_{p^r}`. Without an explicit modulus, the monic irreducible of
/// degree `r` whose lower coefficients `c_0 + c_1 p + ...` encode the
/// smallest integer is used. `modulus` lists coefficients low to high.
pub fn field_new(p: u64, r: u32, modulus: Option<&[u32]>) -> Result<Arc<FieldSpec>, FfError> {
    if !is_prime_u64(p) {
        return Err(FfError::NotPrime(p));
    }
    if r == 0 {
        return Err(FfError::InvalidModulus("extension degree must be >= 1"));
    }
    if p >= 1 << 31 {
        return Err(FfError::FieldTooLarge);
    }
    let q = (p as u128).pow(r);
    if r > 1 && q > MAX_EXTENSION_ORDER as u128 {
        return Err(FfError::FieldTooLarge);
    }
    let prime = FieldSpec::prime(p as u32);
    let modulus = match modulus {
        Some(m) => {
            if m.len() != r as usize + 1 || m[r as usize] != 1 || m.iter().any(|&c| c as u64 >= p) {
                return Err(FfError::InvalidModulus("modulus must be monic of degree r over F_p"));
            }
            if !raw::is_irreducible(&prime, m) {
                return Err(FfError::ReducibleModulus);
            }
            m.to_vec()
        }
        None => least_irreducible(&prime, r),
    };
    if r == 1 {
        return Ok(Arc::new(FieldSpec { modulus, ..prime }));
    }
    Ok(Arc::new(FieldSpec::extension(p as u32, r, q as u32, modulus)))
}

fn least_irreducible(prime: &FieldSpec, r: u32) -> Vec<u32> {
    let p = prime.p as u64;
    let mut code: u64 = 0;
    loop {
        let mut m = Vec::with_capacity(r as usize + 1);
        let mut c = code;
        for _ in 0..r {
            m.push((c % p) as u32);
            c /= p;
        }
        m.push(1);
        if raw::is_irreducible(prime, &m) {
            return m;
        }
        code += 1;
    }
}

impl FieldSpec {
    fn prime(p: u32) -> FieldSpec {
        FieldSpec { p, r: 1, q: p, modulus: vec![0, 1], log: Vec::new(), exp: Vec::new() }
    }

    fn extension(p: u32, r: u32, q: u32, modulus: Vec<u32>) -> FieldSpec {
        let mut field = FieldSpec { p, r, q, modulus, log: Vec::new(), exp: Vec::new() };
        let order = (q - 1) as u64;
        let cofactors: Vec<u64> = factor_u64(order).into_iter().map(|(l, _)| order / l).collect();
        let generator = (2..q)
            .find(|&x| cofactors.iter().all(|&c| field.pow_slow(x, c) != 1))
            .unwrap_or(1);
        let mut exp = vec![0u32; q as usize - 1];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = field.mul_slow(x, generator);
        }
        field.exp = exp;
        field.log = log;
        field
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    /// Defining polynomial over `F_p`, low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The class of `g` (only meaningful for `r > 1`).
    pub fn generator(&self) -> Option<FqElement> {
        (self.r > 1).then_some(FqElement(self.p))
    }

    pub fn coords(&self, x: FqElement) -> Vec<u32> {
        let mut x = x.0;
        (0..self.r)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u32]) -> FqElement {
        FqElement(coords.iter().rev().fold(0, |acc, &c| acc * self.p + c % self.p))
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            let s = a as u64 + b as u64;
            return (if s >= self.p as u64 { s - self.p as u64 } else { s }) as u32;
        }
        if self.p == 2 {
            return a ^ b;
        }
        self.digitwise(a, b, |x, y| (x + y) % self.p)
    }

    #[inline]
    pub(crate) fn neg(&self, a: u32) -> u32 {
        if self.r == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        if self.p == 2 {
            return a;
        }
        self.digitwise(a, 0, |x, _| (self.p - x) % self.p)
    }

    #[inline]
    pub(crate) fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    fn digitwise(&self, mut a: u32, mut b: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.r {
            out += op(a % self.p, b % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            return ((a as u64 * b as u64) % self.p as u64) as u32;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % (self.q as u64 - 1)) as usize]
    }

    pub(crate) fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in F_q");
        if self.r == 1 {
            return self.pow(a, self.p as u64 - 2);
        }
        let l = self.log[a as usize];
        self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]
    }

    /// The unique `b` with `b^p = a`.
    pub(crate) fn pth_root(&self, a: u32) -> u32 {
        if self.r == 1 {
            return a;
        }
        self.pow(a, self.q as u64 / self.p as u64)
    }

    /// Schoolbook product of coordinate vectors reduced by the modulus, used
    /// only while the log tables are being built.
    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.coords(FqElement(a)), self.coords(FqElement(b)));
        let p = self.p as u64;
        let r = self.r as usize;
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &xi) in x.iter().enumerate() {
            for (j, &yj) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + xi as u64 * yj as u64) % p;
            }
        }
        for k in (r..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus[..r].iter().enumerate() {
                let slot = &mut prod[k - r + i];
                *slot = (*slot + (p - c) * m as u64) % p;
            }
            prod[k] = 0;
        }
        let reduced: Vec<u32> = prod[..r].iter().map(|&c| c as u32).collect();
        self.from_coords(&reduced).0
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        assert_eq!(field_new(2, 1, None).unwrap().order(), 2);
        assert_eq!(field_new(2, 2, None).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(field_new(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(field_new(2, 3, None).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(field_new(3, 1, None).unwrap().characteristic(), 3);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(field_new(4, 1, None).unwrap_err(), FfError::NotPrime(4));
        assert_eq!(field_new(2, 2, Some(&[1, 0, 1])).unwrap_err(), FfError::ReducibleModulus);
        assert_eq!(field_new(2, 30, None).unwrap_err(), FfError::FieldTooLarge);
    }

    #[test]
    fn extension_arithmetic_matches_schoolbook() {
        for (p, r) in [(2u64, 2u32), (2, 4), (3, 2), (5, 2), (3, 3)] {
            let f = field_new(p, r, None).unwrap();
            let q = f.order() as u32;
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                assert_eq!(f.pow(f.pth_root(a), p), a);
            }
        }
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = field_new(1_000_003, 1, None).unwrap();
        assert_eq!(f.mul(f.inv(12345), 12345), 1);
        assert_eq!(f.sub(3, 5), 1_000_001);
        assert_eq!(f.from_int(-1), 1_000_002);
    }
}
