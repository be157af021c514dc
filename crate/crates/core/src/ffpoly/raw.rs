//! Dense polynomial kernels over `F_q` on bare coefficient vectors, low
//! degree first, always trimmed (no trailing zeros; the zero polynomial is
//! empty).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

use super::field::FieldSpec;
use crate::arith::factor_u64;

pub(crate) type Raw = Vec<u32>;

pub(crate) fn trim(mut v: Raw) -> Raw {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub(crate) fn deg(a: &[u32]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub(crate) fn is_one(a: &[u32]) -> bool {
    a == [1]
}

pub(crate) fn x() -> Raw {
    vec![0, 1]
}

pub(crate) fn add(f: &FieldSpec, a: &[u32], b: &[u32]) -> Raw {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o = f.add(*o, s);
    }
    trim(out)
}

pub(crate) fn neg(f: &FieldSpec, a: &[u32]) -> Raw {
    a.iter().map(|&c| f.neg(c)).collect()
}

pub(crate) fn sub(f: &FieldSpec, a: &[u32], b: &[u32]) -> Raw {
    add(f, a, &neg(f, b))
}

pub(crate) fn scale(f: &FieldSpec, a: &[u32], c: u32) -> Raw {
    if c == 0 {
        return Vec::new();
    }
    a.iter().map(|&x| f.mul(x, c)).collect()
}

pub(crate) fn mul(f: &FieldSpec, a: &[u32], b: &[u32]) -> Raw {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Quotient and remainder; panics on division by zero.
pub(crate) fn divrem(f: &FieldSpec, a: &[u32], b: &[u32]) -> (Raw, Raw) {
    let db = deg(b).expect("polynomial division by zero");
    if a.len() <= db {
        return (Vec::new(), a.to_vec());
    }
    let inv_lead = f.inv(b[db]);
    let mut r = a.to_vec();
    let mut q = vec![0u32; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = f.mul(r[k + db], inv_lead);
        if c == 0 {
            continue;
        }
        q[k] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] = f.sub(r[k + i], f.mul(c, bi));
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub(crate) fn rem(f: &FieldSpec, a: &[u32], b: &[u32]) -> Raw {
    divrem(f, a, b).1
}

/// Leading coefficient and the monic associate.
pub(crate) fn monic(f: &FieldSpec, a: &[u32]) -> (u32, Raw) {
    match a.last() {
        None => (0, Vec::new()),
        Some(&lead) => (lead, scale(f, a, f.inv(lead))),
    }
}

/// Monic gcd (zero when both inputs are zero).
pub(crate) fn gcd(f: &FieldSpec, a: &[u32], b: &[u32]) -> Raw {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a).1
}

pub(crate) fn derivative(f: &FieldSpec, a: &[u32]) -> Raw {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| f.mul(c, f.from_int((i as u64 % f.characteristic() as u64) as i64)))
        .collect();
    trim(out)
}

pub(crate) fn mulmod(f: &FieldSpec, a: &[u32], b: &[u32], m: &[u32]) -> Raw {
    rem(f, &mul(f, a, b), m)
}

pub(crate) fn powmod(f: &FieldSpec, base: &[u32], exp: &BigUint, m: &[u32]) -> Raw {
    let mut acc = rem(f, &[1], m);
    let base = rem(f, base, m);
    for i in (0..exp.bits()).rev() {
        acc = mulmod(f, &acc, &acc, m);
        if exp.bit(i) {
            acc = mulmod(f, &acc, &base, m);
        }
    }
    acc
}

pub(crate) fn pow(f: &FieldSpec, base: &[u32], mut e: u64) -> Raw {
    let mut acc = vec![1];
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(f, &acc, &b);
        }
        e >>= 1;
        if e > 0 {
            b = mul(f, &b, &b);
        }
    }
    acc
}

/// `c` with `c^p = a`, when it exists.
pub(crate) fn pth_root(f: &FieldSpec, a: &[u32]) -> Option<Raw> {
    let p = f.characteristic() as usize;
    if a.iter().enumerate().any(|(i, &c)| c != 0 && i % p != 0) {
        return None;
    }
    Some(a.iter().step_by(p).map(|&c| f.pth_root(c)).collect())
}

/// `t^(q^k) mod m` for `k = 1..=n`, starting from `t`.
fn frobenius_orbit(f: &FieldSpec, m: &[u32], n: usize) -> Vec<Raw> {
    let q = BigUint::from(f.order());
    let mut out = Vec::with_capacity(n);
    let mut h = rem(f, &x(), m);
    for _ in 0..n {
        h = powmod(f, &h, &q, m);
        out.push(h.clone());
    }
    out
}

/// Rabin's test.
pub(crate) fn is_irreducible(f: &FieldSpec, m: &[u32]) -> bool {
    let Some(n) = deg(m) else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let orbit = frobenius_orbit(f, m, n);
    if orbit[n - 1] != rem(f, &x(), m) {
        return false;
    }
    factor_u64(n as u64).into_iter().all(|(s, _)| {
        let k = n / s as usize;
        let h = sub(f, &orbit[k - 1], &x());
        is_one(&gcd(f, &h, m))
    })
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, e)` with the
/// `g` squarefree, pairwise coprime within one call level and
/// `prod g^e = a`.
pub(crate) fn squarefree(f: &FieldSpec, a: &[u32]) -> Vec<(Raw, u32)> {
    let mut out = Vec::new();
    if deg(a).is_none_or(|d| d == 0) {
        return out;
    }
    let da = derivative(f, a);
    let mut c = gcd(f, a, &da);
    let mut w = divrem(f, a, &c).0;
    let mut i = 1;
    while !is_one(&w) {
        let y = gcd(f, &w, &c);
        let fac = divrem(f, &w, &y).0;
        if !is_one(&fac) {
            out.push((fac, i));
        }
        c = divrem(f, &c, &y).0;
        w = y;
        i += 1;
    }
    if !is_one(&c) {
        let root = pth_root(f, &c).expect("remaining part has zero derivative");
        let p = f.characteristic();
        out.extend(squarefree(f, &root).into_iter().map(|(g, e)| (g, e * p)));
    }
    out
}

/// Distinct-degree split of a monic squarefree polynomial into products of
/// irreducibles of equal degree.
pub(crate) fn distinct_degree(f: &FieldSpec, a: &[u32]) -> Vec<(Raw, usize)> {
    let q = BigUint::from(f.order());
    let mut out = Vec::new();
    let mut rest = a.to_vec();
    let mut h = rem(f, &x(), &rest);
    let mut d = 1;
    while deg(&rest).unwrap_or(0) >= 2 * d {
        h = powmod(f, &h, &q, &rest);
        let g = gcd(f, &rest, &sub(f, &h, &x()));
        if !is_one(&g) {
            rest = divrem(f, &rest, &g).0;
            h = rem(f, &h, &rest);
            out.push((g, d));
        }
        d += 1;
    }
    if let Some(n) = deg(&rest).filter(|&n| n > 0) {
        out.push((rest, n));
    }
    out
}

fn random_poly(f: &FieldSpec, below: usize, rng: &mut ChaCha8Rng) -> Raw {
    let q = f.order();
    trim((0..below).map(|_| (rng.next_u64() % q) as u32).collect())
}

/// Equal-degree split (Cantor–Zassenhaus) of a product of irreducibles of
/// degree `d`; trace map in characteristic 2.
pub(crate) fn equal_degree(f: &FieldSpec, a: &[u32], d: usize, rng: &mut ChaCha8Rng) -> Vec<Raw> {
    let n = deg(a).unwrap_or(0);
    if n <= d {
        return vec![a.to_vec()];
    }
    let q = BigUint::from(f.order());
    loop {
        let r = random_poly(f, n, rng);
        if deg(&r).is_none_or(|k| k == 0) {
            continue;
        }
        let b = if f.characteristic() == 2 {
            let steps = f.degree() as usize * d;
            let mut term = r.clone();
            let mut acc = r;
            for _ in 1..steps {
                term = mulmod(f, &term, &term, a);
                acc = add(f, &acc, &term);
            }
            acc
        } else {
            let e = (num_traits::Pow::pow(&q, d) - 1u32) >> 1u32;
            sub(f, &powmod(f, &r, &e, a), &[1])
        };
        let g = gcd(f, a, &b);
        let dg = deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(f, a, &g).0;
            let mut parts = equal_degree(f, &g, d, rng);
            parts.extend(equal_degree(f, &h, d, rng));
            return parts;
        }
    }
}

/// Total order on monic polynomials: by degree, then coefficients from the
/// top down.
pub(crate) fn canonical_cmp(a: &[u32], b: &[u32]) -> core::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}
