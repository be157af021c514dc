use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::factorization::Factorization;
use super::modular::pow_mod_u64;
use super::ArithError;

/// Multiplicative order of `a` modulo `m`, given a complete factorization of
/// a multiple of it (the Carmichael exponent, or `m - 1` for prime `m`).
pub fn mult_order(a: &BigInt, m: &BigUint, exponent: &Factorization) -> Result<BigUint, ArithError> {
    if !exponent.is_complete() {
        return Err(ArithError::IncompleteFactorization);
    }
    let a = a.mod_floor(&BigInt::from(m.clone())).magnitude().clone();
    if !a.gcd(m).is_one() {
        return Err(ArithError::NotCoprime);
    }
    let mut order = exponent.abs_value();
    if !a.modpow(&order, m).is_one() {
        return Err(ArithError::NotAGroupExponent);
    }
    for (p, e) in exponent.factors() {
        for _ in 0..*e {
            let candidate = &order / p;
            if a.modpow(&candidate, m).is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// Möbius function.
pub fn moebius(n: u64) -> i8 {
    assert!(n >= 1, "moebius is defined for n >= 1");
    let mut result = 1i8;
    for (_, e) in factor_u64(n) {
        if e > 1 {
            return 0;
        }
        result = -result;
    }
    result
}

/// Trial-division factorization of a machine integer, primes ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = alloc::vec![1u64];
    for (p, e) in factor_u64(n) {
        let len = divs.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Carmichael's lambda function.
pub fn carmichael_lambda(n: u64) -> u64 {
    factor_u64(n).into_iter().fold(1u64, |acc, (p, e)| {
        let pk1 = p.pow(e - 1);
        let lam = if p == 2 && e >= 3 { pk1 / 2 } else { pk1 * (p - 1) };
        acc.lcm(&lam)
    })
}

/// Multiplicative order of `a` modulo `m` (machine integers), or `None`
/// when `gcd(a, m) != 1`.
pub fn mult_order_u64(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if a.gcd(&m) != 1 {
        return None;
    }
    let lambda = carmichael_lambda(m);
    let mut order = lambda;
    for (p, _) in factor_u64(lambda) {
        while order.is_multiple_of(p) && pow_mod_u64(a, order / p, m) == 1 {
            order /= p;
        }
    }
    Some(order)
}

/// Legendre symbol (a | p) for an odd prime p.
pub fn legendre_u64(a: u64, p: u64) -> i8 {
    let r = pow_mod_u64(a % p, (p - 1) / 2, p);
    match r {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Natural logarithm of a positive big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return libm::log(x.to_u64().unwrap() as f64);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap() as f64;
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

/// `true` when `x` is 1 or divides a power of `y`, i.e. every prime of `x`
/// divides `y`. Pure gcd computation, no factoring.
pub fn support_within(x: &BigUint, y: &BigUint) -> bool {
    if y.is_zero() {
        return true;
    }
    let mut x = x.clone();
    loop {
        if x.is_one() {
            return true;
        }
        let g = x.gcd(y);
        if g.is_one() {
            return false;
        }
        while (&x % &g).is_zero() {
            x /= &g;
        }
    }
}

/// Removes from `x` every prime that divides `y`.
pub fn strip_support(x: &BigUint, y: &BigUint) -> BigUint {
    let mut x = x.clone();
    loop {
        let g = x.gcd(y);
        if g.is_one() {
            return x;
        }
        x /= g;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::str::FromStr;

    #[test]
    fn orders_mod_small_primes() {
        let cases = [(2u64, 3u64, 2u64), (2, 23, 11), (2, 7, 3)];
        for (a, m, expected) in cases {
            let exp = Factorization::from_str(&render(m - 1).to_string()).unwrap();
            assert_eq!(
                mult_order(&BigInt::from(a), &BigUint::from(m), &exp).unwrap(),
                BigUint::from(expected)
            );
            assert_eq!(mult_order_u64(a, m), Some(expected));
        }
    }

    fn render(n: u64) -> alloc::string::String {
        use alloc::string::ToString;
        let parts: Vec<_> = factor_u64(n)
            .into_iter()
            .map(|(p, e)| if e == 1 { p.to_string() } else { alloc::format!("{p}^{e}") })
            .collect();
        if parts.is_empty() { "1".to_string() } else { parts.join(" * ") }
    }

    #[test]
    fn order_errors() {
        let exp = Factorization::from_str("2").unwrap();
        assert_eq!(
            mult_order(&BigInt::from(3), &BigUint::from(3u32), &exp),
            Err(ArithError::NotCoprime)
        );
        let partial = Factorization::from_str("2 * C<1000036000099>").unwrap();
        assert_eq!(
            mult_order(&BigInt::from(2), &BigUint::from(3u32), &partial),
            Err(ArithError::IncompleteFactorization)
        );
    }

    #[test]
    fn moebius_values() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(12), 0);
        assert_eq!(moebius(7), -1);
    }

    #[test]
    fn divisor_helpers() {
        assert_eq!(divisors(12), alloc::vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), alloc::vec![1]);
        assert_eq!(euler_phi(36), 12);
        assert_eq!(carmichael_lambda(8), 2);
        assert_eq!(carmichael_lambda(15), 4);
        assert_eq!(mult_order_u64(4, 3), Some(1));
        assert_eq!(mult_order_u64(10, 21), Some(6));
        assert_eq!(mult_order_u64(3, 9), None);
    }

    #[test]
    fn support_helpers() {
        let x = BigUint::from(2u32 * 2 * 3 * 17);
        assert!(support_within(&x, &BigUint::from(102u32)));
        assert!(!support_within(&x, &BigUint::from(6u32)));
        assert_eq!(strip_support(&BigUint::from(2u32 * 2 * 3 * 17 * 5), &BigUint::from(6u32)), BigUint::from(85u32));
    }

    #[test]
    fn logarithm_of_large_values() {
        let x = BigUint::one() << 200u32;
        assert!((ln_biguint(&x) - 200.0 * core::f64::consts::LN_2).abs() < 1e-9);
        assert!((ln_biguint(&BigUint::from(66u32)) - libm::log(66.0)).abs() < 1e-12);
    }
}
