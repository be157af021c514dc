//! Miller–Rabin primality.
//!
//! Below 3.317·10^24 the first thirteen prime bases are a deterministic
//! witness set. Above it, 64 bases drawn from a fixed-seed ChaCha stream
//! bound the error by 4^-64 while keeping every run reproducible.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use super::modular::{BigMod, ModRing, Mont128, Mont64};
use super::random_below;

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

const DETERMINISTIC_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// 3317044064679887385961981: the first 13 prime bases are deterministic below it.
fn deterministic_limit() -> BigUint {
    BigUint::from(3_317_044_064_679_887_385_961_981u128)
}

const RANDOM_ROUNDS: usize = 64;
const RANDOM_SEED: u64 = 0x6d69_6c6c_6572_7261;

fn strong_probable_prime<R: ModRing>(ring: &R, base: &BigUint, d: &BigUint, s: u64) -> bool {
    let one = ring.one();
    let minus_one = ring.sub(&ring.zero(), &one);
    let mut x = ring.pow(&ring.lift(base), d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = ring.mul(&x, &x);
        if x == minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

fn miller_rabin<R: ModRing>(ring: &R, n: &BigUint, bases: &mut dyn Iterator<Item = BigUint>) -> bool {
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    for b in bases {
        let b = b % n;
        if !b.is_zero() && !strong_probable_prime(ring, &b, &d, s) {
            return false;
        }
    }
    true
}

fn run_with_ring(n: &BigUint, bases: &mut dyn Iterator<Item = BigUint>) -> bool {
    if n.bits() <= 64 {
        miller_rabin(&Mont64::new(n.to_u64().unwrap()), n, bases)
    } else if n.bits() <= Mont128::LIMIT_BITS {
        miller_rabin(&Mont128::new(n.to_u128().unwrap()), n, bases)
    } else {
        miller_rabin(&BigMod::new(n.clone()), n, bases)
    }
}

/// Primality of a non-negative integer.
pub fn is_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        if n == &BigUint::from(p) {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }
    if n < &BigUint::from(97u32 * 97) {
        return true;
    }
    if n < &deterministic_limit() {
        let mut bases = DETERMINISTIC_BASES.iter().map(|&b| BigUint::from(b));
        return run_with_ring(n, &mut bases);
    }
    // Cheap rejection first, then the seeded random rounds.
    if !run_with_ring(n, &mut core::iter::once(BigUint::from(2u32))) {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let span = n - 3u32;
    let mut bases = (0..RANDOM_ROUNDS).map(|_| random_below(&mut rng, &span) + 2u32);
    run_with_ring(n, &mut bases)
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = p as u64;
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 97 * 97 {
        return true;
    }
    let ring = Mont64::new(n);
    let n_minus_1 = n - 1;
    let s = n_minus_1.trailing_zeros();
    let d = n_minus_1 >> s;
    let one = ring.to_mont(1);
    let minus_one = ring.to_mont(n - 1);
    'bases: for &b in DETERMINISTIC_BASES[..12].iter() {
        let mut x = pow_mont(&ring, ring.to_mont(b as u64), d);
        if x == one || x == minus_one {
            continue;
        }
        for _ in 1..s {
            x = ring.mulm(x, x);
            if x == minus_one {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn pow_mont(ring: &Mont64, mut base: u64, mut exp: u64) -> u64 {
    let mut acc = ring.to_mont(1);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ring.mulm(acc, base);
        }
        base = ring.mulm(base, base);
        exp >>= 1;
    }
    acc
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: &BigUint) -> BigUint {
    let mut c = n + BigUint::one();
    while !is_prime(&c) {
        c += 1u32;
    }
    c
}

/// Primes up to `limit` by a plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> alloc::vec::Vec<u64> {
    let limit = limit as usize;
    if limit < 2 {
        return alloc::vec::Vec::new();
    }
    let mut composite = alloc::vec![false; limit + 1];
    let mut out = alloc::vec::Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::str::FromStr;

    fn big(s: &str) -> BigUint {
        BigUint::from_str(s).unwrap()
    }

    #[test]
    fn table_primes() {
        assert!(is_prime(&BigUint::from(2u32)));
        assert!(is_prime(&BigUint::from(8191u32)));
        assert!(is_prime(&BigUint::from(104_759u32)));
        assert!(!is_prime(&BigUint::from(2047u32)));
        assert!(!is_prime(&BigUint::from(1u32)));
        assert!(!is_prime(&BigUint::zero()));
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // psi_12: strong pseudoprime to the first twelve prime bases.
        assert!(!is_prime(&big("318665857834031151167461")));
        // Carmichael number
        assert!(!is_prime(&BigUint::from(561u32)));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn large_primes_from_the_elliptic_table() {
        assert!(is_prime(&big("403453481668667999145407")));
        assert!(is_prime(&big("2681990178080401065344970115363369337376832169")));
        assert!(is_prime(&big("199169555888386471211683643669332910982224853163")));
        assert!(!is_prime(&(big("383168404657137063963767") * big("606899"))));
    }

    #[test]
    fn u64_path_matches_sieve() {
        let sieve = primes_up_to(20_000);
        let from_test: alloc::vec::Vec<u64> = (0..=20_000).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(sieve, from_test);
        let lift: alloc::vec::Vec<u64> =
            (0..=20_000u64).filter(|&n| is_prime(&BigUint::from(n))).collect();
        assert_eq!(sieve, lift);
    }
}
