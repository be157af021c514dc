use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use super::factorization::{Factorization, Sign};
use super::prime::is_prime;
use super::rho::{find_factor, RhoOutcome};
use super::{ArithError, FactorBudget};

/// Gaps of the mod-30 wheel starting from 7.
const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];

/// Strips every prime up to `bound` from `m`. Returns the remainder and
/// whether trial division alone proved the remainder is 1 or prime.
fn trial_divide(m: &mut BigUint, bound: u64, out: &mut BTreeMap<BigUint, u32>) -> bool {
    let record = |p: u64, e: u32, out: &mut BTreeMap<BigUint, u32>| {
        if e > 0 {
            *out.entry(BigUint::from(p)).or_insert(0) += e;
        }
    };
    if let Some(mut small) = m.to_u128() {
        let mut d: u64 = 2;
        let mut wheel_idx = 0;
        let mut step = |d: &mut u64| {
            *d = match *d {
                2 => 3,
                3 => 5,
                5 => 7,
                _ => {
                    let next = *d + WHEEL[wheel_idx];
                    wheel_idx = (wheel_idx + 1) % WHEEL.len();
                    next
                }
            };
        };
        let proven = loop {
            if d > bound {
                break small == 1;
            }
            if (d as u128) * (d as u128) > small {
                break true;
            }
            let mut e = 0;
            while small % d as u128 == 0 {
                small /= d as u128;
                e += 1;
            }
            record(d, e, out);
            step(&mut d);
        };
        *m = BigUint::from(small);
        return proven;
    }
    let mut d: u64 = 2;
    let mut wheel_idx = 0;
    loop {
        if d > bound {
            return m.is_one();
        }
        if BigUint::from(d) * d > *m {
            return true;
        }
        let mut e = 0;
        while (&*m % d).is_zero() {
            *m /= d;
            e += 1;
        }
        record(d, e, out);
        if m.bits() <= 128 {
            // Finish on the fast path; it resumes from the current divisor
            // with repeated work only on primes already stripped.
            return trial_divide(m, bound, out);
        }
        d = match d {
            2 => 3,
            3 => 5,
            5 => 7,
            _ => {
                let next = d + WHEEL[wheel_idx];
                wheel_idx = (wheel_idx + 1) % WHEEL.len();
                next
            }
        };
    }
}

/// Returns `(root, k)` with `root^k = n` and `k >= 2` maximal, assuming every
/// prime factor of `n` exceeds `2^min_prime_bits`.
fn perfect_power(n: &BigUint, min_prime_bits: u32) -> Option<(BigUint, u32)> {
    let max_k = n.bits() as u32 / min_prime_bits.max(1);
    for k in (2..=max_k).rev() {
        let r = n.nth_root(k);
        if r > BigUint::one() && &Pow::pow(&r, k) == n {
            return Some((r, k));
        }
    }
    None
}

/// Budgeted factorization: trial division to `budget.trial_bound`, then
/// Brent's rho with at most `budget.rho_iteration_cap` iterations per
/// composite. Unsplit composites land in the cofactor.
pub fn factor(n: &BigInt, budget: &FactorBudget) -> Result<Factorization, ArithError> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.rng_seed);
    factor_with_rng(n, budget, &mut rng)
}

fn factor_with_rng(
    n: &BigInt,
    budget: &FactorBudget,
    rng: &mut ChaCha8Rng,
) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    let sign = if n.sign() == BigSign::Minus { Sign::Negative } else { Sign::Positive };
    let mut m = n.magnitude().clone();
    let mut primes = BTreeMap::new();
    let mut cofactor = BigUint::one();

    let bound_sq = BigUint::from(budget.trial_bound) * budget.trial_bound;
    let min_prime_bits = 63 - budget.trial_bound.max(2).leading_zeros();
    let mut pending = Vec::new();
    if m > bound_sq && is_prime(&m) {
        primes.insert(m, 1);
        return Ok(Factorization::assemble(sign, primes, cofactor));
    }
    if trial_divide(&mut m, budget.trial_bound, &mut primes) {
        if !m.is_one() {
            *primes.entry(m).or_insert(0) += 1;
        }
        return Ok(Factorization::assemble(sign, primes, cofactor));
    }
    pending.push((m, 1u32));

    while let Some((c, mult)) = pending.pop() {
        if c.is_one() {
            continue;
        }
        if is_prime(&c) {
            *primes.entry(c).or_insert(0) += mult;
            continue;
        }
        if let Some((root, k)) = perfect_power(&c, min_prime_bits) {
            pending.push((root, mult * k));
            continue;
        }
        match find_factor(&c, budget.rho_iteration_cap, rng) {
            RhoOutcome::Factor(g) => {
                let rest = &c / &g;
                // keep both halves coprime so multiplicities stay exact
                let shared = g.gcd(&rest);
                if shared.is_one() {
                    pending.push((g, mult));
                    pending.push((rest, mult));
                } else {
                    let mut parts = vec![g, rest];
                    refine_coprime(&mut parts);
                    let mut leftover = c.clone();
                    for part in parts {
                        let e = multiplicity(&c, &part);
                        leftover /= Pow::pow(&part, e);
                        pending.push((part, mult * e));
                    }
                    pending.push((leftover, mult));
                }
            }
            RhoOutcome::Exhausted => {
                cofactor *= Pow::pow(&c, mult);
            }
        }
    }
    Ok(Factorization::assemble(sign, primes, cofactor))
}

fn multiplicity(n: &BigUint, d: &BigUint) -> u32 {
    let mut n = n.clone();
    let mut e = 0;
    while (&n % d).is_zero() {
        n /= d;
        e += 1;
    }
    e
}

/// Replaces `parts` by a list of pairwise coprime integers > 1 generating the
/// same multiplicative support.
fn refine_coprime(parts: &mut Vec<BigUint>) {
    loop {
        parts.retain(|p| !p.is_one());
        let mut changed = false;
        'scan: for i in 0..parts.len() {
            for j in (i + 1)..parts.len() {
                let g = parts[i].gcd(&parts[j]);
                if !g.is_one() {
                    let a = &parts[i] / &g;
                    let b = &parts[j] / &g;
                    parts[i] = a;
                    parts[j] = b;
                    parts.push(g);
                    changed = true;
                    break 'scan;
                }
            }
        }
        if !changed {
            parts.sort();
            parts.dedup();
            return;
        }
    }
}

/// Factors `n` after splitting it along gcds with the supplied `hints`
/// (known primes or known divisors of related integers). Each piece then
/// gets its own budgeted factorization.
pub fn factor_with_hints(
    n: &BigInt,
    hints: &[BigUint],
    budget: &FactorBudget,
) -> Result<Factorization, ArithError> {
    if n.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    let sign = if n.sign() == BigSign::Minus { Sign::Negative } else { Sign::Positive };
    let mut pieces = vec![n.magnitude().clone()];
    for h in hints.iter().filter(|h| !h.is_one() && !h.is_zero()) {
        let mut next = Vec::with_capacity(pieces.len() + 1);
        for mut piece in pieces {
            loop {
                let g = piece.gcd(h);
                if g.is_one() {
                    next.push(piece);
                    break;
                }
                piece /= &g;
                next.push(g);
            }
        }
        pieces = next;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.rng_seed);
    let mut acc = Factorization::assemble(sign, BTreeMap::new(), BigUint::one());
    for piece in pieces.into_iter().filter(|p| !p.is_one()) {
        let f = factor_with_rng(&BigInt::from(piece), budget, &mut rng)?;
        acc = acc.mul(&f);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn budget() -> FactorBudget {
        FactorBudget::default()
    }

    fn fac(n: i128) -> Factorization {
        factor(&BigInt::from(n), &budget()).unwrap()
    }

    #[test]
    fn table_rows() {
        assert_eq!(fac(63).to_string(), "3^2 * 7");
        assert_eq!(fac(1).to_string(), "1");
        assert_eq!(fac((1 << 20) - 1).to_string(), "3 * 5^2 * 11 * 31 * 41");
        assert_eq!(fac(-12).to_string(), "-2^2 * 3");
        assert_eq!(factor(&BigInt::zero(), &budget()), Err(ArithError::ZeroInput));
    }

    #[test]
    fn rho_and_perfect_powers_beyond_trial_bound() {
        let small_trial = FactorBudget { trial_bound: 100, ..budget() };
        let p = 1_000_003i128;
        let q = 1_000_033i128;
        let f = factor(&BigInt::from(p * p * p * q), &small_trial).unwrap();
        assert_eq!(f.to_string(), "1000003^3 * 1000033");
        let f = factor(&BigInt::from(p * p), &small_trial).unwrap();
        assert_eq!(f.to_string(), "1000003^2");
    }

    #[test]
    fn starved_budget_leaves_cofactor() {
        let starved = FactorBudget { trial_bound: 10, rho_iteration_cap: 0, rng_seed: 0 };
        let n = BigInt::from(2 * 1_000_003i128 * 1_000_033);
        let f = factor(&n, &starved).unwrap();
        assert!(!f.is_complete());
        assert_eq!(f.to_string(), "2 * C<1000036000099>");
        assert_eq!(f.value(), n);
    }

    #[test]
    fn hints_split_before_factoring() {
        let n = BigInt::from(2_047i64 * 8_191 * 8_191);
        let f = factor_with_hints(&n, &[BigUint::from(8_191u32), BigUint::from(89u32)], &budget()).unwrap();
        assert_eq!(f.to_string(), "23 * 89 * 8191^2");
    }

    #[test]
    fn coprime_refinement() {
        let mut parts = vec![BigUint::from(12u32), BigUint::from(18u32)];
        refine_coprime(&mut parts);
        assert_eq!(parts, vec![BigUint::from(2u32), BigUint::from(3u32)]);
    }
}
