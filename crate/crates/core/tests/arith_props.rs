use divseq_core::arith::{
    carmichael_lambda, factor, factor_u64, mult_order, FactorBudget, Factorization, Sign,
};
use divseq_core::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use proptest::prelude::*;

/// Smallest-prime-factor sieve.
fn spf_sieve(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            for j in (i..=limit).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    spf
}

fn sieve_factor(spf: &[u32], mut n: usize) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    while n > 1 {
        let p = spf[n] as u64;
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
        n /= p as usize;
    }
    out
}

fn reassemble(f: &Factorization) -> BigInt {
    let mut acc = BigInt::from(f.cofactor().clone());
    for (p, e) in f.factors() {
        acc *= BigInt::from(Pow::pow(p, *e));
    }
    if f.sign() == Sign::Negative {
        -acc
    } else {
        acc
    }
}

fn starved() -> FactorBudget {
    FactorBudget::new(2, 1, 0).unwrap()
}

#[test]
fn sieve_oracle_agrees_up_to_1e5() {
    let spf = spf_sieve(100_000);
    let budget = FactorBudget::default();
    for n in 2..=100_000usize {
        let f = factor(&BigInt::from(n), &budget).unwrap();
        assert!(f.is_complete(), "{n}");
        let got: Vec<(u64, u32)> = f.factors().iter().map(|(p, e)| (p.to_u64().unwrap(), *e)).collect();
        assert_eq!(got, sieve_factor(&spf, n), "n = {n}");
    }
}

#[test]
fn starved_greatest_prime_is_a_lower_bound() {
    let spf = spf_sieve(100_000);
    let budget = starved();
    let mut inexact = 0;
    for n in 2..=100_000usize {
        let f = factor(&BigInt::from(n), &budget).unwrap();
        assert_eq!(reassemble(&f), BigInt::from(n));
        let truth = sieve_factor(&spf, n).last().unwrap().0;
        let (p, exact) = f.greatest_prime_factor().unwrap();
        let p = p.to_u64().unwrap();
        if exact {
            assert_eq!(p, truth, "n = {n}");
        } else {
            inexact += 1;
            assert!(p <= truth, "n = {n}: {p} > {truth}");
        }
    }
    assert!(inexact > 0, "the starved budget never left a cofactor");
}

#[test]
fn one_and_zero() {
    let f = factor(&BigInt::one(), &FactorBudget::default()).unwrap();
    assert!(f.is_unit() && f.is_complete());
    assert!(factor(&BigInt::zero(), &FactorBudget::default()).is_err());
    let m = factor(&BigInt::from(-12), &FactorBudget::default()).unwrap();
    assert_eq!(m.to_string(), "-2^2 * 3");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn round_trip_below_1e30(hi in 0u64..1_000_000_000_000, lo in 0u64..1_000_000_000_000_000_000, neg: bool) {
        let n = BigInt::from(hi) * BigInt::from(10u64).pow(18u32) + BigInt::from(lo);
        prop_assume!(!n.is_zero());
        let n = if neg { -n } else { n };
        // a light rho cap keeps 10^4 cases fast; round-tripping holds for
        // any budget
        let budget = FactorBudget::new(10_000, 1 << 14, 7).unwrap();
        let f = factor(&n, &budget).unwrap();
        prop_assert_eq!(reassemble(&f), n.clone());
        prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
        let text = f.to_string();
        prop_assert_eq!(text.parse::<Factorization>().unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn power_split_rules(n in 1u64..10_000_000_000u64) {
        let f = factor(&BigInt::from(n), &FactorBudget::default()).unwrap();
        let s = f.power_split().unwrap();
        prop_assert_eq!(&s.u * &s.v, BigUint::from(n));
        prop_assert!(s.u.gcd(&s.v).is_one());
        for (p, e) in factor_u64(s.u.to_u64().unwrap()) {
            prop_assert_eq!(e, 1, "u has square factor {}", p);
        }
        for (p, e) in factor_u64(s.v.to_u64().unwrap()) {
            prop_assert!(e >= 2, "v has simple factor {}", p);
        }
    }

    #[test]
    fn mult_order_properties(m in 2u64..2_000_000, a in 1u64..2_000_000) {
        let a = (a..).find(|x| x.gcd(&m) == 1).unwrap();
        let lambda = carmichael_lambda(m);
        let exponent = factor(&BigInt::from(lambda), &FactorBudget::default()).unwrap();
        let mb = BigUint::from(m);
        let ord = mult_order(&BigInt::from(a), &mb, &exponent).unwrap().to_u64().unwrap();
        prop_assert_eq!(lambda % ord, 0);
        let ab = BigUint::from(a);
        prop_assert!(ab.modpow(&BigUint::from(ord), &mb).is_one());
        for (l, _) in factor_u64(ord) {
            prop_assert!(!ab.modpow(&BigUint::from(ord / l), &mb).is_one());
        }
    }
}
