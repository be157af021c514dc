use divseq_core::arith::{divisors, FactorBudget};
use divseq_core::cycloseq::{
    bound_check, cyclotomic_value, has_exact_order, omega_identity_check, order_count, BoundKind,
    SequenceSpec,
};
use divseq_core::{BigInt, BigUint};
use num_traits::{One, Pow, Zero};

/// Integer coefficients of `Phi_n(x)`, low degree first, by dividing
/// `x^n - 1` by the cyclotomic polynomials of the proper divisors.
fn cyclotomic_polys(n_max: usize) -> Vec<Vec<i64>> {
    let mut phis: Vec<Vec<i64>> = vec![Vec::new(); n_max + 1];
    for n in 1..=n_max {
        let mut num = vec![0i64; n + 1];
        num[0] = -1;
        num[n] = 1;
        for d in (1..n).filter(|d| n % d == 0) {
            num = exact_div(&num, &phis[d]);
        }
        phis[n] = num;
    }
    phis
}

fn exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    assert_eq!(b[db], 1);
    let mut q = vec![0i64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db];
        q[k] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] -= c * bi;
        }
    }
    assert!(r.iter().all(|&c| c == 0));
    q
}

/// `b^deg Phi_n(a/b)`.
fn homogeneous(phi: &[i64], a: u32, b: u32) -> BigInt {
    let deg = phi.len() as u32 - 1;
    phi.iter()
        .enumerate()
        .map(|(i, &c)| {
            BigInt::from(c) * Pow::pow(BigInt::from(a), i as u32) * Pow::pow(BigInt::from(b), deg - i as u32)
        })
        .sum()
}

#[test]
fn cyclotomic_values_match_polynomial_oracle() {
    let phis = cyclotomic_polys(200);
    for a in 2..=10u32 {
        for b in 1..a {
            let (ai, bi) = (BigInt::from(a), BigInt::from(b));
            for n in 1..=200u32 {
                let value = cyclotomic_value(&ai, &bi, n);
                assert_eq!(value, homogeneous(&phis[n as usize], a, b), "({a},{b},{n})");
            }
        }
    }
}

#[test]
fn product_over_divisors_is_the_term() {
    for a in 2..=10u32 {
        for b in 1..a {
            let (ai, bi) = (BigInt::from(a), BigInt::from(b));
            let spec = SequenceSpec::new(a, b).unwrap();
            for n in 1..=200u32 {
                let product: BigInt = divisors(n as u64).into_iter().map(|d| cyclotomic_value(&ai, &bi, d as u32)).product();
                assert_eq!(product, BigInt::from(spec.value(n)), "({a},{b},{n})");
            }
        }
    }
}

#[test]
fn terms_form_a_divisibility_sequence() {
    for a in 2..=10u32 {
        for b in 1..a {
            let spec = SequenceSpec::new(a, b).unwrap();
            let values: Vec<BigUint> = (1..=100).map(|n| spec.value(n)).collect();
            for n in 1..=100usize {
                for m in (1..n).filter(|m| n % m == 0) {
                    assert!((&values[n - 1] % &values[m - 1]).is_zero(), "({a},{b}) {m} | {n}");
                }
            }
        }
    }
}

#[test]
fn order_witnesses_have_exact_order() {
    let budget = FactorBudget::default();
    for a in [2u32, 3, 5, 10] {
        let ai = BigInt::from(a);
        for r in 1..=24u32 {
            let count = order_count(&ai, r, &budget).unwrap();
            for p in &count.witnesses {
                let ab = BigUint::from(a);
                assert!(ab.modpow(&BigUint::from(r), p).is_one());
                for d in divisors(r as u64).into_iter().filter(|&d| d < r as u64) {
                    assert!(!ab.modpow(&BigUint::from(d), p).is_one(), "a={a} r={r} p={p} d={d}");
                }
                assert!(has_exact_order(&ai, p, r));
            }
        }
    }
}

#[test]
fn omega_identity() {
    let budget = FactorBudget::default();
    for a in [2, 3, 5, 10] {
        for n in 1..=28 {
            assert_eq!(omega_identity_check(&BigInt::from(a), n, &budget), Ok(true), "a={a} n={n}");
        }
    }
}

#[test]
fn zsigmondy_range() {
    let budget = FactorBudget::default();
    for a in 2..=10u32 {
        for b in 2..a {
            let spec = SequenceSpec::new(a, b).unwrap();
            for n in 3..=25 {
                let outcome = bound_check(BoundKind::Zsigmondy, &spec, n, &budget).unwrap();
                assert!(!outcome.is_fail(), "({a},{b},{n}): {outcome:?}");
            }
        }
    }
    let six = bound_check(BoundKind::Zsigmondy, &SequenceSpec::new(2, 1).unwrap(), 6, &budget).unwrap();
    assert!(!six.is_fail());
    let two = bound_check(BoundKind::Zsigmondy, &SequenceSpec::new(3, 1).unwrap(), 2, &budget).unwrap();
    assert!(two.is_fail());
}
