use std::sync::Arc;

use divseq_core::ffpoly::{
    factor_poly, field_new, greatest_factor_degree, irreducible_count, is_perfect_pth_power,
    mason_check, pth_root, FieldSpec, FqElement, FqPolynomial, MasonOutcome,
};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn field(q: u64) -> Arc<FieldSpec> {
    match q {
        2 | 3 | 5 | 7 => field_new(q, 1, None).unwrap(),
        4 => field_new(2, 2, None).unwrap(),
        8 => field_new(2, 3, None).unwrap(),
        9 => field_new(3, 2, None).unwrap(),
        _ => unreachable!(),
    }
}

/// All monic polynomials of degree `d`.
fn monic_of_degree(f: &Arc<FieldSpec>, d: usize) -> Vec<FqPolynomial> {
    let q = f.order();
    let total = q.pow(d as u32);
    (0..total)
        .map(|mut idx| {
            let mut coeffs = Vec::with_capacity(d + 1);
            for _ in 0..d {
                coeffs.push(FqElement((idx % q) as u32));
                idx /= q;
            }
            coeffs.push(FqElement(1));
            FqPolynomial::new(f, &coeffs).unwrap()
        })
        .collect()
}

fn divides(g: &FqPolynomial, f: &FqPolynomial) -> bool {
    f.div_rem(g).unwrap().1.is_zero()
}

/// Monic irreducibles of degree `<= k`, found by sieving: a monic polynomial
/// is irreducible when no smaller irreducible divides it.
fn irreducibles_sieve(f: &Arc<FieldSpec>, k: usize) -> Vec<FqPolynomial> {
    let mut out: Vec<FqPolynomial> = Vec::new();
    for d in 1..=k {
        for cand in monic_of_degree(f, d) {
            let reducible = out
                .iter()
                .take_while(|g| 2 * g.degree().unwrap() <= d)
                .any(|g| divides(g, &cand));
            if !reducible {
                out.push(cand);
            }
        }
    }
    out
}

fn canonical_key(g: &FqPolynomial) -> (usize, Vec<u32>) {
    (g.degree().unwrap(), g.coefficients().iter().rev().map(|c| c.0).collect())
}

/// Factorization by trial division against the sieved irreducibles.
fn trial_factor(f: &FqPolynomial, irreducibles: &[FqPolynomial]) -> Vec<(FqPolynomial, u32)> {
    let mut rest = f.clone();
    let mut out = Vec::new();
    for g in irreducibles {
        if 2 * g.degree().unwrap() > rest.degree().unwrap() {
            break;
        }
        let mut e = 0;
        while divides(g, &rest) {
            rest = rest.div_rem(g).unwrap().0;
            e += 1;
        }
        if e > 0 {
            out.push((g.clone(), e));
        }
    }
    if rest.degree().unwrap() > 0 {
        match out.iter_mut().find(|(g, _)| *g == rest) {
            Some((_, e)) => *e += 1,
            None => out.push((rest, 1)),
        }
    }
    out.sort_by_key(|(g, _)| canonical_key(g));
    out
}

fn exhaustive_against_oracle(q: u64, max_deg: usize) {
    let f = field(q);
    let irreducibles = irreducibles_sieve(&f, max_deg / 2);
    for d in 1..=max_deg {
        for poly in monic_of_degree(&f, d) {
            let got = factor_poly(&poly, 0).unwrap();
            assert_eq!(got.unit, FqElement(1));
            assert_eq!(got.factors, trial_factor(&poly, &irreducibles), "q={q} f={poly}");
            let total: usize = got.factors.iter().map(|(g, e)| g.degree().unwrap() * *e as usize).sum();
            assert_eq!(total, d);
            assert_eq!(got.product(), poly);
        }
    }
}

#[test]
fn factorization_matches_trial_division_f2() {
    exhaustive_against_oracle(2, 8);
}

#[test]
fn factorization_matches_trial_division_f3() {
    exhaustive_against_oracle(3, 8);
}

#[test]
fn factorization_matches_trial_division_f4() {
    exhaustive_against_oracle(4, 8);
}

#[test]
fn irreducible_counts_match_enumeration() {
    for q in [2u64, 3] {
        let f = field(q);
        let irreducibles = irreducibles_sieve(&f, 4);
        for k in 1..=8usize {
            let count = monic_of_degree(&f, k)
                .into_iter()
                .filter(|p| {
                    !irreducibles
                        .iter()
                        .take_while(|g| 2 * g.degree().unwrap() <= k)
                        .any(|g| divides(g, p))
                })
                .count();
            assert_eq!(irreducible_count(q, k as u32).to_usize(), Some(count), "q={q} k={k}");
        }
    }
}

fn poly_strategy() -> impl Strategy<Value = FqPolynomial> {
    (prop::sample::select(vec![2u64, 3, 4, 5, 8, 9]), prop::collection::vec(any::<u32>(), 1..8)).prop_map(|(q, raw)| {
        let f = field(q);
        let coeffs: Vec<FqElement> = raw.iter().map(|c| FqElement(c % q as u32)).collect();
        FqPolynomial::new(&f, &coeffs).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn frobenius_is_the_pth_power(a in poly_strategy()) {
        let p = a.field().characteristic() as u64;
        let ap = a.pow(p);
        prop_assert_eq!(a.frobenius(), ap.clone());
        if !a.is_zero() {
            prop_assert!(is_perfect_pth_power(&ap));
            prop_assert_eq!(pth_root(&ap), Some(a.clone()));
        }
    }

    #[test]
    fn factorization_round_trips(a in poly_strategy(), b in poly_strategy()) {
        prop_assume!(!a.is_zero());
        let f = factor_poly(&a, 11).unwrap();
        prop_assert_eq!(f.product(), a.clone());
        for (g, _) in &f.factors {
            prop_assert!(g.is_monic() && g.is_irreducible());
        }
        if a.field() == b.field() && !b.is_zero() {
            let ab = a.mul(&b);
            let fab = factor_poly(&ab, 5).unwrap();
            prop_assert_eq!(fab.product(), ab);
        }
    }

    #[test]
    fn g_is_unchanged_by_pth_powers(a in poly_strategy(), m in 1u64..6) {
        prop_assume!(a.degree().is_some_and(|d| d >= 1));
        let p = a.field().characteristic() as u64;
        let one = FqPolynomial::one(a.field());
        let base = a.pow(m).sub(&one);
        prop_assume!(base.degree().is_some_and(|d| d >= 1));
        let lifted = a.pow(m * p).sub(&one);
        prop_assert_eq!(greatest_factor_degree(&lifted), greatest_factor_degree(&base));
    }

    #[test]
    fn mason_holds_on_power_triples(a in poly_strategy(), ell in prop::sample::select(vec![2u64, 3, 5, 7, 11])) {
        prop_assume!(a.degree().is_some_and(|d| d >= 1) && !is_perfect_pth_power(&a));
        let one = FqPolynomial::one(a.field());
        let c = a.pow(ell);
        let lhs = c.sub(&one);
        prop_assume!(!lhs.is_zero());
        match mason_check(&lhs, &one, &c).unwrap() {
            MasonOutcome::Holds { margin } => prop_assert!(margin >= 0),
            other => prop_assert!(matches!(other, MasonOutcome::Inapplicable(_)), "{:?}", other),
        }
    }
}
