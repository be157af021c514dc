//! The integer sequences `a^n - b^n`: exact terms, factorization through
//! cyclotomic pre-splitting, order statistics and the classical lower bounds
//! for the greatest prime factor.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::arith::{
    divisors, factor, factor_u64, is_prime, is_prime_u64, ln_biguint, moebius, ArithError,
    FactorBudget, Factorization, PowerSplit,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CycloError {
    #[error("need a > b >= 1, got a = {a}, b = {b}")]
    InvalidSpec { a: BigInt, b: BigInt },
    #[error("index must be >= 1")]
    InvalidIndex,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// The sequence `a^n - b^n` for integers `a > b >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSpec {
    a: BigUint,
    b: BigUint,
}

impl SequenceSpec {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Result<Self, CycloError> {
        let (a, b) = (a.into(), b.into());
        if b < BigInt::one() || a <= b {
            return Err(CycloError::InvalidSpec { a, b });
        }
        Ok(SequenceSpec { a: a.magnitude().clone(), b: b.magnitude().clone() })
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    pub fn value(&self, n: u32) -> BigUint {
        Pow::pow(&self.a, n) - Pow::pow(&self.b, n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceTerm {
    pub n: u32,
    pub value: BigUint,
    pub factorization: Factorization,
    /// Present exactly when the factorization is complete.
    pub split: Option<PowerSplit>,
}

/// Homogeneous cyclotomic value `b^phi(d) * Phi_d(a/b)`, computed as
/// `prod_{e | d} (a^e - b^e)^mu(d/e)`.
pub fn cyclotomic_value(a: &BigInt, b: &BigInt, d: u32) -> BigInt {
    assert!(d >= 1, "cyclotomic index must be >= 1");
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for e in divisors(d as u64) {
        let diff = Pow::pow(a, e as u32) - Pow::pow(b, e as u32);
        match moebius(d as u64 / e) {
            1 => num *= diff,
            -1 => den *= diff,
            _ => {}
        }
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// Factors `a^n - b^n` piece by piece along `Phi_d(a, b)`, `d | n`, spending
/// the budget on each piece separately.
pub fn term(spec: &SequenceSpec, n: u32, budget: &FactorBudget) -> Result<SequenceTerm, CycloError> {
    if n == 0 {
        return Err(CycloError::InvalidIndex);
    }
    let (a, b) = (BigInt::from(spec.a.clone()), BigInt::from(spec.b.clone()));
    let mut factorization = Factorization::one();
    for d in divisors(n as u64) {
        let piece = cyclotomic_value(&a, &b, d as u32);
        factorization = factorization.mul(&factor(&piece, budget)?);
    }
    let value = spec.value(n);
    debug_assert_eq!(factorization.abs_value(), value);
    let split = factorization.power_split().ok();
    Ok(SequenceTerm { n, value, factorization, split })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderCount {
    pub r: u32,
    pub count: usize,
    pub witnesses: Vec<BigUint>,
}

/// `true` when `a` has multiplicative order exactly `r` modulo the prime `p`.
pub fn has_exact_order(a: &BigInt, p: &BigUint, r: u32) -> bool {
    let a = a.mod_floor(&BigInt::from(p.clone())).magnitude().clone();
    if a.is_zero() || !a.modpow(&BigUint::from(r), p).is_one() {
        return false;
    }
    factor_u64(r as u64)
        .into_iter()
        .all(|(l, _)| !a.modpow(&BigUint::from(r as u64 / l), p).is_one())
}

/// `E_a(r)`: the primes modulo which `a` has order exactly `r`. All of them
/// divide `Phi_r(a)`, so factoring that single value suffices.
pub fn order_count(a: &BigInt, r: u32, budget: &FactorBudget) -> Result<OrderCount, CycloError> {
    if r == 0 {
        return Err(CycloError::InvalidIndex);
    }
    if a.abs() < BigInt::from(2) {
        return Err(CycloError::InvalidSpec { a: a.clone(), b: BigInt::one() });
    }
    let phi = cyclotomic_value(a, &BigInt::one(), r);
    let f = factor(&phi, budget)?;
    if !f.is_complete() {
        return Err(ArithError::IncompleteFactorization.into());
    }
    let witnesses: Vec<BigUint> =
        f.primes().filter(|p| has_exact_order(a, p, r)).cloned().collect();
    Ok(OrderCount { r, count: witnesses.len(), witnesses })
}

/// Compares `omega(a^n - 1)`, from a direct factorization with no
/// pre-splitting, against `sum_{d | n} E_a(d)`.
pub fn omega_identity_check(a: &BigInt, n: u32, budget: &FactorBudget) -> Result<bool, CycloError> {
    if n == 0 {
        return Err(CycloError::InvalidIndex);
    }
    if *a < BigInt::from(2) {
        return Err(CycloError::InvalidSpec { a: a.clone(), b: BigInt::one() });
    }
    let value = Pow::pow(a, n) - 1u32;
    let lhs = factor(&value, budget)?.omega()?;
    let mut rhs = 0;
    for d in divisors(n as u64) {
        rhs += order_count(a, d as u32, budget)?.count;
    }
    Ok(lhs == rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// `P(a^n - b^n) >= n + 1`
    Zsigmondy,
    /// `P(2^n - 1) >= 2n + 1` for `n >= 13`
    Schinzel,
    /// `P(a^n - b^n) >= n^(1 + 1/(104 log log n))` for `n >= 16`
    Stewart,
    /// `log P >= log u / omega`, with `u` the squarefree part
    EqLower,
}

impl BoundKind {
    pub const ALL: [BoundKind; 4] =
        [BoundKind::Zsigmondy, BoundKind::Schinzel, BoundKind::Stewart, BoundKind::EqLower];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Zsigmondy => "zsigmondy",
            BoundKind::Schinzel => "schinzel",
            BoundKind::Stewart => "stewart",
            BoundKind::EqLower => "eq_lower",
        }
    }

    pub fn from_name(s: &str) -> Option<BoundKind> {
        BoundKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundOutcome {
    Pass,
    /// The exact inequality instance that failed.
    Fail(String),
    Skipped(String),
}

impl BoundOutcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, BoundOutcome::Fail(_))
    }
}

pub fn bound_check(
    kind: BoundKind,
    spec: &SequenceSpec,
    n: u32,
    budget: &FactorBudget,
) -> Result<BoundOutcome, CycloError> {
    let t = term(spec, n, budget)?;
    Ok(bound_check_term(kind, spec, &t))
}

/// [`bound_check`] on an already computed term.
pub fn bound_check_term(kind: BoundKind, spec: &SequenceSpec, t: &SequenceTerm) -> BoundOutcome {
    let n = t.n;
    let (p, exact) = match t.factorization.greatest_prime_factor() {
        Ok(pair) => pair,
        Err(_) => return BoundOutcome::Skipped(format!("|a^{n} - b^{n}| = 1 has no prime factor")),
    };
    // With a partial factorization only a passing lower bound decides anything.
    let undecided = || {
        BoundOutcome::Skipped(format!("factorization incomplete and P >= {p} does not settle it"))
    };
    match kind {
        BoundKind::Zsigmondy | BoundKind::Schinzel => {
            if kind == BoundKind::Schinzel
                && (spec.a != BigUint::from(2u32) || !spec.b.is_one() || n < 13)
            {
                return BoundOutcome::Skipped(String::from("needs a = 2, b = 1, n >= 13"));
            }
            let target = if kind == BoundKind::Zsigmondy { n as u64 + 1 } else { 2 * n as u64 + 1 };
            if p >= BigUint::from(target) {
                BoundOutcome::Pass
            } else if !exact {
                undecided()
            } else {
                let mut instance = format!(
                    "P({}^{n} - {}^{n}) = {p} < {target}",
                    spec.a, spec.b
                );
                let sum = &spec.a + &spec.b;
                if n == 2 && sum.count_ones() == 1 {
                    instance.push_str(" (exceptional case: a + b is a power of two)");
                }
                BoundOutcome::Fail(instance)
            }
        }
        BoundKind::Stewart => {
            if n < 16 {
                return BoundOutcome::Skipped(String::from("needs n >= 16"));
            }
            let nf = n as f64;
            let exponent = 1.0 + 1.0 / (104.0 * libm::log(libm::log(nf)));
            let lhs = ln_biguint(&p);
            let rhs = exponent * libm::log(nf);
            if (lhs - rhs).abs() <= 1e-12 * rhs {
                return BoundOutcome::Skipped(String::from(
                    "within floating-point tolerance of the boundary",
                ));
            }
            if lhs > rhs {
                BoundOutcome::Pass
            } else if !exact {
                undecided()
            } else {
                BoundOutcome::Fail(format!("P = {p} < {n}^{exponent:.12}"))
            }
        }
        BoundKind::EqLower => {
            let Some(split) = &t.split else {
                return BoundOutcome::Skipped(String::from("needs a complete factorization"));
            };
            let omega = t.factorization.factors().len() as u32;
            // log P >= log u / omega  <=>  P^omega >= u
            if Pow::pow(&p, omega) >= split.u {
                BoundOutcome::Pass
            } else {
                BoundOutcome::Fail(format!("{p}^{omega} < u = {}", split.u))
            }
        }
    }
}

/// `#{p prime : (p - 1) | n}`.
pub fn prachar_count(n: u64) -> usize {
    assert!(n >= 1, "prachar_count needs n >= 1");
    divisors(n)
        .into_iter()
        .filter(|&d| match d.checked_add(1) {
            Some(p) => is_prime_u64(p),
            None => is_prime(&(BigUint::from(d) + 1u32)),
        })
        .count()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErdosRow {
    pub n: u32,
    pub p: BigUint,
    pub exact: bool,
    pub ratio: f64,
}

/// `P(2^n - 1) / n` for `2 <= n <= n_max`. Rows with a partial factorization
/// carry the lower bound and `exact = false`.
pub fn erdos_ratio_series(n_max: u32, budget: &FactorBudget) -> Result<Vec<ErdosRow>, CycloError> {
    let spec = SequenceSpec::new(2, 1)?;
    (2..=n_max)
        .map(|n| {
            let t = term(&spec, n, budget)?;
            let (p, exact) = t.factorization.greatest_prime_factor()?;
            let ratio = libm::exp(ln_biguint(&p) - libm::log(n as f64));
            Ok(ErdosRow { n, p, exact, ratio })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn spec(a: u32, b: u32) -> SequenceSpec {
        SequenceSpec::new(a, b).unwrap()
    }

    fn budget() -> FactorBudget {
        FactorBudget::default()
    }

    #[test]
    fn terms() {
        let t = term(&spec(2, 1), 11, &budget()).unwrap();
        assert_eq!(t.factorization.to_string(), "23 * 89");
        let t = term(&spec(2, 1), 1, &budget()).unwrap();
        assert_eq!(t.factorization.greatest_prime_factor(), Err(ArithError::NoPrimeFactor));
        let t = term(&spec(3, 1), 2, &budget()).unwrap();
        assert_eq!(t.factorization.to_string(), "2^3");
        assert_eq!(t.split.unwrap(), PowerSplit { u: 1u32.into(), v: 8u32.into() });
        assert!(SequenceSpec::new(2, 2).is_err());
        assert!(SequenceSpec::new(2, 0).is_err());
    }

    #[test]
    fn cyclotomic_values() {
        let v = |a: i32, b: i32, d| cyclotomic_value(&a.into(), &b.into(), d);
        assert_eq!(v(2, 1, 1), BigInt::one());
        assert_eq!(v(2, 1, 6), BigInt::from(3));
        assert_eq!(v(2, 1, 11), BigInt::from(2047));
        assert_eq!(v(3, 2, 4), BigInt::from(13));
    }

    #[test]
    fn order_counts() {
        let e = |r| order_count(&BigInt::from(2), r, &budget()).unwrap();
        let e11 = e(11);
        assert_eq!(e11.count, 2);
        assert_eq!(e11.witnesses, [BigUint::from(23u32), BigUint::from(89u32)]);
        assert_eq!(e(1).count, 0);
        assert_eq!(e(6).count, 0);
        // 3 divides Phi_2(2) = 3 with order 2
        assert_eq!(e(2).witnesses, [BigUint::from(3u32)]);
    }

    #[test]
    fn omega_identity() {
        for n in [1, 6, 24] {
            assert!(omega_identity_check(&BigInt::from(2), n, &budget()).unwrap());
        }
    }

    #[test]
    fn bounds() {
        let b = budget();
        let check = |k, a, bb, n| bound_check(k, &spec(a, bb), n, &b).unwrap();
        assert_eq!(check(BoundKind::Zsigmondy, 2, 1, 6), BoundOutcome::Pass);
        let fail = check(BoundKind::Zsigmondy, 3, 1, 2);
        assert!(matches!(&fail, BoundOutcome::Fail(s) if s.contains("power of two")), "{fail:?}");
        assert_eq!(check(BoundKind::Schinzel, 2, 1, 13), BoundOutcome::Pass);
        assert!(matches!(check(BoundKind::Schinzel, 2, 1, 12), BoundOutcome::Skipped(_)));
        assert_eq!(check(BoundKind::EqLower, 2, 1, 20), BoundOutcome::Pass);
        assert!(matches!(check(BoundKind::Zsigmondy, 2, 1, 1), BoundOutcome::Skipped(_)));
        assert_eq!(check(BoundKind::Stewart, 2, 1, 16), BoundOutcome::Pass);
    }

    #[test]
    fn partial_factorizations_only_pass_or_skip() {
        let starved = FactorBudget { trial_bound: 3, rho_iteration_cap: 0, rng_seed: 0 };
        // 2^29 - 1 = 233 * 1103 * 2089 is a single composite cofactor here
        let t = term(&spec(2, 1), 29, &starved).unwrap();
        assert!(!t.factorization.is_complete());
        assert!(matches!(
            bound_check_term(BoundKind::Zsigmondy, &spec(2, 1), &t),
            BoundOutcome::Skipped(_)
        ));
        assert!(matches!(
            bound_check_term(BoundKind::EqLower, &spec(2, 1), &t),
            BoundOutcome::Skipped(_)
        ));
    }

    #[test]
    fn prachar() {
        assert_eq!(prachar_count(1), 1);
        assert_eq!(prachar_count(2), 2);
        assert_eq!(prachar_count(12), 5);
    }

    #[test]
    fn erdos_series() {
        let rows = erdos_ratio_series(29, &budget()).unwrap();
        assert_eq!(rows[0].n, 2);
        assert!((rows[0].ratio - 1.5).abs() < 1e-12);
        let r11 = &rows[9];
        assert_eq!((r11.n, r11.p.clone()), (11, BigUint::from(89u32)));
        assert!((r11.ratio - 89.0 / 11.0).abs() < 1e-12);
        assert_eq!(rows.last().unwrap().p, BigUint::from(2089u32));
    }
}
