use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow};

use super::field::FieldSpec;
use super::poly::FqPolynomial;
use super::raw;
use super::{factor_poly, is_perfect_pth_power, FfError, PolyFactorization};
use crate::arith::{
    divisors, is_prime_u64, moebius, mult_order_u64, primes_up_to, ArithError, FactorBudget,
};
use crate::cycloseq::{term, SequenceSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MasonOutcome {
    /// `(deg rad(abc) - 1) - max deg >= 0`
    Holds { margin: i64 },
    /// Never expected; kept so a counterexample would surface as data.
    Violated { margin: i64 },
    Inapplicable(String),
}

/// Mason's inequality `max deg(a, b, c) <= deg rad(abc) - 1` for `a + b = c`.
pub fn mason_check(
    a: &FqPolynomial,
    b: &FqPolynomial,
    c: &FqPolynomial,
) -> Result<MasonOutcome, FfError> {
    if a.add(b) != *c {
        return Err(FfError::SumMismatch);
    }
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Ok(MasonOutcome::Inapplicable(String::from("a zero term")));
    }
    if !(a.gcd(b).is_one() && a.gcd(c).is_one() && b.gcd(c).is_one()) {
        return Ok(MasonOutcome::Inapplicable(String::from("not pairwise coprime")));
    }
    if [a, b, c].iter().all(|x| is_perfect_pth_power(x)) {
        return Ok(MasonOutcome::Inapplicable(String::from("all three are perfect p-th powers")));
    }
    let mut rad_degree = 0;
    for x in [a, b, c] {
        rad_degree += factor_poly(x, 0)?.radical_degree();
    }
    let max_deg = [a, b, c].iter().filter_map(|x| x.degree()).max().unwrap_or(0);
    let margin = rad_degree as i64 - 1 - max_deg as i64;
    Ok(if margin >= 0 { MasonOutcome::Holds { margin } } else { MasonOutcome::Violated { margin } })
}

/// `C_1 = a - 1` and `C_ell = (a^ell - 1) / (a - 1)` for `ell > 1`.
pub fn c_ell(a: &FqPolynomial, ell: u64) -> Result<FqPolynomial, FfError> {
    if ell == 0 {
        return Err(FfError::InvalidEll);
    }
    let one = FqPolynomial::one(a.field());
    let c1 = a.sub(&one);
    if c1.is_zero() {
        return Err(FfError::DivisionByZeroPoly);
    }
    if ell == 1 {
        return Ok(c1);
    }
    let (q, r) = a.pow(ell).sub(&one).div_rem(&c1)?;
    debug_assert!(r.is_zero());
    Ok(q)
}

fn residue_power(a: &FqPolynomial, e: &BigUint, pi: &FqPolynomial) -> FqPolynomial {
    FqPolynomial::from_raw(a.field(), raw::powmod(a.field(), a.raw(), e, pi.raw()))
}

/// Multiplicative order of `a` in `(F_q[t]/pi)^*`, found by stripping prime
/// factors from the group order `q^deg(pi) - 1`.
pub fn order_mod_pi(
    a: &FqPolynomial,
    pi: &FqPolynomial,
    budget: &FactorBudget,
) -> Result<BigUint, FfError> {
    if !pi.is_irreducible() {
        return Err(FfError::NotIrreducible);
    }
    if a.div_rem(pi)?.1.is_zero() {
        return Err(FfError::NotCoprime);
    }
    let k = pi.degree().expect("irreducible is nonzero") as u32;
    let q = a.field().order();
    let group = term(&SequenceSpec::new(q, 1)?, k, budget)?;
    if !group.factorization.is_complete() {
        return Err(ArithError::IncompleteFactorization.into());
    }
    let mut order = group.value;
    for (l, e) in group.factorization.factors() {
        for _ in 0..*e {
            let candidate = &order / l;
            if residue_power(a, &candidate, pi).is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

/// `o_pi(a) = ell` for a prime `ell`: `a^ell = 1` and `a != 1` mod `pi`.
fn has_prime_order(a: &FqPolynomial, pi: &FqPolynomial, ell: u64) -> bool {
    let r = residue_power(a, &BigUint::one(), pi);
    !r.is_one() && !r.is_zero() && residue_power(a, &BigUint::from(ell), pi).is_one()
}

/// Cap on the number of candidate polynomials enumerated when cross-checking
/// the forward direction of the order relation.
const ENUMERATION_LIMIT: u64 = 1 << 12;

/// Checks `o_pi(a) = ell <=> pi | C_ell` over irreducible `pi` not dividing `a`.
///
/// Backward: every factor of `C_ell` has order `ell`. Forward: every
/// irreducible of order `ell` divides `a^ell - 1 = C_1 C_ell`, so scanning
/// the factors of `C_1` and `C_ell` is exhaustive; a brute-force scan of all
/// monic irreducibles of small degree is added as an independent check.
pub fn order_relation_check(a: &FqPolynomial, ell: u64) -> Result<bool, FfError> {
    let field = a.field();
    if !is_prime_u64(ell) || ell == field.characteristic() as u64 {
        return Err(FfError::InvalidEll);
    }
    if a.is_constant() {
        return Err(FfError::ConstantPolynomial);
    }
    let c1 = c_ell(a, 1)?;
    let cl = c_ell(a, ell)?;
    let divides = |pi: &FqPolynomial, x: &FqPolynomial| x.div_rem(pi).map(|(_, r)| r.is_zero());
    let coprime_to_a = |pi: &FqPolynomial| !a.div_rem(pi).map(|(_, r)| r.is_zero()).unwrap_or(true);

    let fl = factor_poly(&cl, 0)?;
    for (pi, _) in &fl.factors {
        if coprime_to_a(pi) && !has_prime_order(a, pi, ell) {
            return Ok(false);
        }
    }
    for (pi, _) in factor_poly(&c1, 0)?.factors.iter().chain(&fl.factors) {
        if coprime_to_a(pi) && has_prime_order(a, pi, ell) && !divides(pi, &cl)? {
            return Ok(false);
        }
    }
    let q = field.order();
    let max_deg = cl.degree().unwrap_or(0);
    let mut budget = ENUMERATION_LIMIT;
    for k in 1..=max_deg {
        let Some(cost) = q.checked_pow(k as u32).filter(|&c| c <= budget) else { break };
        budget -= cost;
        for pi in irreducibles_of_degree(field, k) {
            if coprime_to_a(&pi) && has_prime_order(a, &pi, ell) && !divides(&pi, &cl)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All monic irreducibles of degree `k`, in canonical order.
pub fn irreducibles_of_degree(field: &Arc<FieldSpec>, k: usize) -> Vec<FqPolynomial> {
    let q = field.order();
    let count = q.checked_pow(k as u32).expect("enumeration size fits in u64");
    (0..count)
        .filter_map(|mut code| {
            let mut coeffs = Vec::with_capacity(k + 1);
            for _ in 0..k {
                coeffs.push((code % q) as u32);
                code /= q;
            }
            coeffs.push(1);
            raw::is_irreducible(field, &coeffs).then(|| FqPolynomial::from_raw(field, coeffs))
        })
        .collect()
}

/// Number of monic irreducibles of degree `k` over `F_q`:
/// `(1/k) sum_{d | k} mu(d) q^(k/d)`.
pub fn irreducible_count(q: u64, k: u32) -> BigUint {
    assert!(k >= 1, "degree must be >= 1");
    let q = BigInt::from(q);
    let sum: BigInt = divisors(k as u64)
        .into_iter()
        .map(|d| BigInt::from(moebius(d)) * Pow::pow(&q, (k as u64 / d) as u32))
        .sum();
    (sum / k).magnitude().clone()
}

/// Monic irreducibles whose degree `j <= n_max` is a multiple of `k`.
pub fn count_degree_multiple(q: u64, k: u32, n_max: u32) -> BigUint {
    (k..=n_max).step_by(k as usize).map(|j| irreducible_count(q, j)).sum()
}

/// `o >= base^alpha`. For `alpha = num/den` with a small denominator this
/// compares `o^den` with `base^num` exactly; otherwise in floating point.
pub fn power_at_least(o: u64, base: u64, alpha: f64) -> bool {
    if alpha <= 0.0 || base <= 1 {
        return o >= 1;
    }
    for den in 1u32..=64 {
        let num = alpha * den as f64;
        if num == libm::floor(num) && num < u32::MAX as f64 {
            return Pow::pow(BigUint::from(o), den) >= Pow::pow(BigUint::from(base), num as u32);
        }
    }
    libm::log(o as f64) >= alpha * libm::log(base as f64)
}

/// `ell` lies in `S_alpha = {ell : ord_ell(q) >= ell^alpha}`.
pub fn s_alpha_member(ell: u64, q: u64, alpha: f64) -> Result<bool, FfError> {
    if !is_prime_u64(ell) || q.is_multiple_of(ell) {
        return Err(FfError::InvalidEll);
    }
    let o = mult_order_u64(q % ell, ell).expect("ell does not divide q");
    Ok(power_at_least(o, ell, alpha))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MachineryReport {
    pub ell: u64,
    pub ord_ell_q: u64,
    /// `deg V_1 + deg V_ell`
    pub v_degree_sum: usize,
    /// `2 deg(a) - 2`
    pub v_degree_bound: usize,
    /// Every irreducible factor of `C_ell` prime to `a` has degree divisible
    /// by `ord_ell(q)`.
    pub degrees_divisible: bool,
    pub mason: MasonOutcome,
    /// `G(a^ell - 1)`
    pub g: usize,
    /// `G / log_q(ell)`
    pub g_over_log: f64,
}

impl MachineryReport {
    pub fn v_bound_holds(&self) -> bool {
        self.v_degree_sum <= self.v_degree_bound
    }

    pub fn mason_holds(&self) -> bool {
        matches!(self.mason, MasonOutcome::Holds { .. })
    }

    pub fn passed(&self) -> bool {
        self.v_bound_holds() && self.degrees_divisible && self.mason_holds()
    }
}

/// The finite ingredients behind the lower bound for `G(a^ell - 1)`: the
/// power-full parts of `C_1` and `C_ell` stay small, the factors of `C_ell`
/// have degrees divisible by `ord_ell(q)`, and Mason's inequality holds for
/// `(a^ell - 1) + 1 = a^ell`.
pub fn theorem2_machinery_check(a: &FqPolynomial, ell: u64) -> Result<MachineryReport, FfError> {
    let field = a.field();
    let p = field.characteristic() as u64;
    if !is_prime_u64(ell) || ell == p {
        return Err(FfError::InvalidEll);
    }
    let Some(deg_a) = a.degree().filter(|&d| d > 0) else {
        return Err(FfError::ConstantPolynomial);
    };
    if is_perfect_pth_power(a) {
        return Err(FfError::PerfectPthPower);
    }
    let q = field.order();
    let c1 = c_ell(a, 1)?;
    let cl = c_ell(a, ell)?;
    let f1 = factor_poly(&c1, 0)?;
    let fl = factor_poly(&cl, 0)?;
    let v_degree_sum: usize = [&f1, &fl]
        .iter()
        .map(|f| f.power_split().1.degree().unwrap_or(0))
        .sum();
    let ord = mult_order_u64(q % ell, ell).expect("ell is prime to q");
    let degrees_divisible = fl.factors.iter().all(|(pi, _)| {
        let divides_a = a.div_rem(pi).map(|(_, r)| r.is_zero()).unwrap_or(false);
        divides_a || (pi.degree().unwrap_or(0) as u64).is_multiple_of(ord)
    });
    let a_ell = a.pow(ell);
    let one = FqPolynomial::one(field);
    let mason = mason_check(&a_ell.sub(&one), &one, &a_ell)?;
    let g = union_greatest_degree(&f1, &fl);
    let g_over_log = g as f64 * libm::log(q as f64) / libm::log(ell as f64);
    Ok(MachineryReport {
        ell,
        ord_ell_q: ord,
        v_degree_sum,
        v_degree_bound: 2 * deg_a - 2,
        degrees_divisible,
        mason,
        g,
        g_over_log,
    })
}

fn union_greatest_degree(a: &PolyFactorization, b: &PolyFactorization) -> usize {
    a.greatest_degree().unwrap_or(0).max(b.greatest_degree().unwrap_or(0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub qualifying: usize,
    pub total: usize,
}

impl DensityReport {
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.qualifying as f64 / self.total as f64
    }
}

/// Primes `ell <= x` not dividing `q`, and how many have
/// `ord_ell(q) >= ell^theta`.
pub fn order_density(q: u64, x: u64, theta: f64) -> DensityReport {
    let mut report = DensityReport { qualifying: 0, total: 0 };
    for ell in primes_up_to(x) {
        if q.is_multiple_of(ell) {
            continue;
        }
        report.total += 1;
        let o = mult_order_u64(q % ell, ell).expect("ell is prime to q");
        if power_at_least(o, ell, theta) {
            report.qualifying += 1;
        }
    }
    report
}

/// Best-effort reading of the composite-index condition: `ord_m(q) >= m^alpha`
/// for every divisor `m > n^(1 - eps)` of `n`. Divisors sharing a factor
/// with `q` fail the condition.
pub fn remark_set_member(n: u64, q: u64, alpha: f64, eps: f64) -> bool {
    let threshold = libm::pow(n as f64, 1.0 - eps);
    divisors(n)
        .into_iter()
        .filter(|&m| m as f64 > threshold && m > 1)
        .all(|m| match mult_order_u64(q % m, m) {
            Some(o) => power_at_least(o, m, alpha),
            None => false,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffpoly::field_new;

    fn poly(p: u64, s: &str) -> FqPolynomial {
        FqPolynomial::parse(&field_new(p, 1, None).unwrap(), s).unwrap()
    }

    #[test]
    fn mason_examples() {
        let f3 = field_new(3, 1, None).unwrap();
        let p3 = |s| FqPolynomial::parse(&f3, s).unwrap();
        assert_eq!(
            mason_check(&p3("t^2"), &p3("1"), &p3("t^2+1")),
            Ok(MasonOutcome::Holds { margin: 0 })
        );
        let f2 = field_new(2, 1, None).unwrap();
        let p2 = |s| FqPolynomial::parse(&f2, s).unwrap();
        assert!(matches!(
            mason_check(&p2("t^2"), &p2("t^2+1"), &p2("1")),
            Ok(MasonOutcome::Inapplicable(_))
        ));
        assert_eq!(
            mason_check(&p2("t"), &p2("1"), &p2("t+1")),
            Ok(MasonOutcome::Holds { margin: 0 })
        );
        assert_eq!(mason_check(&p2("t"), &p2("1"), &p2("t")), Err(FfError::SumMismatch));
    }

    #[test]
    fn c_ell_examples() {
        assert_eq!(c_ell(&poly(2, "t"), 3).unwrap(), poly(2, "t^2+t+1"));
        assert_eq!(c_ell(&poly(2, "t"), 2).unwrap(), poly(2, "t+1"));
        assert_eq!(c_ell(&poly(3, "t+1"), 2).unwrap(), poly(3, "t+2"));
        assert_eq!(c_ell(&poly(3, "1"), 2), Err(FfError::DivisionByZeroPoly));
    }

    #[test]
    fn orders_mod_irreducibles() {
        let b = FactorBudget::default();
        let ord = |pi| order_mod_pi(&poly(2, "t"), &poly(2, pi), &b).unwrap();
        assert_eq!(ord("t+1"), BigUint::from(1u32));
        assert_eq!(ord("t^2+t+1"), BigUint::from(3u32));
        assert_eq!(ord("t^3+t+1"), BigUint::from(7u32));
        assert_eq!(order_mod_pi(&poly(2, "t"), &poly(2, "t"), &b), Err(FfError::NotCoprime));
        assert_eq!(
            order_mod_pi(&poly(2, "t"), &poly(2, "t^2+1"), &b),
            Err(FfError::NotIrreducible)
        );
    }

    #[test]
    fn order_relation_examples() {
        assert_eq!(order_relation_check(&poly(2, "t"), 3), Ok(true));
        assert_eq!(order_relation_check(&poly(3, "t"), 2), Ok(true));
        assert_eq!(order_relation_check(&poly(2, "t^2"), 3), Ok(true));
        assert_eq!(order_relation_check(&poly(2, "t"), 2), Err(FfError::InvalidEll));
    }

    #[test]
    fn irreducible_counts() {
        assert_eq!(irreducible_count(2, 1), BigUint::from(2u32));
        assert_eq!(irreducible_count(2, 3), BigUint::from(2u32));
        assert_eq!(irreducible_count(3, 2), BigUint::from(3u32));
        // degrees 2, 4, 6 over F_2: 1 + 3 + 9
        assert_eq!(count_degree_multiple(2, 2, 6), BigUint::from(13u32));
    }

    #[test]
    fn s_alpha_examples() {
        assert_eq!(s_alpha_member(7, 2, 0.5), Ok(true));
        assert_eq!(s_alpha_member(7, 2, 1.0), Ok(false));
        assert_eq!(s_alpha_member(3, 4, 0.5), Ok(false));
        // ord_5(2) = 4 = 16^(1/2): boundary decided exactly
        assert!(power_at_least(4, 16, 0.5));
        assert!(!power_at_least(3, 16, 0.5));
    }

    #[test]
    fn machinery_examples() {
        let r = theorem2_machinery_check(&poly(2, "t"), 3).unwrap();
        assert_eq!((r.v_degree_sum, r.v_degree_bound, r.ord_ell_q), (0, 0, 2));
        assert!(r.passed());
        let r = theorem2_machinery_check(&poly(2, "t"), 7).unwrap();
        assert!(r.degrees_divisible && r.passed());
        assert_eq!((r.ord_ell_q, r.g), (3, 3));
        assert_eq!(
            theorem2_machinery_check(&poly(2, "t^2"), 3),
            Err(FfError::PerfectPthPower)
        );
    }

    #[test]
    fn density_examples() {
        let d = order_density(2, 100, 0.5);
        assert_eq!(d.total, 24);
        assert!(d.fraction() > 0.0 && d.fraction() <= 1.0);
        assert_eq!(order_density(2, 10, 0.0).fraction(), 1.0);
        assert!(order_density(3, 100, 0.99).fraction() < 1.0);
    }

    #[test]
    fn remark_filter() {
        // 7 is prime: only m = 7 exceeds 7^(1 - eps), ord_7(2) = 3 < 7^0.9
        assert!(!remark_set_member(7, 2, 0.9, 0.1));
        assert!(remark_set_member(7, 2, 0.5, 0.1));
    }
}
