use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::reduction::{reduction_order, POINT_COUNT_LIMIT};
use super::{DenomSequence, EcError};
use crate::arith::{
    factor_with_hints, ln_biguint, primes_up_to, strip_support, support_within, ArithError, FactorBudget,
    Factorization, PowerSplit, Sign,
};

/// `D_n`, the part of `d_n` coprime to `d_1 ... d_{n-1}`, with the
/// power-free/power-full split where a factorization is available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveDivisors {
    big_d: Vec<BigUint>,
    splits: Vec<Option<PowerSplit>>,
}

pub fn primitive_divisors(seq: &DenomSequence) -> PrimitiveDivisors {
    let mut big_d = Vec::with_capacity(seq.len() as usize);
    for n in 1..=seq.len() {
        let mut dn = seq.d(n).clone();
        for m in 1..n {
            dn = strip_support(&dn, seq.d(m));
        }
        big_d.push(dn);
    }
    let splits = alloc::vec![None; big_d.len()];
    PrimitiveDivisors { big_d, splits }
}

impl PrimitiveDivisors {
    pub fn len(&self) -> u32 {
        self.big_d.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.big_d.is_empty()
    }

    /// `D_n` for `1 <= n <= len`.
    pub fn d(&self, n: u32) -> &BigUint {
        &self.big_d[n as usize - 1]
    }

    /// `U_n V_n = D_n`, once known.
    pub fn split(&self, n: u32) -> Option<&PowerSplit> {
        self.splits[n as usize - 1].as_ref()
    }

    /// Factors `D_n` under `budget` to obtain `U_n` and `V_n`.
    pub fn split_with_budget(&mut self, n: u32, budget: &FactorBudget) -> Result<&PowerSplit, EcError> {
        if self.split(n).is_none() {
            let f = factor_with_hints(&BigInt::from(self.d(n).clone()), &[], budget)?;
            self.splits[n as usize - 1] = Some(f.power_split()?);
        }
        Ok(self.split(n).expect("just stored"))
    }

    /// Fills `U_n, V_n` from complete factorizations of `d_n`: `D_n`
    /// carries the full power of each of its primes.
    pub fn fill_splits(&mut self, rows: &[DenomFactorRow]) {
        let len = self.len();
        for row in rows.iter().filter(|r| r.n <= len && r.factorization.is_complete()) {
            let dn = self.d(row.n).clone();
            let mut split = PowerSplit { u: BigUint::one(), v: BigUint::one() };
            for (p, e) in row.factorization.factors() {
                if (&dn % p).is_zero() {
                    if *e == 1 {
                        split.u *= p;
                    } else {
                        split.v *= num_traits::Pow::pow(p, *e);
                    }
                }
            }
            debug_assert_eq!(&split.u * &split.v, dn);
            self.splits[row.n as usize - 1] = Some(split);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LemmaPart {
    /// Away from the discriminant, `p | d_n` iff `p | D_m` for some `m | n`.
    A,
    /// `prod_{m | n} D_m` divides `d_n`.
    B,
    /// A good prime `p <= 10^6` with `p || D_n` has `o_p(Q) = n`.
    C,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub part: LemmaPart,
    pub checked: u32,
    pub failures: Vec<u32>,
    /// Primes examined in part C.
    pub primes_checked: usize,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn divisor_product(prim: &PrimitiveDivisors, n: u32) -> BigUint {
    (1..=n).filter(|m| n.is_multiple_of(*m)).fold(BigUint::one(), |acc, m| acc * prim.d(m))
}

/// Runs one part of the `d_n`/`D_n` lemma for every `n` in the sequence.
/// Part A uses only gcds; part C finds the primes of `U_n` up to `10^6` by
/// trial division of `D_n`, so no full factorization is needed.
pub fn lemma_dn_dn_check(seq: &DenomSequence, prim: &PrimitiveDivisors, part: LemmaPart) -> Result<LemmaReport, EcError> {
    let big_n = seq.len().min(prim.len());
    let disc = seq.curve().discriminant().magnitude().clone();
    let mut report = LemmaReport { part, checked: big_n, failures: Vec::new(), primes_checked: 0 };
    let small_primes = if part == LemmaPart::C { primes_up_to(POINT_COUNT_LIMIT) } else { Vec::new() };
    for n in 1..=big_n {
        let ok = match part {
            LemmaPart::A => {
                let lhs = strip_support(seq.d(n), &disc);
                let rhs = strip_support(&divisor_product(prim, n), &disc);
                support_within(&lhs, &rhs) && support_within(&rhs, &lhs)
            }
            LemmaPart::B => (seq.d(n) % divisor_product(prim, n)).is_zero(),
            LemmaPart::C => {
                let dn = prim.d(n);
                let mut ok = true;
                for &p in &small_primes {
                    if !(dn % p).is_zero() || (&disc % p).is_zero() || (dn % (p * p)).is_zero() {
                        continue;
                    }
                    report.primes_checked += 1;
                    let (o, _) = reduction_order(seq.curve(), seq.base(), p)?;
                    ok &= o == n as u64;
                }
                ok
            }
        };
        if !ok {
            report.failures.push(n);
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowMode {
    /// Factored under the budget.
    Blind,
    /// A supplied factorization, checked against `d_n`.
    Verified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenomFactorRow {
    pub n: u32,
    pub factorization: Factorization,
    pub mode: RowMode,
}

/// Factorizations of `d_1..d_N`. Rows listed in `claims` are verified (the
/// listed primes are certified on parsing, their product must equal `d_n`);
/// the rest are factored under `budget`, split first along `D_n` and the
/// primes of earlier rows.
pub fn factor_denominators(
    seq: &DenomSequence,
    prim: &PrimitiveDivisors,
    budget: &FactorBudget,
    claims: &BTreeMap<u32, Factorization>,
) -> Result<Vec<DenomFactorRow>, EcError> {
    let mut rows: Vec<DenomFactorRow> = Vec::with_capacity(seq.len() as usize);
    let mut known: Vec<BigUint> = Vec::new();
    for n in 1..=seq.len() {
        let dn = seq.d(n);
        let row = if let Some(claim) = claims.get(&n) {
            if !claim.is_complete() || claim.sign() != Sign::Positive || &claim.abs_value() != dn {
                return Err(EcError::ClaimMismatch(n));
            }
            DenomFactorRow { n, factorization: claim.clone(), mode: RowMode::Verified }
        } else {
            let mut hints = alloc::vec![prim.d(n).clone()];
            hints.extend(known.iter().cloned());
            let factorization = factor_with_hints(&BigInt::from(dn.clone()), &hints, budget)?;
            DenomFactorRow { n, factorization, mode: RowMode::Blind }
        };
        for p in row.factorization.primes() {
            if !known.contains(p) {
                known.push(p.clone());
            }
        }
        let cof = row.factorization.cofactor();
        if !cof.is_one() && !known.contains(cof) {
            known.push(cof.clone());
        }
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub n: u32,
    /// `P(d_n)`, or a lower bound when `exact` is false.
    pub p: BigUint,
    pub exact: bool,
    /// `log P(d_n) / log n`
    pub ratio: f64,
}

/// Greatest prime factors of the factored rows; `n = 1` and rows with
/// `d_n = 1` are skipped.
pub fn growth_report(rows: &[DenomFactorRow]) -> Vec<GrowthRow> {
    rows.iter()
        .filter(|r| r.n >= 2)
        .filter_map(|r| {
            let (p, exact) = match r.factorization.greatest_prime_factor() {
                Ok(v) => v,
                Err(ArithError::NoPrimeFactor) => return None,
                Err(_) => unreachable!("greatest_prime_factor only fails on units"),
            };
            let ratio = ln_biguint(&p) / libm::log(r.n as f64);
            Some(GrowthRow { n: r.n, p, exact, ratio })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeightReport {
    /// Least-squares slope of `log d_n` against `n^2`.
    pub slope: f64,
    pub intercept: f64,
    /// `(n, log d_n / n^2, log D_n / n^2)`
    pub ratios: Vec<(u32, f64, f64)>,
    /// Indices `n >= 10` whose ratio leaves `[0.8 s, 1.05 s]`; `None` when
    /// the sequence is shorter than 10.
    pub band_failures: Option<Vec<u32>>,
    /// Indices `n >= 2` with `D_n = 1`.
    pub trivial_primitive: Vec<u32>,
}

pub const BAND_START: u32 = 10;
pub const BAND: (f64, f64) = (0.8, 1.05);

impl HeightReport {
    pub fn passed(&self) -> bool {
        self.band_failures.as_ref().is_some_and(|f| f.is_empty()) && self.trivial_primitive.is_empty()
    }
}

pub fn height_growth(seq: &DenomSequence, prim: &PrimitiveDivisors) -> HeightReport {
    let big_n = seq.len().min(prim.len());
    let pts: Vec<(f64, f64)> = (1..=big_n).map(|n| ((n as f64) * (n as f64), ln_biguint(seq.d(n)))).collect();
    let (slope, intercept) = least_squares(&pts);
    let ratios: Vec<(u32, f64, f64)> = (1..=big_n)
        .map(|n| {
            let n2 = (n as f64) * (n as f64);
            (n, ln_biguint(seq.d(n)) / n2, ln_biguint(prim.d(n)) / n2)
        })
        .collect();
    let band_failures = (big_n >= BAND_START).then(|| {
        ratios
            .iter()
            .filter(|(n, r, _)| *n >= BAND_START && !(BAND.0 * slope <= *r && *r <= BAND.1 * slope))
            .map(|(n, _, _)| *n)
            .collect()
    });
    let trivial_primitive = (2..=big_n).filter(|&n| prim.d(n).is_one()).collect();
    HeightReport { slope, intercept, ratios, band_failures, trivial_primitive }
}

fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let k = pts.len() as f64;
    if pts.len() < 2 {
        return (pts.first().map_or(0.0, |&(x, y)| if x.is_zero() { 0.0 } else { y / x }), 0.0);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
