//! `divseq ec`: the denominator sequence `d_n` of `nQ` on
//! `y^2 = x^3 + Ax + B`.
//!
//! CSV columns: `n, d_n, mode, D_n`. `d_n` holds the factorization for
//! `n <= --factor-max` and the plain value beyond; `mode` is `blind`
//! (budgeted factoring), `verified` (a claimed factorization checked
//! against `d_n`) or `unfactored`; `D_n` is the primitive part.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::Args;
use divseq_core::arith::{primes_up_to, ArithError, FactorBudget, Factorization};
use divseq_core::ecdiv::{
    abc_identity_check, abc_triple, anb_bound_check, apparition_rank, cm_divisor_count, curve_new, denom_sequence,
    division_polynomial_eds, factor_denominators, growth_report, height_growth, lemma_dn_dn_check, point_mul,
    primitive_divisors, reduction_order, CurveQ, DenomFactorRow, DenomSequence, EcError, LemmaPart,
    PrimitiveDivisors, RationalPoint, RowMode, BAND, BAND_START,
};
use divseq_core::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cmd::eds::eds_checks;
use crate::config::{parse_checks, parse_pair, CliError};
use crate::record::{ReportRecord, Status};

pub const CHECKS: [&str; 18] = [
    "divisibility",
    "canonical",
    "coprime",
    "lemma_a",
    "lemma_b",
    "lemma_c",
    "reduction",
    "height",
    "growth",
    "abc",
    "anb",
    "ward",
    "dn_wn",
    "realization",
    "nonsingular",
    "assoc",
    "mul",
    "cm",
];

/// Curve coefficients, base point and the text of a claims file.
type BuiltinClaims = ((i64, i64), (i64, i64), &'static str);

/// Claimed factorizations shipped with the tool, keyed by curve and point.
/// Each file holds `n | factorization` lines.
const BUILTIN_CLAIMS: &[BuiltinClaims] =
    &[((0, -11), (3, 4), include_str!("../../data/claims_0_-11_3_4.txt"))];

/// Random triples for the associativity check, and the largest multiple
/// drawn.
const ASSOC_TRIPLES: usize = 100;
const ASSOC_RANGE: u32 = 20;

#[derive(Debug, Args)]
pub struct EcArgs {
    /// Curve coefficients `A,B` of y^2 = x^3 + Ax + B.
    #[arg(long, allow_hyphen_values = true)]
    pub curve: String,
    /// Base point `x,y`; coordinates may be fractions such as `1/4`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long)]
    pub n_max: u32,
    /// Comma-separated: divisibility, canonical, coprime, lemma_a, lemma_b,
    /// lemma_c, reduction, height, growth, abc, anb, ward, dn_wn,
    /// realization, nonsingular, assoc, mul, cm, or all.
    #[arg(long, alias = "check", value_delimiter = ',')]
    pub checks: Vec<String>,
    /// Factor d_n for n up to this index; later terms are printed unfactored.
    #[arg(long, default_value_t = 17)]
    pub factor_max: u32,
    /// Prime bound for the reduction-order check.
    #[arg(long, default_value_t = 1000)]
    pub prime_max: u64,
    /// Rho cap used when factoring abc radicals.
    #[arg(long, default_value_t = 1 << 12)]
    pub abc_rho: u64,
    /// Modulus m for the CM divisor count.
    #[arg(long)]
    pub cm_m: Option<u64>,
    /// Prime bound X for the CM divisor count.
    #[arg(long, default_value_t = 1000)]
    pub cm_x: u64,
    /// Extra claimed factorizations, one `n | factorization` line each.
    #[arg(long)]
    pub claims: Option<PathBuf>,
    /// Ignore the built-in claims and factor every row under the budget.
    #[arg(long)]
    pub blind: bool,
}

#[derive(Debug)]
pub struct EcConfig {
    pub curve: CurveQ,
    pub point: RationalPoint,
    pub n_max: u32,
    pub checks: Vec<&'static str>,
    pub factor_max: u32,
    pub prime_max: u64,
    pub abc_rho: u64,
    pub cm_m: Option<u64>,
    pub cm_x: u64,
    pub claims: BTreeMap<u32, Factorization>,
}

/// Input-shape errors exit with 2; anything found while computing is a
/// check failure.
pub fn ec_err(e: EcError) -> CliError {
    match e {
        EcError::ClaimMismatch(_) | EcError::InvariantViolated(_) | EcError::Arith(_) => {
            CliError::Check(e.to_string())
        }
        _ => CliError::Config(e.to_string()),
    }
}

pub fn parse_curve_point(curve: &str, point: &str) -> Result<(CurveQ, RationalPoint), CliError> {
    let (a, b): (BigInt, BigInt) = parse_pair("--curve", curve)?;
    let curve = curve_new(a, b).map_err(ec_err)?;
    let (x, y): (BigRational, BigRational) = parse_pair("--point", point)?;
    let point = curve.point(x, y).map_err(ec_err)?;
    Ok((curve, point))
}

fn parse_claims(text: &str, source: &str) -> Result<BTreeMap<u32, Factorization>, CliError> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |why: String| CliError::Config(format!("{source}:{}: {why}", i + 1));
        let (n, f) = line.split_once('|').ok_or_else(|| bad("expected `n | factorization`".into()))?;
        let n: u32 = n.trim().parse().map_err(|_| bad(format!("bad index `{}`", n.trim())))?;
        let f: Factorization = f.trim().parse().map_err(|e| match e {
            ArithError::InvalidFactorization(why @ "listed factor is not prime") => {
                CliError::Check(format!("{source}:{}: claim for n = {n}: {why}", i + 1))
            }
            e => bad(format!("{e}")),
        })?;
        out.insert(n, f);
    }
    Ok(out)
}

impl EcConfig {
    pub fn validate(args: EcArgs) -> Result<EcConfig, CliError> {
        if args.n_max == 0 {
            return Err(CliError::Config("--n-max must be >= 1".into()));
        }
        let (curve, point) = parse_curve_point(&args.curve, &args.point)?;
        let checks = parse_checks(&args.checks, &CHECKS)?;
        if args.cm_m == Some(0) {
            return Err(CliError::Config("--cm-m must be >= 1".into()));
        }
        let mut claims = BTreeMap::new();
        if !args.blind {
            for &((a, b), (x, y), text) in BUILTIN_CLAIMS {
                if curve.a() == &BigInt::from(a)
                    && curve.b() == &BigInt::from(b)
                    && curve.integral_point(x, y).is_ok_and(|p| p == point)
                {
                    claims.extend(parse_claims(text, "built-in claims")?);
                }
            }
        }
        if let Some(path) = &args.claims {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            claims.extend(parse_claims(&text, &path.display().to_string())?);
        }
        Ok(EcConfig {
            curve,
            point,
            n_max: args.n_max,
            checks,
            factor_max: args.factor_max.min(args.n_max),
            prime_max: args.prime_max,
            abc_rho: args.abc_rho,
            cm_m: args.cm_m,
            cm_x: args.cm_x,
            claims,
        })
    }
}

pub fn run(cfg: &EcConfig, budget: &FactorBudget) -> Result<ReportRecord, CliError> {
    let (curve, q) = (&cfg.curve, &cfg.point);
    let seq = denom_sequence(curve, q, cfg.n_max).map_err(ec_err)?;
    let prim = primitive_divisors(&seq);
    let factored: Vec<DenomFactorRow> = if cfg.factor_max > 0 {
        let head = denom_sequence(curve, q, cfg.factor_max).map_err(ec_err)?;
        let claims: BTreeMap<u32, Factorization> =
            cfg.claims.range(..=cfg.factor_max).map(|(n, f)| (*n, f.clone())).collect();
        factor_denominators(&head, &primitive_divisors(&head), budget, &claims).map_err(ec_err)?
    } else {
        Vec::new()
    };

    let mut rec = ReportRecord::new("ec", &["n", "d_n", "mode", "D_n"], 2);
    rec.param("curve", format!("{},{}", curve.a(), curve.b()));
    rec.param("point", q);
    rec.param("n_max", cfg.n_max);
    rec.param("factor_max", cfg.factor_max);
    for n in 1..=cfg.n_max {
        let (text, mode) = match factored.get(n as usize - 1) {
            Some(row) => {
                if !row.factorization.is_complete() {
                    rec.budget_exhausted.push(n as u64);
                }
                let mode = match row.mode {
                    RowMode::Blind => "blind",
                    RowMode::Verified => "verified",
                };
                (row.factorization.to_string(), mode)
            }
            None => (seq.d(n).to_string(), "unfactored"),
        };
        rec.rows.push(vec![n.to_string(), text, mode.to_string(), prim.d(n).to_string()]);
    }
    for row in factored.iter().filter(|r| r.mode == RowMode::Verified) {
        rec.check("claims", Some(row.n as u64), Status::Pass, "claimed primes certified, product equals d_n");
    }

    let n_max = cfg.n_max;
    for &check in &cfg.checks {
        match check {
            "divisibility" => divisibility_check(&mut rec, &seq),
            "canonical" => {
                for n in 1..=n_max {
                    let p = seq.point(n);
                    let ok = curve.contains(p) && p.is_canonical();
                    rec.pass_or_fail(check, Some(n as u64), ok, if ok { String::new() } else { format!("{n}Q = {p}") });
                }
            }
            "coprime" => coprime_check(&mut rec, &prim),
            "lemma_a" | "lemma_b" | "lemma_c" => {
                let part = match check {
                    "lemma_a" => LemmaPart::A,
                    "lemma_b" => LemmaPart::B,
                    _ => LemmaPart::C,
                };
                let r = lemma_dn_dn_check(&seq, &prim, part).map_err(ec_err)?;
                let mut detail = format!("n <= {}", r.checked);
                if part == LemmaPart::C {
                    detail.push_str(&format!(", {} primes", r.primes_checked));
                }
                if !r.passed() {
                    detail = format!("fails at n = {:?}", r.failures);
                }
                rec.pass_or_fail(check, None, r.passed(), detail);
            }
            "reduction" => reduction_check(&mut rec, &seq, cfg.prime_max)?,
            "height" => height_check(&mut rec, &seq, &prim),
            "growth" => {
                if factored.is_empty() {
                    rec.check(check, None, Status::Skipped, "no factored rows (--factor-max 0)");
                }
                for g in growth_report(&factored) {
                    let bound = if g.exact { "" } else { ", lower bound" };
                    rec.check(
                        check,
                        Some(g.n as u64),
                        Status::Info,
                        format!("P(d_n) = {}{bound}, log P / log n = {:.6}", g.p, g.ratio),
                    );
                }
            }
            "abc" => abc_check(&mut rec, cfg, budget)?,
            "anb" => {
                for n in 1..=n_max {
                    match anb_bound_check(curve, q, n) {
                        Ok(ok) => rec.pass_or_fail(
                            check,
                            Some(n as u64),
                            ok,
                            if ok { "" } else { "|a_n b_n|^6 > 8 max(|a_n|^3, |B| d_n^6)^5" },
                        ),
                        Err(EcError::WrongJInvariant) => {
                            rec.check(check, None, Status::Skipped, "needs j = 0");
                            break;
                        }
                        Err(e) => return Err(ec_err(e)),
                    }
                }
            }
            "ward" | "dn_wn" | "realization" | "nonsingular" => {}
            "assoc" => assoc_check(&mut rec, curve, q, n_max, budget.rng_seed)?,
            "mul" => {
                let mut acc = RationalPoint::Infinity;
                for n in 1..=n_max {
                    acc = curve.add(&acc, q);
                    let ok = acc == point_mul(curve, q, n as i64).map_err(ec_err)?;
                    rec.pass_or_fail(check, Some(n as u64), ok, if ok { "" } else { "point_mul disagrees with repeated addition" });
                }
            }
            "cm" => match cfg.cm_m {
                None => rec.check(check, None, Status::Skipped, "needs --cm-m"),
                Some(m) => match cm_divisor_count(curve, m, cfg.cm_x) {
                    Ok(r) => rec.check(
                        check,
                        Some(m),
                        Status::Info,
                        format!(
                            "{} of {} primes <= {} have {m} | n_p; m_sp = {}, tau(m_sp) = {}, ratio {:.6}",
                            r.count, r.prime_count, r.x, r.m_sp, r.tau_m_sp, r.bound_ratio
                        ),
                    ),
                    Err(EcError::WrongJInvariant) => rec.check(check, None, Status::Skipped, "needs j = 0 or 1728"),
                    Err(e) => return Err(ec_err(e)),
                },
            },
            _ => unreachable!("validated check name"),
        }
    }

    let eds_wanted: Vec<&str> =
        cfg.checks.iter().copied().filter(|c| ["ward", "dn_wn", "realization", "nonsingular"].contains(c)).collect();
    if !eds_wanted.is_empty() {
        if q.is_integral() {
            let w = division_polynomial_eds(curve, q, n_max).map_err(ec_err)?;
            eds_checks(&mut rec, &w, Some(&seq), &eds_wanted, None)?;
        } else {
            for c in eds_wanted {
                rec.check(c, None, Status::Skipped, "needs an integral base point");
            }
        }
    }
    Ok(rec)
}

fn divisibility_check(rec: &mut ReportRecord, seq: &DenomSequence) {
    for n in 1..=seq.len() {
        let bad: Vec<u32> = (1..n).filter(|m| n % m == 0 && !(seq.d(n) % seq.d(*m)).is_zero()).collect();
        let detail = if bad.is_empty() { String::new() } else { format!("d_m does not divide d_{n} for m = {bad:?}") };
        rec.pass_or_fail("divisibility", Some(n as u64), bad.is_empty(), detail);
    }
}

fn coprime_check(rec: &mut ReportRecord, prim: &PrimitiveDivisors) {
    use num_integer::Integer;
    for n in 1..=prim.len() {
        let bad: Vec<u32> = (1..n).filter(|&m| !prim.d(m).gcd(prim.d(n)).is_one()).collect();
        let detail = if bad.is_empty() { String::new() } else { format!("gcd(D_m, D_{n}) > 1 for m = {bad:?}") };
        rec.pass_or_fail("coprime", Some(n as u64), bad.is_empty(), detail);
    }
}

/// For each good prime: `o_p(Q) | n_p`, the division-polynomial rank of
/// apparition equals `o_p(Q)`, and so does the first `n` with `p | d_n`
/// whenever that index is within the sequence.
fn reduction_check(rec: &mut ReportRecord, seq: &DenomSequence, prime_max: u64) -> Result<(), CliError> {
    let (curve, q) = (seq.curve(), seq.base());
    for p in primes_up_to(prime_max) {
        let (o, np) = match reduction_order(curve, q, p) {
            Ok(v) => v,
            Err(EcError::BadReduction(_)) => {
                rec.check("reduction", Some(p), Status::Skipped, "bad reduction");
                continue;
            }
            Err(EcError::LimitExceeded(why)) => {
                rec.check("reduction", Some(p), Status::Skipped, why);
                continue;
            }
            Err(e) => return Err(ec_err(e)),
        };
        let mut problems = Vec::new();
        if np % o != 0 {
            problems.push(format!("o = {o} does not divide n_p = {np}"));
        }
        match apparition_rank(curve, q, p, np) {
            Ok(r) if r == Some(o) => {}
            Ok(r) => problems.push(format!("rank of apparition {r:?} != o = {o}")),
            Err(EcError::NonIntegralBasePoint) => {}
            Err(e) => return Err(ec_err(e)),
        }
        let pb = BigUint::from(p);
        let direct = (1..=seq.len()).find(|&k| (seq.d(k) % &pb).is_zero());
        match direct {
            Some(k) if k as u64 != o => problems.push(format!("first n with p | d_n is {k}, o = {o}")),
            None if o <= seq.len() as u64 => problems.push(format!("p divides no d_n with n <= {}, o = {o}", seq.len())),
            _ => {}
        }
        let detail = if problems.is_empty() { format!("o = {o}, n_p = {np}") } else { problems.join("; ") };
        rec.pass_or_fail("reduction", Some(p), problems.is_empty(), detail);
    }
    Ok(())
}

fn height_check(rec: &mut ReportRecord, seq: &DenomSequence, prim: &PrimitiveDivisors) {
    let h = height_growth(seq, prim);
    rec.check("height_slope", None, Status::Info, format!("slope {:.9}, intercept {:.6}", h.slope, h.intercept));
    for &(n, r, rd) in &h.ratios {
        rec.check("height_ratio", Some(n as u64), Status::Info, format!("log d_n / n^2 = {r:.9}, log D_n / n^2 = {rd:.9}"));
    }
    let (lo, hi) = (BAND.0 * h.slope, BAND.1 * h.slope);
    match &h.band_failures {
        None => rec.check("height", None, Status::Skipped, format!("needs n_max >= {BAND_START}")),
        Some(f) => {
            let detail = if f.is_empty() {
                format!("ratios for {BAND_START} <= n <= {} within [{lo:.9}, {hi:.9}]", seq.len())
            } else {
                format!("ratios outside [{lo:.9}, {hi:.9}] at n = {f:?}")
            };
            rec.pass_or_fail("height", None, f.is_empty(), detail);
        }
    }
    let detail = if h.trivial_primitive.is_empty() {
        format!("D_n > 1 for 2 <= n <= {}", seq.len())
    } else {
        format!("D_n = 1 at n = {:?}", h.trivial_primitive)
    };
    rec.pass_or_fail("primitive", None, h.trivial_primitive.is_empty(), detail);
}

/// The zero-sum identity is asserted for every `n`; the radical and quality
/// of the reduced triple are reported under a reduced rho budget.
fn abc_check(rec: &mut ReportRecord, cfg: &EcConfig, budget: &FactorBudget) -> Result<(), CliError> {
    let abc_budget = FactorBudget::new(budget.trial_bound, cfg.abc_rho, budget.rng_seed).expect("trial bound checked");
    for n in 1..=cfg.n_max {
        match abc_identity_check(&cfg.curve, &cfg.point, n) {
            Ok(ok) => rec.pass_or_fail("abc", Some(n as u64), ok, if ok { "" } else { "b_n^2 - a_n^3 - (curve term) != 0" }),
            Err(EcError::WrongJInvariant) => {
                rec.check("abc", None, Status::Skipped, "needs j = 0 or 1728");
                return Ok(());
            }
            Err(e) => return Err(ec_err(e)),
        }
        let r = abc_triple(&cfg.curve, &cfg.point, n, &abc_budget).map_err(ec_err)?;
        let quality = match r.quality {
            Some(qv) => format!("quality {qv:.6}"),
            None => "radical incomplete under budget".to_string(),
        };
        rec.check(
            "abc_quality",
            Some(n as u64),
            Status::Info,
            format!("triple ({}, {}, {}), rad >= {}, {quality}", r.triple[0], r.triple[1], r.triple[2], r.radical),
        );
    }
    Ok(())
}

/// `(P + R) + S = P + (R + S) = (i + j + k)Q` for random multiples
/// `P = iQ, R = jQ, S = kQ` with `|i|, |j|, |k| <= min(n_max, 20)`.
fn assoc_check(rec: &mut ReportRecord, curve: &CurveQ, q: &RationalPoint, n_max: u32, seed: u64) -> Result<(), CliError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let bound = n_max.min(ASSOC_RANGE) as i64;
    let mut failures = Vec::new();
    for _ in 0..ASSOC_TRIPLES {
        let (i, j, k) = (rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound));
        let mul = |m: i64| point_mul(curve, q, m).map_err(ec_err);
        let (p1, p2, p3) = (mul(i)?, mul(j)?, mul(k)?);
        let left = curve.add(&curve.add(&p1, &p2), &p3);
        let right = curve.add(&p1, &curve.add(&p2, &p3));
        if left != right || left != mul(i + j + k)? {
            failures.push((i, j, k));
        }
    }
    let detail = if failures.is_empty() {
        format!("{ASSOC_TRIPLES} triples")
    } else {
        format!("fails for multiples {failures:?}")
    };
    rec.pass_or_fail("assoc", None, failures.is_empty(), detail);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_claims_parse() {
        for (_, _, text) in BUILTIN_CLAIMS {
            let claims = parse_claims(text, "built-in").unwrap();
            assert!(claims.values().all(Factorization::is_complete));
        }
    }

    #[test]
    fn claims_file_errors_name_the_line() {
        let err = parse_claims("# header\n2 | 2^3\n3 3^2\n", "c.txt").unwrap_err();
        assert!(err.to_string().contains("c.txt:3"), "{err}");
        assert_eq!(err.exit_code(), 2);
        let err = parse_claims("4 | 2^4 * 6179\n", "c.txt").unwrap_err();
        assert_eq!(err.exit_code(), 1, "{err}");
    }

    #[test]
    fn curve_and_point_inputs() {
        assert!(parse_curve_point("0,-11", "3,4").is_ok());
        assert!(parse_curve_point("0,0", "0,0").is_err());
        assert!(parse_curve_point("0,-11", "3,5").is_err());
    }
}
