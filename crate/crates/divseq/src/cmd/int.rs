//! `divseq int`: the sequence `a^n - b^n`.
//!
//! CSV columns: `n, a^n - b^n (factorization), value, P, P_exact, omega`.
//! `P` is the greatest prime factor found (a lower bound when `P_exact` is
//! false) and `omega` is empty for partial factorizations.

use clap::Args;
use divseq_core::arith::{divisors, FactorBudget};
use divseq_core::cycloseq::{
    bound_check_term, cyclotomic_value, has_exact_order, omega_identity_check, order_count, prachar_count, term,
    BoundKind, BoundOutcome, CycloError, SequenceSpec, SequenceTerm,
};
use divseq_core::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::config::{config_err, parse_checks, CliError};
use crate::record::{ReportRecord, Status};

pub const CHECKS: [&str; 11] = [
    "zsigmondy",
    "schinzel",
    "stewart",
    "eq_lower",
    "omega",
    "identity",
    "divisibility",
    "order",
    "roundtrip",
    "erdos",
    "prachar",
];

#[derive(Debug, Args)]
pub struct IntArgs {
    #[arg(long, default_value_t = 2)]
    pub a: u64,
    #[arg(long, default_value_t = 1)]
    pub b: u64,
    #[arg(long, default_value_t = 1)]
    pub n_min: u32,
    #[arg(long)]
    pub n_max: u32,
    /// Comma-separated: zsigmondy, schinzel, stewart, eq_lower, omega,
    /// identity, divisibility, order, roundtrip, erdos, prachar, or all.
    #[arg(long, alias = "check", value_delimiter = ',')]
    pub checks: Vec<String>,
}

#[derive(Debug)]
pub struct IntConfig {
    pub spec: SequenceSpec,
    pub n_min: u32,
    pub n_max: u32,
    pub checks: Vec<&'static str>,
}

impl IntConfig {
    pub fn validate(args: IntArgs) -> Result<IntConfig, CliError> {
        if args.n_max == 0 || args.n_min == 0 {
            return Err(CliError::Config("indices start at 1; --n-min and --n-max must be >= 1".into()));
        }
        if args.n_min > args.n_max {
            return Err(CliError::Config(format!("--n-min {} exceeds --n-max {}", args.n_min, args.n_max)));
        }
        let spec = SequenceSpec::new(args.a, args.b).map_err(config_err)?;
        let checks = parse_checks(&args.checks, &CHECKS)?;
        Ok(IntConfig { spec, n_min: args.n_min, n_max: args.n_max, checks })
    }
}

fn engine_err(e: CycloError) -> CliError {
    CliError::Check(e.to_string())
}

pub fn header(spec: &SequenceSpec) -> String {
    if spec.b().is_one() {
        format!("{}^n - 1", spec.a())
    } else {
        format!("{}^n - {}^n", spec.a(), spec.b())
    }
}

pub fn run(cfg: &IntConfig, budget: &FactorBudget) -> Result<ReportRecord, CliError> {
    let spec = &cfg.spec;
    let head = header(spec);
    let mut rec = ReportRecord::new("int", &["n", &head, "value", "P", "P_exact", "omega"], 2);
    rec.param("a", spec.a());
    rec.param("b", spec.b());
    rec.param("n_min", cfg.n_min);
    rec.param("n_max", cfg.n_max);
    let a_int = BigInt::from(spec.a().clone());
    let b_int = BigInt::from(spec.b().clone());

    for n in cfg.n_min..=cfg.n_max {
        let t = term(spec, n, budget).map_err(engine_err)?;
        let complete = t.factorization.is_complete();
        if !complete {
            rec.budget_exhausted.push(n as u64);
        }
        let (p, exact) = match t.factorization.greatest_prime_factor() {
            Ok((p, e)) => (p.to_string(), e.to_string()),
            Err(_) => (String::new(), String::new()),
        };
        let omega = t.factorization.omega().map(|w| w.to_string()).unwrap_or_default();
        rec.rows.push(vec![n.to_string(), t.factorization.to_string(), t.value.to_string(), p, exact, omega]);

        for &check in &cfg.checks {
            let nn = Some(n as u64);
            match check {
                "zsigmondy" | "schinzel" | "stewart" | "eq_lower" => {
                    let kind = BoundKind::from_name(check).expect("check names match bound kinds");
                    match bound_check_term(kind, spec, &t) {
                        BoundOutcome::Pass => rec.check(check, nn, Status::Pass, ""),
                        BoundOutcome::Fail(why) => rec.check(check, nn, Status::Fail, why),
                        BoundOutcome::Skipped(why) => rec.check(check, nn, Status::Skipped, why),
                    }
                }
                "omega" => {
                    if !spec.b().is_one() {
                        rec.check(check, nn, Status::Skipped, "needs b = 1");
                        continue;
                    }
                    match omega_identity_check(&a_int, n, budget) {
                        Ok(ok) => rec.pass_or_fail(check, nn, ok, if ok { "" } else { "omega(a^n - 1) != sum E_a(d)" }),
                        Err(e) => rec.check(check, nn, Status::Skipped, e.to_string()),
                    }
                }
                "identity" => {
                    let product: BigInt = divisors(n as u64)
                        .into_iter()
                        .map(|d| cyclotomic_value(&a_int, &b_int, d as u32))
                        .product();
                    let ok = product == BigInt::from(t.value.clone());
                    rec.pass_or_fail(check, nn, ok, if ok { String::new() } else { format!("product of Phi_d = {product}") });
                }
                "divisibility" => {
                    let bad: Vec<u64> = divisors(n as u64)
                        .into_iter()
                        .filter(|&m| m < n as u64 && !(&t.value % spec.value(m as u32)).is_zero())
                        .collect();
                    rec.pass_or_fail(check, nn, bad.is_empty(), format_fail("u_m does not divide u_n for m =", &bad));
                }
                "order" => order_check(&mut rec, spec, &a_int, n, budget),
                "roundtrip" => roundtrip_check(&mut rec, &t),
                "erdos" => match t.factorization.greatest_prime_factor() {
                    Ok((p, exact)) => {
                        let ratio = p.to_f64().unwrap_or(f64::INFINITY) / n as f64;
                        let bound = if exact { "" } else { " (lower bound)" };
                        rec.check(check, nn, Status::Info, format!("P/n = {ratio:.6}{bound}"));
                    }
                    Err(_) => rec.check(check, nn, Status::Skipped, "no prime factor"),
                },
                "prachar" => {
                    rec.check(check, nn, Status::Info, format!("#{{p : (p - 1) | n}} = {}", prachar_count(n as u64)));
                }
                _ => unreachable!("validated check name"),
            }
        }
    }
    Ok(rec)
}

fn format_fail(what: &str, items: &[u64]) -> String {
    if items.is_empty() {
        return String::new();
    }
    let list: Vec<String> = items.iter().map(u64::to_string).collect();
    format!("{what} {}", list.join(", "))
}

/// Every witness for `E_a(n)` divides `a^n - 1` and not `a^d - 1` for the
/// proper divisors `d` of `n`.
fn order_check(rec: &mut ReportRecord, spec: &SequenceSpec, a: &BigInt, n: u32, budget: &FactorBudget) {
    let nn = Some(n as u64);
    if !spec.b().is_one() {
        rec.check("order", nn, Status::Skipped, "needs b = 1");
        return;
    }
    let count = match order_count(a, n, budget) {
        Ok(c) => c,
        Err(e) => return rec.check("order", nn, Status::Skipped, e.to_string()),
    };
    let a_u = spec.a();
    let proper: Vec<u64> = divisors(n as u64).into_iter().filter(|&d| d < n as u64).collect();
    let bad: Vec<&BigUint> = count
        .witnesses
        .iter()
        .filter(|p| {
            !a_u.modpow(&BigUint::from(n), p).is_one()
                || proper.iter().any(|&d| a_u.modpow(&BigUint::from(d), p).is_one())
                || !has_exact_order(a, p, n)
        })
        .collect();
    let detail = if bad.is_empty() {
        format!("E_a({n}) = {}", count.count)
    } else {
        format!("witnesses without exact order {n}: {bad:?}")
    };
    rec.pass_or_fail("order", nn, bad.is_empty(), detail);
}

/// Sign, cofactor and prime powers reproduce the term; the canonical text
/// parses back to the same factorization; exponents are positive and primes
/// ascending.
fn roundtrip_check(rec: &mut ReportRecord, t: &SequenceTerm) {
    let f = &t.factorization;
    let reparsed = f.to_string().parse::<divseq_core::arith::Factorization>();
    let mut problems = Vec::new();
    if f.value() != BigInt::from(t.value.clone()) {
        problems.push(format!("product {} != {}", f.value(), t.value));
    }
    if reparsed.as_ref() != Ok(f) {
        problems.push(format!("text `{f}` does not parse back"));
    }
    if !f.factors().windows(2).all(|w| w[0].0 < w[1].0) || f.factors().iter().any(|(_, e)| *e == 0) {
        problems.push("factor list not canonical".into());
    }
    if let Some(split) = &t.split {
        let mut u = BigUint::one();
        let mut v = BigUint::one();
        for (p, e) in f.factors() {
            if *e == 1 {
                u *= p;
            } else {
                v *= p.pow(*e);
            }
        }
        if split.u != u || split.v != v || &u * &v != t.value {
            problems.push(format!("power split u = {}, v = {} is wrong", split.u, split.v));
        }
    }
    rec.pass_or_fail("roundtrip", Some(t.n as u64), problems.is_empty(), problems.join("; "));
}
