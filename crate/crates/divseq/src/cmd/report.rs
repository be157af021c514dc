//! `divseq report`: self-check suites that exercise every engine with fixed
//! parameters.
//!
//! CSV columns: `experiment, checks, pass, fail, skipped`. Check names in
//! the record are prefixed with the experiment label.

use clap::{Args, ValueEnum};
use divseq_core::arith::{carmichael_lambda, factor, factor_u64, mult_order, FactorBudget, Sign};
use divseq_core::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cmd::{ec, eds, ff, int};
use crate::config::CliError;
use crate::record::{ReportRecord, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Arith,
    Cyclo,
    Ff,
    Ec,
    All,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Sieve bound for the factorization oracle in the arith suite.
    #[arg(long, default_value_t = 10_000)]
    pub sieve_max: u64,
    /// Random cases per arith property.
    #[arg(long, default_value_t = 1000)]
    pub cases: u32,
}

#[derive(Debug)]
pub struct ReportConfig {
    pub suite: Suite,
    pub sieve_max: u64,
    pub cases: u32,
}

impl ReportConfig {
    pub fn validate(args: ReportArgs) -> Result<ReportConfig, CliError> {
        if !(2..=10_000_000).contains(&args.sieve_max) {
            return Err(CliError::Config("--sieve-max must lie in 2..=10^7".into()));
        }
        Ok(ReportConfig { suite: args.suite, sieve_max: args.sieve_max, cases: args.cases })
    }
}

pub fn run(cfg: &ReportConfig, budget: &FactorBudget) -> Result<ReportRecord, CliError> {
    let mut rec = ReportRecord::new("report", &["experiment", "checks", "pass", "fail", "skipped"], 5);
    rec.param("suite", format!("{:?}", cfg.suite).to_lowercase());
    let want = |s: Suite| cfg.suite == s || cfg.suite == Suite::All;
    if want(Suite::Arith) {
        let sub = arith_suite(cfg, budget);
        merge(&mut rec, "arith", sub);
    }
    if want(Suite::Cyclo) {
        for a in 2..=10u64 {
            for b in 1..a {
                let checks = if b == 1 && [2, 3, 5, 10].contains(&a) {
                    "zsigmondy,identity,divisibility,order,omega,roundtrip"
                } else {
                    "zsigmondy,identity,divisibility,roundtrip"
                };
                let cfg = int::IntConfig::validate(int::IntArgs {
                    a,
                    b,
                    n_min: 3,
                    n_max: 25,
                    checks: split(checks),
                })?;
                merge(&mut rec, &format!("int[{a},{b}]"), int::run(&cfg, budget)?);
            }
        }
        let cfg = int::IntConfig::validate(int::IntArgs {
            a: 2,
            b: 1,
            n_min: 2,
            n_max: 60,
            checks: split("schinzel,eq_lower"),
        })?;
        merge(&mut rec, "int[2,1]", int::run(&cfg, budget)?);
    }
    if want(Suite::Ff) {
        for (q, a) in [(2u64, "t"), (3, "t"), (4, "t+g")] {
            let cfg = ff::FfConfig::validate(ff::FfArgs {
                q,
                modulus: None,
                a: a.to_string(),
                ell_max: 31,
                alpha: 0.5,
                poly: None,
                checks: split("mason,vbound,degdiv,order_relation,g_pth,frobenius,roundtrip,density,count,oracle"),
                density_x: 10_000,
                theta: 0.5,
                floor: 0.5,
                k_max: if q == 2 { 8 } else { 5 },
                oracle_deg: if q == 2 { 8 } else { 5 },
            })?;
            merge(&mut rec, &format!("ff[q={q}]"), ff::run(&cfg, budget)?);
        }
    }
    if want(Suite::Ec) {
        let cfg = ec::EcConfig::validate(ec::EcArgs {
            curve: "0,-11".into(),
            point: "3,4".into(),
            n_max: 40,
            checks: split("all"),
            factor_max: 0,
            prime_max: 1000,
            abc_rho: 1 << 10,
            cm_m: Some(12),
            cm_x: 1000,
            claims: None,
            blind: false,
        })?;
        merge(&mut rec, "ec[0,-11]", ec::run(&cfg, budget)?);
        let cfg = eds::EdsConfig::validate(eds::EdsArgs {
            curve: "0,-11".into(),
            point: "3,4".into(),
            n_max: 40,
            checks: split("all"),
        })?;
        merge(&mut rec, "eds[0,-11]", eds::run(&cfg)?);
    }
    Ok(rec)
}

fn split(s: &str) -> Vec<String> {
    s.split(',').map(str::to_string).collect()
}

fn merge(rec: &mut ReportRecord, label: &str, sub: ReportRecord) {
    let count = |s: Status| sub.checks.iter().filter(|c| c.status == s).count().to_string();
    rec.rows.push(vec![
        label.to_string(),
        sub.checks.len().to_string(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Skipped),
    ]);
    for mut c in sub.checks {
        c.check = format!("{label}/{}", c.check);
        rec.checks.push(c);
    }
}

/// Smallest-prime-factor table.
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

fn arith_suite(cfg: &ReportConfig, budget: &FactorBudget) -> ReportRecord {
    let mut rec = ReportRecord::new("arith", &[], 0);
    let spf = spf_sieve(cfg.sieve_max as usize);

    // factor against the sieve, and the starved greatest prime as a lower bound
    let starved = FactorBudget::new(2, 1, budget.rng_seed).expect("trial bound 2 is valid");
    let (mut oracle_bad, mut starved_bad) = (Vec::new(), Vec::new());
    for n in 2..=cfg.sieve_max as usize {
        let truth = sieve_factor(&spf, n);
        let got = factor(&BigInt::from(n), budget).map(|f| {
            f.factors().iter().map(|(p, e)| (p.to_u64().unwrap_or(0), *e)).collect::<Vec<_>>()
        });
        if got.as_ref().ok() != Some(&truth) {
            oracle_bad.push(n);
        }
        let top = truth.last().expect("n >= 2").0;
        match factor(&BigInt::from(n), &starved).and_then(|f| f.greatest_prime_factor()) {
            Ok((p, exact)) if (exact && p == BigUint::from(top)) || (!exact && p <= BigUint::from(top)) => {}
            _ => starved_bad.push(n),
        }
    }
    rec.pass_or_fail("oracle", Some(cfg.sieve_max), oracle_bad.is_empty(), first_bad("factor differs from the sieve at n =", &oracle_bad));
    rec.pass_or_fail("starved_gpf", Some(cfg.sieve_max), starved_bad.is_empty(), first_bad("greatest prime bound wrong at n =", &starved_bad));

    // round trip and power split on random values below 10^30
    let mut rng = StdRng::seed_from_u64(budget.rng_seed);
    let light = FactorBudget::new(10_000, 1 << 14, budget.rng_seed).expect("trial bound is valid");
    let mut round_bad = Vec::new();
    let mut split_bad = Vec::new();
    let limit = Pow::pow(BigUint::from(10u32), 30u32);
    for _ in 0..cfg.cases {
        let hi: u128 = rng.gen();
        let mut n = BigInt::from(BigUint::from(hi) % &limit);
        if n.is_zero() {
            n = BigInt::one();
        }
        if rng.gen::<bool>() {
            n = -n;
        }
        let Ok(f) = factor(&n, &light) else {
            round_bad.push(n.to_string());
            continue;
        };
        let mut acc = BigInt::from(f.cofactor().clone());
        for (p, e) in f.factors() {
            acc *= BigInt::from(Pow::pow(p, *e));
        }
        if f.sign() == Sign::Negative {
            acc = -acc;
        }
        if acc != n || f.to_string().parse().ok().as_ref() != Some(&f) {
            round_bad.push(n.to_string());
        }
        if let Ok(s) = f.power_split() {
            let u_squarefree = f.factors().iter().all(|(p, _)| !(&s.u % (p * p)).is_zero());
            let v_full = f
                .factors()
                .iter()
                .filter(|(p, _)| (&s.v % p).is_zero())
                .all(|(p, _)| (&s.v % (p * p)).is_zero());
            if &s.u * &s.v != *n.magnitude() || !s.u.gcd(&s.v).is_one() || !u_squarefree || !v_full {
                split_bad.push(n.to_string());
            }
        }
    }
    rec.pass_or_fail("roundtrip", Some(cfg.cases as u64), round_bad.is_empty(), round_bad.first().cloned().unwrap_or_default());
    rec.pass_or_fail("power_split", Some(cfg.cases as u64), split_bad.is_empty(), split_bad.first().cloned().unwrap_or_default());

    // mult_order divides lambda, is an order, and is minimal
    let mut order_bad = Vec::new();
    for _ in 0..cfg.cases {
        let m: u64 = rng.gen_range(2..2_000_000);
        let a = (rng.gen_range(1..m)..).find(|x| x.gcd(&m) == 1).expect("some unit exists");
        let lambda = carmichael_lambda(m);
        let Ok(exponent) = factor(&BigInt::from(lambda), budget) else {
            order_bad.push((a, m));
            continue;
        };
        let mb = BigUint::from(m);
        let ab = BigUint::from(a);
        let ok = match mult_order(&BigInt::from(a), &mb, &exponent).map(|o| o.to_u64()) {
            Ok(Some(ord)) => {
                lambda.is_multiple_of(ord)
                    && ab.modpow(&BigUint::from(ord), &mb).is_one()
                    && factor_u64(ord).iter().all(|(l, _)| !ab.modpow(&BigUint::from(ord / l), &mb).is_one())
            }
            _ => false,
        };
        if !ok {
            order_bad.push((a, m));
        }
    }
    let detail = order_bad.first().map(|(a, m)| format!("a = {a}, m = {m}")).unwrap_or_default();
    rec.pass_or_fail("mult_order", Some(cfg.cases as u64), order_bad.is_empty(), detail);
    rec
}

fn first_bad(what: &str, items: &[usize]) -> String {
    match items.first() {
        Some(n) => format!("{what} {n} ({} in total)", items.len()),
        None => String::new(),
    }
}
