//! `divseq ff`: the sequence `a(t)^ell - 1` over `F_q[t]`.
//!
//! One row per prime `ell <= --ell-max` other than the characteristic.
//! CSV columns: `ell, ord_ell(q), in_S_alpha, G(a^ell - 1), deg_checks,
//! G/log_q(ell), mason_margin, v_degree_sum`.

use std::sync::Arc;

use clap::Args;
use divseq_core::arith::{factor_u64, primes_up_to, FactorBudget};
use divseq_core::ffpoly::{
    factor_poly, field_new, greatest_factor_degree, irreducible_count, is_perfect_pth_power, order_density,
    order_relation_check, pth_root, s_alpha_member, theorem2_machinery_check, FfError, FieldSpec, FqElement,
    FqPolynomial, MasonOutcome,
};
use num_traits::ToPrimitive;

use crate::config::{config_err, parse_checks, CliError};
use crate::record::{ReportRecord, Status};

pub const CHECKS: [&str; 10] = [
    "mason",
    "vbound",
    "degdiv",
    "order_relation",
    "g_pth",
    "frobenius",
    "roundtrip",
    "density",
    "count",
    "oracle",
];

/// Largest number of polynomials the enumeration checks may visit.
const ENUMERATION_CAP: u64 = 1 << 20;

#[derive(Debug, Args)]
pub struct FfArgs {
    /// Field order, a prime power.
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    /// Defining polynomial of F_q over F_p, coefficients low to high
    /// (e.g. `1,1,1`); defaults to the least irreducible.
    #[arg(long)]
    pub modulus: Option<String>,
    /// The polynomial a(t), e.g. `t^3+t+1`; extension elements use `g`.
    #[arg(long, default_value = "t")]
    pub a: String,
    #[arg(long, default_value_t = 199)]
    pub ell_max: u64,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// An extra polynomial to factor and round-trip.
    #[arg(long)]
    pub poly: Option<String>,
    /// Comma-separated: mason, vbound, degdiv, order_relation, g_pth,
    /// frobenius, roundtrip, density, count, oracle, or all.
    #[arg(long, alias = "check", value_delimiter = ',')]
    pub checks: Vec<String>,
    /// Prime bound for the density check.
    #[arg(long, default_value_t = 100_000)]
    pub density_x: u64,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    /// Smallest passing density fraction.
    #[arg(long, default_value_t = 0.8)]
    pub floor: f64,
    /// Degree bound for the irreducible-count check.
    #[arg(long, default_value_t = 8)]
    pub k_max: u32,
    /// Degree bound for the exhaustive factorization oracle.
    #[arg(long, default_value_t = 8)]
    pub oracle_deg: u32,
}

#[derive(Debug)]
pub struct FfConfig {
    pub field: Arc<FieldSpec>,
    pub a: FqPolynomial,
    pub poly: Option<FqPolynomial>,
    pub ell_max: u64,
    pub alpha: f64,
    pub checks: Vec<&'static str>,
    pub density_x: u64,
    pub theta: f64,
    pub floor: f64,
    pub k_max: u32,
    pub oracle_deg: u32,
}

fn enumeration_size(q: u64, d: u32) -> Option<u64> {
    q.checked_pow(d).map(|n| n.saturating_mul(q)).filter(|&n| n <= ENUMERATION_CAP)
}

impl FfConfig {
    pub fn validate(args: FfArgs) -> Result<FfConfig, CliError> {
        let parts = factor_u64(args.q);
        let &[(p, r)] = parts.as_slice() else {
            return Err(CliError::Config(format!("--q {} is not a prime power", args.q)));
        };
        let modulus = match &args.modulus {
            None => None,
            Some(text) => Some(
                text.split(',')
                    .map(|c| c.trim().parse::<u32>())
                    .collect::<Result<Vec<u32>, _>>()
                    .map_err(|_| CliError::Config(format!("bad --modulus `{text}`")))?,
            ),
        };
        let field = field_new(p, r, modulus.as_deref()).map_err(config_err)?;
        let a = FqPolynomial::parse(&field, &args.a).map_err(config_err)?;
        if args.ell_max >= 2 {
            if a.is_constant() {
                return Err(CliError::Config("--a must be nonconstant".into()));
            }
            if is_perfect_pth_power(&a) {
                return Err(CliError::Config(format!("--a `{a}` is a perfect p-th power")));
            }
        }
        let poly = match &args.poly {
            Some(text) => Some(FqPolynomial::parse(&field, text).map_err(config_err)?),
            None => None,
        };
        if poly.as_ref().is_some_and(|f| f.is_zero()) {
            return Err(CliError::Config("--poly must be nonzero".into()));
        }
        for (flag, x) in [("--alpha", args.alpha), ("--theta", args.theta), ("--floor", args.floor)] {
            if !x.is_finite() || x < 0.0 {
                return Err(CliError::Config(format!("{flag} must be a finite nonnegative number")));
            }
        }
        let checks = parse_checks(&args.checks, &CHECKS)?;
        let q = field.order();
        if checks.contains(&"count") && (args.k_max == 0 || enumeration_size(q, args.k_max).is_none()) {
            return Err(CliError::Config(format!("--k-max {} is outside 1..=enumeration limit for q = {q}", args.k_max)));
        }
        if checks.contains(&"oracle") && (args.oracle_deg == 0 || enumeration_size(q, args.oracle_deg).is_none()) {
            return Err(CliError::Config(format!("--oracle-deg {} is outside 1..=enumeration limit for q = {q}", args.oracle_deg)));
        }
        Ok(FfConfig {
            field,
            a,
            poly,
            ell_max: args.ell_max,
            alpha: args.alpha,
            checks,
            density_x: args.density_x,
            theta: args.theta,
            floor: args.floor,
            k_max: args.k_max,
            oracle_deg: args.oracle_deg,
        })
    }
}

fn engine_err(e: FfError) -> CliError {
    CliError::Check(e.to_string())
}

pub fn run(cfg: &FfConfig, budget: &FactorBudget) -> Result<ReportRecord, CliError> {
    let field = &cfg.field;
    let q = field.order();
    let p = field.characteristic() as u64;
    let mut rec = ReportRecord::new(
        "ff",
        &["ell", "ord_ell(q)", "in_S_alpha", "G(a^ell - 1)", "deg_checks", "G/log_q(ell)", "mason_margin", "v_degree_sum"],
        5,
    );
    rec.param("q", q);
    rec.param("modulus", format!("{:?}", field.modulus()));
    rec.param("a", &cfg.a);
    rec.param("ell_max", cfg.ell_max);
    rec.param("alpha", cfg.alpha);
    let seed = budget.rng_seed;
    let one = FqPolynomial::one(field);
    let wants = |c: &str| cfg.checks.contains(&c);

    for ell in primes_up_to(cfg.ell_max).into_iter().filter(|&l| l != p) {
        let nn = Some(ell);
        let report = theorem2_machinery_check(&cfg.a, ell).map_err(engine_err)?;
        let in_s = s_alpha_member(ell, q, cfg.alpha).map_err(engine_err)?;
        let margin = match &report.mason {
            MasonOutcome::Holds { margin } | MasonOutcome::Violated { margin } => margin.to_string(),
            MasonOutcome::Inapplicable(_) => String::new(),
        };
        rec.rows.push(vec![
            ell.to_string(),
            report.ord_ell_q.to_string(),
            in_s.to_string(),
            report.g.to_string(),
            if report.passed() { "pass" } else { "fail" }.to_string(),
            format!("{:.6}", report.g_over_log),
            margin,
            report.v_degree_sum.to_string(),
        ]);

        if wants("mason") {
            match &report.mason {
                MasonOutcome::Holds { margin } => rec.check("mason", nn, Status::Pass, format!("margin {margin}")),
                MasonOutcome::Violated { margin } => rec.check(
                    "mason",
                    nn,
                    Status::Fail,
                    format!("max deg exceeds deg rad - 1 by {} for (a^{ell} - 1) + 1 = a^{ell}", -margin),
                ),
                MasonOutcome::Inapplicable(why) => rec.check("mason", nn, Status::Skipped, why.clone()),
            }
        }
        if wants("vbound") {
            let ok = report.v_bound_holds();
            rec.pass_or_fail(
                "vbound",
                nn,
                ok,
                format!("deg V_1 + deg V_ell = {} vs 2 deg a - 2 = {}", report.v_degree_sum, report.v_degree_bound),
            );
        }
        if wants("degdiv") {
            let ok = report.degrees_divisible;
            let detail = if ok {
                String::new()
            } else {
                format!("a factor of C_{ell} has degree not divisible by ord = {}", report.ord_ell_q)
            };
            rec.pass_or_fail("degdiv", nn, ok, detail);
        }
        if wants("order_relation") {
            let ok = order_relation_check(&cfg.a, ell).map_err(engine_err)?;
            rec.pass_or_fail("order_relation", nn, ok, if ok { "" } else { "o_pi(a) = ell and pi | C_ell disagree" });
        }
        let x = cfg.a.pow(ell).sub(&one);
        if wants("g_pth") {
            let g = greatest_factor_degree(&x).map_err(engine_err)?;
            let lifted = greatest_factor_degree(&cfg.a.pow(ell * p).sub(&one)).map_err(engine_err)?;
            rec.pass_or_fail("g_pth", nn, g == lifted, format!("G(a^{ell} - 1) = {g}, G(a^{} - 1) = {lifted}", ell * p));
        }
        if wants("frobenius") {
            frobenius_check(&mut rec, &x, p, nn);
        }
        if wants("roundtrip") {
            roundtrip_check(&mut rec, &x, seed, nn)?;
        }
    }

    if let Some(f) = &cfg.poly {
        let fact = factor_poly(f, seed).map_err(engine_err)?;
        rec.check("factor", None, Status::Info, format!("{f} = {fact}"));
        if wants("roundtrip") {
            roundtrip_check(&mut rec, f, seed, None)?;
        }
        if wants("frobenius") {
            frobenius_check(&mut rec, f, p, None);
        }
    }
    if wants("density") {
        density_check(&mut rec, cfg, q);
    }
    if wants("count") {
        count_check(&mut rec, field, cfg.k_max);
    }
    if wants("oracle") {
        oracle_check(&mut rec, field, cfg.oracle_deg, seed)?;
    }
    Ok(rec)
}

fn frobenius_check(rec: &mut ReportRecord, x: &FqPolynomial, p: u64, n: Option<u64>) {
    let xp = x.pow(p);
    let ok = x.frobenius() == xp && (x.is_zero() || pth_root(&xp).as_ref() == Some(x));
    rec.pass_or_fail("frobenius", n, ok, if ok { String::new() } else { format!("Frobenius disagrees with x^p for x = {x}") });
}

/// Unit times factors reproduces the input, every factor is monic and
/// irreducible, and degrees times multiplicities sum to the degree.
fn roundtrip_check(rec: &mut ReportRecord, x: &FqPolynomial, seed: u64, n: Option<u64>) -> Result<(), CliError> {
    let f = factor_poly(x, seed).map_err(engine_err)?;
    let total: usize = f.factors.iter().map(|(g, e)| g.degree().unwrap_or(0) * *e as usize).sum();
    let mut problems = Vec::new();
    if f.product() != *x {
        problems.push(format!("product {} != {x}", f.product()));
    }
    if f.factors.iter().any(|(g, _)| !g.is_monic() || !g.is_irreducible()) {
        problems.push("a factor is not monic irreducible".to_string());
    }
    if Some(total) != x.degree() {
        problems.push(format!("degree sum {total} != deg {}", x.degree().unwrap_or(0)));
    }
    rec.pass_or_fail("roundtrip", n, problems.is_empty(), problems.join("; "));
    Ok(())
}

/// The density fraction at `x`, plus trend points at each power of ten below.
fn density_check(rec: &mut ReportRecord, cfg: &FfConfig, q: u64) {
    let mut x = 10;
    while x < cfg.density_x {
        let d = order_density(q, x, cfg.theta);
        rec.check("density_trend", Some(x), Status::Info, format!("{}/{} = {:.6}", d.qualifying, d.total, d.fraction()));
        x *= 10;
    }
    let d = order_density(q, cfg.density_x, cfg.theta);
    let frac = d.fraction();
    rec.pass_or_fail(
        "density",
        Some(cfg.density_x),
        d.total > 0 && frac >= cfg.floor,
        format!(
            "{}/{} primes have ord_ell({q}) >= ell^{}: {frac:.6} vs floor {}",
            d.qualifying, d.total, cfg.theta, cfg.floor
        ),
    );
}

/// All monic polynomials of degree `d`, in counting order.
fn monic_of_degree(field: &Arc<FieldSpec>, d: usize) -> Vec<FqPolynomial> {
    let q = field.order();
    (0..q.pow(d as u32))
        .map(|mut code| {
            let mut coeffs = Vec::with_capacity(d + 1);
            for _ in 0..d {
                coeffs.push(FqElement((code % q) as u32));
                code /= q;
            }
            coeffs.push(FqElement(1));
            FqPolynomial::new(field, &coeffs).expect("coefficients lie in the field")
        })
        .collect()
}

fn divides(g: &FqPolynomial, f: &FqPolynomial) -> bool {
    f.div_rem(g).map(|(_, r)| r.is_zero()).unwrap_or(false)
}

/// Monic irreducibles of degree `<= k` by sieving: a monic polynomial is
/// irreducible when no smaller irreducible of at most half its degree
/// divides it.
fn sieve_irreducibles(field: &Arc<FieldSpec>, k: usize) -> Vec<FqPolynomial> {
    let mut out: Vec<FqPolynomial> = Vec::new();
    for d in 1..=k {
        for cand in monic_of_degree(field, d) {
            if !has_small_factor(&cand, &out) {
                out.push(cand);
            }
        }
    }
    out
}

fn has_small_factor(f: &FqPolynomial, irreducibles: &[FqPolynomial]) -> bool {
    let d = f.degree().unwrap_or(0);
    irreducibles.iter().take_while(|g| 2 * g.degree().unwrap_or(0) <= d).any(|g| divides(g, f))
}

fn canonical_key(g: &FqPolynomial) -> (usize, Vec<u32>) {
    (g.degree().unwrap_or(0), g.coefficients().iter().rev().map(|c| c.0).collect())
}

fn trial_factor(f: &FqPolynomial, irreducibles: &[FqPolynomial]) -> Vec<(FqPolynomial, u32)> {
    let mut rest = f.clone();
    let mut out = Vec::new();
    for g in irreducibles {
        if 2 * g.degree().unwrap_or(0) > rest.degree().unwrap_or(0) {
            break;
        }
        let mut e = 0;
        while divides(g, &rest) {
            rest = rest.div_rem(g).expect("g is nonzero").0;
            e += 1;
        }
        if e > 0 {
            out.push((g.clone(), e));
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        match out.iter_mut().find(|(g, _)| *g == rest) {
            Some((_, e)) => *e += 1,
            None => out.push((rest, 1)),
        }
    }
    out.sort_by_key(|(g, _)| canonical_key(g));
    out
}

/// `irreducible_count(q, k)` against a direct enumeration.
fn count_check(rec: &mut ReportRecord, field: &Arc<FieldSpec>, k_max: u32) {
    let q = field.order();
    let small = sieve_irreducibles(field, k_max as usize / 2);
    for k in 1..=k_max {
        let counted = monic_of_degree(field, k as usize).iter().filter(|f| !has_small_factor(f, &small)).count();
        let formula = irreducible_count(q, k);
        let ok = formula.to_usize() == Some(counted);
        rec.pass_or_fail("count", Some(k as u64), ok, format!("formula {formula}, enumeration {counted}"));
    }
}

/// `factor_poly` against trial division for every polynomial of degree
/// `1..=deg`, every leading coefficient included.
fn oracle_check(rec: &mut ReportRecord, field: &Arc<FieldSpec>, deg: u32, seed: u64) -> Result<(), CliError> {
    let q = field.order();
    let small = sieve_irreducibles(field, deg as usize / 2);
    for d in 1..=deg as usize {
        let mut checked = 0u64;
        let mut mismatch: Option<String> = None;
        'outer: for monic in monic_of_degree(field, d) {
            let expected = trial_factor(&monic, &small);
            for unit in (1..q).map(|c| FqElement(c as u32)) {
                let f = monic.scale(unit);
                let got = factor_poly(&f, seed).map_err(engine_err)?;
                checked += 1;
                if got.unit != unit || got.factors != expected {
                    mismatch = Some(format!("factor_poly({f}) = {got}"));
                    break 'outer;
                }
            }
        }
        match mismatch {
            None => rec.check("oracle", Some(d as u64), Status::Pass, format!("{checked} polynomials")),
            Some(why) => rec.check("oracle", Some(d as u64), Status::Fail, why),
        }
    }
    Ok(())
}
