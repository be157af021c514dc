//! `divseq eds`: division-polynomial values `w_n = psi_n(Q)`.
//!
//! CSV columns: `n, w_n, ward`. `ward` is `seed` for `n <= 4` and otherwise
//! `yes` or `no` according to every Ward instance `(k, m)` with `k + m = n`.

use clap::Args;
use divseq_core::ecdiv::{
    denom_sequence, disc_w, division_polynomial_eds, dn_divides_wn_check, is_nonsingular, ward_recurrence_check, CurveQ,
    DenomSequence, EdsSequence, RationalPoint,
};
use num_traits::Zero;

use crate::cmd::ec::{ec_err, parse_curve_point};
use crate::config::{parse_checks, CliError};
use crate::record::{ReportRecord, Status};

pub const CHECKS: [&str; 4] = ["ward", "nonsingular", "dn_wn", "realization"];

#[derive(Debug, Args)]
pub struct EdsArgs {
    /// Curve coefficients `A,B` of y^2 = x^3 + Ax + B.
    #[arg(long, allow_hyphen_values = true)]
    pub curve: String,
    /// Integral base point `x,y`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long)]
    pub n_max: u32,
    /// Comma-separated: ward, nonsingular, dn_wn, realization, or all.
    #[arg(long, alias = "check", value_delimiter = ',')]
    pub checks: Vec<String>,
}

#[derive(Debug)]
pub struct EdsConfig {
    pub curve: CurveQ,
    pub point: RationalPoint,
    pub n_max: u32,
    pub checks: Vec<&'static str>,
}

impl EdsConfig {
    pub fn validate(args: EdsArgs) -> Result<EdsConfig, CliError> {
        if args.n_max == 0 {
            return Err(CliError::Config("--n-max must be >= 1".into()));
        }
        let (curve, point) = parse_curve_point(&args.curve, &args.point)?;
        if !point.is_integral() {
            return Err(CliError::Config(format!("base point {point} is not integral")));
        }
        let checks = parse_checks(&args.checks, &CHECKS)?;
        Ok(EdsConfig { curve, point, n_max: args.n_max, checks })
    }
}

/// Ward instances `(k, m)`, `k > m >= 1`, whose top index `k + m` is `n`.
fn ward_instances_at(w: &EdsSequence, n: u32) -> Result<Vec<(u32, u32)>, CliError> {
    let mut failed = Vec::new();
    for m in 1..n {
        let k = n - m;
        if k <= m {
            break;
        }
        if !ward_recurrence_check(w, k, m).map_err(ec_err)? {
            failed.push((k, m));
        }
    }
    Ok(failed)
}

pub fn run(cfg: &EdsConfig) -> Result<ReportRecord, CliError> {
    let w = division_polynomial_eds(&cfg.curve, &cfg.point, cfg.n_max).map_err(ec_err)?;
    let mut rec = ReportRecord::new("eds", &["n", "w_n", "ward"], 3);
    rec.param("curve", format!("{},{}", cfg.curve.a(), cfg.curve.b()));
    rec.param("point", &cfg.point);
    rec.param("n_max", cfg.n_max);
    let mut ward_failures = Vec::new();
    for n in 1..=w.len() {
        let status = if n <= 4 {
            "seed"
        } else {
            let failed = ward_instances_at(&w, n)?;
            let ok = failed.is_empty();
            ward_failures.push((n, failed));
            if ok {
                "yes"
            } else {
                "no"
            }
        };
        rec.rows.push(vec![n.to_string(), w.w(n).to_string(), status.to_string()]);
    }
    let seq = if cfg.checks.iter().any(|c| *c == "dn_wn" || *c == "realization") {
        Some(denom_sequence(&cfg.curve, &cfg.point, cfg.n_max).map_err(ec_err)?)
    } else {
        None
    };
    eds_checks(&mut rec, &w, seq.as_ref(), &cfg.checks, Some(ward_failures))?;
    Ok(rec)
}

/// Per index `n`, the Ward instances `(k, m)` that failed.
pub type WardFailures = Vec<(u32, Vec<(u32, u32)>)>;

/// The EDS checks shared with `divseq ec`. `ward` may carry the per-index
/// failures already computed for the rows.
pub fn eds_checks(
    rec: &mut ReportRecord,
    w: &EdsSequence,
    seq: Option<&DenomSequence>,
    checks: &[&str],
    ward: Option<WardFailures>,
) -> Result<(), CliError> {
    let wants = |c: &str| checks.contains(&c);
    if wants("ward") {
        let per_n = match ward {
            Some(v) => v,
            None => (5..=w.len()).map(|n| ward_instances_at(w, n).map(|f| (n, f))).collect::<Result<_, _>>()?,
        };
        for (n, failed) in per_n {
            let detail = if failed.is_empty() {
                format!("{} instances", (n - 1) / 2)
            } else {
                format!("w_(k+m) w_(k-m) != w_(k+1) w_(k-1) w_m^2 - w_(m+1) w_(m-1) w_k^2 at (k, m) = {failed:?}")
            };
            rec.pass_or_fail("ward", Some(n as u64), failed.is_empty(), detail);
        }
    }
    if wants("nonsingular") {
        let ok = is_nonsingular(w);
        let detail = if w.len() >= 4 {
            format!("Disc(w) = {}", disc_w(w.w(2), w.w(3), w.w(4)))
        } else {
            "needs w_1..w_4".to_string()
        };
        rec.pass_or_fail("nonsingular", None, ok, detail);
    }
    if let Some(seq) = seq {
        let top = w.len().min(seq.len());
        if wants("dn_wn") {
            let ok = dn_divides_wn_check(seq, w);
            let bad: Vec<u32> = (1..=top).filter(|&n| !(w.w(n).magnitude() % seq.d(n)).is_zero()).collect();
            let detail = if bad.is_empty() { format!("n <= {top}") } else { format!("d_n does not divide w_n for n = {bad:?}") };
            rec.pass_or_fail("dn_wn", None, ok && bad.is_empty(), detail);
        }
        if wants("realization") {
            for n in [2u32, 3].into_iter().filter(|&n| n <= top) {
                let (wn, dn) = (w.w(n).magnitude(), seq.d(n));
                rec.pass_or_fail("realization", Some(n as u64), wn == dn, format!("|w_{n}| = {wn}, d_{n} = {dn}"));
            }
        }
    } else {
        for c in ["dn_wn", "realization"].into_iter().filter(|c| wants(c)) {
            rec.check(c, None, Status::Skipped, "needs the denominator sequence");
        }
    }
    Ok(())
}
