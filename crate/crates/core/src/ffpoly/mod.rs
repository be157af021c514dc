//! Polynomials over finite fields: factorization, the degree statistic
//! `G(f)` (largest degree of an irreducible factor), Mason's inequality and
//! the order computations behind the growth of `G(a(t)^n - 1)`.

mod field;
mod poly;
mod raw;
mod theory;

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::arith::ArithError;
use crate::cycloseq::CycloError;

pub use field::{field_new, FieldSpec, FqElement, MAX_EXTENSION_ORDER};
pub use poly::FqPolynomial;
pub use theory::{
    c_ell, count_degree_multiple, irreducible_count, irreducibles_of_degree, mason_check,
    order_density, order_mod_pi, order_relation_check, power_at_least, remark_set_member,
    s_alpha_member, theorem2_machinery_check, DensityReport, MasonOutcome, MachineryReport,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_p")]
    ReducibleModulus,
    #[error("invalid modulus: {0}")]
    InvalidModulus(&'static str),
    #[error("extension fields are limited to q <= 2^20 and prime fields to p < 2^31")]
    FieldTooLarge,
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("polynomial must be nonconstant")]
    ConstantPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("polynomials are not coprime")]
    NotCoprime,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("polynomial is a perfect p-th power")]
    PerfectPthPower,
    #[error("c != a + b")]
    SumMismatch,
    #[error("ell must be a prime different from the characteristic")]
    InvalidEll,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

impl From<CycloError> for FfError {
    fn from(e: CycloError) -> Self {
        match e {
            CycloError::Arith(a) => FfError::Arith(a),
            // q^k - 1 with q >= 2, k >= 1 is always a valid sequence term
            other => unreachable!("invalid cyclotomic request: {other}"),
        }
    }
}

/// `unit * prod f_i^e_i` with monic irreducible `f_i`, sorted by degree and
/// then by coefficients from the top down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFactorization {
    pub unit: FqElement,
    pub factors: Vec<(FqPolynomial, u32)>,
    field: Arc<FieldSpec>,
}

impl PolyFactorization {
    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn product(&self) -> FqPolynomial {
        self.factors
            .iter()
            .fold(FqPolynomial::one(&self.field).scale(self.unit), |acc, (f, e)| acc.mul(&f.pow(*e as u64)))
    }

    /// Largest factor degree, `None` for constants.
    pub fn greatest_degree(&self) -> Option<usize> {
        self.factors.iter().filter_map(|(f, _)| f.degree()).max()
    }

    pub fn radical_degree(&self) -> usize {
        self.factors.iter().filter_map(|(f, _)| f.degree()).sum()
    }

    /// Monic power-free part `U` and power-full part `V`; the unit is left
    /// out of both.
    pub fn power_split(&self) -> (FqPolynomial, FqPolynomial) {
        let mut u = FqPolynomial::one(&self.field);
        let mut v = FqPolynomial::one(&self.field);
        for (f, e) in &self.factors {
            if *e == 1 {
                u = u.mul(f);
            } else {
                v = v.mul(&f.pow(*e as u64));
            }
        }
        (u, v)
    }
}

impl fmt::Display for PolyFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.unit.0 != 1 || self.factors.is_empty() {
            let unit = FqPolynomial::element_to_string(&self.field, self.unit);
            parts.push(if unit.contains('+') { alloc::format!("({unit})") } else { unit });
        }
        for (g, e) in &self.factors {
            let text = alloc::format!("{g}");
            let text = if text.contains(['+', '*', '^']) { alloc::format!("({text})") } else { text };
            parts.push(if *e == 1 { text } else { alloc::format!("{text}^{e}") });
        }
        f.write_str(&parts.join("*"))
    }
}

/// Complete factorization over `F_q` (squarefree, distinct-degree, then
/// equal-degree splitting). The seed only drives the random splitting; the
/// canonical result does not depend on it.
pub fn factor_poly(f: &FqPolynomial, rng_seed: u64) -> Result<PolyFactorization, FfError> {
    if f.is_zero() {
        return Err(FfError::ZeroPolynomial);
    }
    let field = f.field().clone();
    let (unit, monic) = f.monic();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut found: Vec<(raw::Raw, u32)> = Vec::new();
    for (g, e) in raw::squarefree(&field, monic.raw()) {
        for (h, d) in raw::distinct_degree(&field, &g) {
            for irr in raw::equal_degree(&field, &h, d, &mut rng) {
                found.push((irr, e));
            }
        }
    }
    found.sort_by(|a, b| raw::canonical_cmp(&a.0, &b.0));
    let mut factors: Vec<(FqPolynomial, u32)> = Vec::with_capacity(found.len());
    for (g, e) in found {
        match factors.last_mut() {
            Some((last, le)) if last.raw() == g.as_slice() => *le += e,
            _ => factors.push((FqPolynomial::from_raw(&field, g), e)),
        }
    }
    Ok(PolyFactorization { unit, factors, field })
}

/// `G(f)`: the largest degree of an irreducible factor.
pub fn greatest_factor_degree(f: &FqPolynomial) -> Result<usize, FfError> {
    if f.degree().is_none_or(|d| d == 0) {
        return Err(FfError::ConstantPolynomial);
    }
    Ok(factor_poly(f, 0)?.greatest_degree().expect("nonconstant polynomial has a factor"))
}

/// The `c` with `c^p = a` (`p` the characteristic), if there is one.
pub fn pth_root(a: &FqPolynomial) -> Option<FqPolynomial> {
    raw::pth_root(a.field(), a.raw()).map(|c| FqPolynomial::from_raw(a.field(), c))
}

pub fn is_perfect_pth_power(a: &FqPolynomial) -> bool {
    pth_root(a).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn poly(p: u64, r: u32, s: &str) -> FqPolynomial {
        FqPolynomial::parse(&field_new(p, r, None).unwrap(), s).unwrap()
    }

    #[test]
    fn factorization_examples() {
        let f = factor_poly(&poly(2, 1, "t^3-1"), 0).unwrap();
        assert_eq!(f.to_string(), "(t+1)*(t^2+t+1)");
        assert_eq!(factor_poly(&poly(2, 1, "t"), 0).unwrap().to_string(), "t");
        assert_eq!(
            factor_poly(&poly(2, 1, "t^4+t^2+1"), 0).unwrap().to_string(),
            "(t^2+t+1)^2"
        );
        assert_eq!(factor_poly(&poly(3, 1, "2t^2+2"), 0).unwrap().to_string(), "2*(t^2+1)");
        assert_eq!(factor_poly(&poly(2, 1, "t^6"), 0).unwrap().to_string(), "t^6");
        assert_eq!(factor_poly(&poly(2, 1, "0"), 0), Err(FfError::ZeroPolynomial));
    }

    #[test]
    fn seed_does_not_change_result() {
        let f = poly(3, 1, "(t^7 - 1)*(t^2+1)^3*t^5");
        let reference = factor_poly(&f, 0).unwrap();
        assert_eq!(reference.product(), f);
        for seed in 1..20 {
            assert_eq!(factor_poly(&f, seed).unwrap(), reference);
        }
        let g = poly(2, 2, "t^15 - 1");
        let fg = factor_poly(&g, 3).unwrap();
        // cyclotomic cosets of 4 modulo 15
        assert_eq!(fg.factors.len(), 9);
        assert_eq!(fg.product(), g);
    }

    #[test]
    fn greatest_degrees() {
        assert_eq!(greatest_factor_degree(&poly(2, 1, "t^3-1")), Ok(2));
        assert_eq!(greatest_factor_degree(&poly(2, 1, "t")), Ok(1));
        assert_eq!(greatest_factor_degree(&poly(2, 1, "(t^2+t+1)^2")), Ok(2));
        assert_eq!(greatest_factor_degree(&poly(2, 1, "1")), Err(FfError::ConstantPolynomial));
    }

    #[test]
    fn pth_powers() {
        assert!(is_perfect_pth_power(&poly(2, 1, "t^2")));
        assert!(!is_perfect_pth_power(&poly(2, 1, "t")));
        assert!(is_perfect_pth_power(&poly(3, 1, "(t+1)^3")));
        let a = poly(2, 2, "t");
        assert!(!is_perfect_pth_power(&a));
        let b = poly(2, 2, "(g*t^2 + t + g)^2");
        assert_eq!(pth_root(&b).unwrap(), poly(2, 2, "g*t^2 + t + g"));
    }
}
