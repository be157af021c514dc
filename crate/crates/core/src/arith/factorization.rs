use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::prime::is_prime;
use super::ArithError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// A (possibly partial) prime factorization of a nonzero integer.
///
/// `sign * cofactor * prod(p^e)` is always exactly the factored integer. The
/// factorization is complete precisely when the cofactor is 1; otherwise the
/// cofactor is a composite (or unproven) remainder the budget did not split.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factorization {
    sign: Sign,
    factors: Vec<(BigUint, u32)>,
    cofactor: BigUint,
}

/// `|m| = u * v` with `u` squarefree, `v` powerful and `gcd(u, v) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSplit {
    pub u: BigUint,
    pub v: BigUint,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization {
            sign: Sign::Positive,
            factors: Vec::new(),
            cofactor: BigUint::one(),
        }
    }

    /// Builds a factorization from raw parts, checking every invariant.
    pub fn from_parts(
        sign: Sign,
        factors: Vec<(BigUint, u32)>,
        cofactor: BigUint,
    ) -> Result<Self, ArithError> {
        if cofactor.is_zero() {
            return Err(ArithError::InvalidFactorization("cofactor must be at least 1"));
        }
        for w in factors.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(ArithError::InvalidFactorization("primes must be strictly increasing"));
            }
        }
        for (p, e) in &factors {
            if *e == 0 {
                return Err(ArithError::InvalidFactorization("exponents must be positive"));
            }
            if !is_prime(p) {
                return Err(ArithError::InvalidFactorization("listed factor is not prime"));
            }
        }
        if !cofactor.is_one() && is_prime(&cofactor) {
            return Err(ArithError::InvalidFactorization("cofactor is a certified prime"));
        }
        Ok(Factorization { sign, factors, cofactor })
    }

    /// Assembles a factorization from unordered prime powers. Callers must
    /// only pass primes.
    pub(crate) fn assemble(sign: Sign, primes: BTreeMap<BigUint, u32>, cofactor: BigUint) -> Self {
        Factorization {
            sign,
            factors: primes.into_iter().collect(),
            cofactor,
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn cofactor(&self) -> &BigUint {
        &self.cofactor
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty() && self.cofactor.is_one()
    }

    pub fn abs_value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(self.cofactor.clone(), |acc, (p, e)| acc * Pow::pow(p, *e))
    }

    pub fn value(&self) -> BigInt {
        let sign = match self.sign {
            Sign::Positive => BigSign::Plus,
            Sign::Negative => BigSign::Minus,
        };
        BigInt::from_biguint(sign, self.abs_value())
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    fn require_complete(&self) -> Result<(), ArithError> {
        if self.is_complete() {
            Ok(())
        } else {
            Err(ArithError::IncompleteFactorization)
        }
    }

    /// The greatest prime factor P(m), with a flag telling whether it is exact.
    /// For an incomplete factorization the value is a certified lower bound:
    /// the largest listed prime, or 2 when none is listed.
    pub fn greatest_prime_factor(&self) -> Result<(BigUint, bool), ArithError> {
        if self.is_unit() {
            return Err(ArithError::NoPrimeFactor);
        }
        let largest = self.factors.last().map(|(p, _)| p.clone());
        if self.is_complete() {
            Ok((largest.expect("non-unit complete factorization lists a prime"), true))
        } else {
            Ok((largest.unwrap_or_else(|| BigUint::from(2u32)), false))
        }
    }

    pub fn omega(&self) -> Result<usize, ArithError> {
        self.require_complete()?;
        Ok(self.factors.len())
    }

    pub fn tau(&self) -> Result<BigUint, ArithError> {
        self.require_complete()?;
        Ok(self
            .factors
            .iter()
            .fold(BigUint::one(), |acc, (_, e)| acc * (*e + 1)))
    }

    pub fn power_split(&self) -> Result<PowerSplit, ArithError> {
        self.require_complete()?;
        let mut u = BigUint::one();
        let mut v = BigUint::one();
        for (p, e) in &self.factors {
            if *e == 1 {
                u *= p;
            } else {
                v *= Pow::pow(p, *e);
            }
        }
        Ok(PowerSplit { u, v })
    }

    pub fn radical(&self) -> Result<BigUint, ArithError> {
        self.require_complete()?;
        Ok(self.factors.iter().fold(BigUint::one(), |acc, (p, _)| acc * p))
    }

    /// Factorization of the product of two factored integers. Cofactors are
    /// multiplied; shared cofactor material stays unresolved.
    pub fn mul(&self, other: &Factorization) -> Factorization {
        let mut map: BTreeMap<BigUint, u32> = self.factors.iter().cloned().collect();
        for (p, e) in &other.factors {
            *map.entry(p.clone()).or_insert(0) += e;
        }
        let mut cofactor = &self.cofactor * &other.cofactor;
        // A listed prime may still divide the other side's cofactor.
        for (p, e) in map.iter_mut() {
            while !cofactor.is_one() && (&cofactor % p).is_zero() {
                cofactor /= p;
                *e += 1;
            }
        }
        if !cofactor.is_one() && is_prime(&cofactor) {
            *map.entry(core::mem::replace(&mut cofactor, BigUint::one())).or_insert(0) += 1;
        }
        Factorization::assemble(self.sign.times(other.sign), map, cofactor)
    }

    /// Factorization of `self^k`.
    pub fn pow(&self, k: u32) -> Factorization {
        let sign = if k.is_multiple_of(2) { Sign::Positive } else { self.sign };
        Factorization {
            sign,
            factors: self.factors.iter().map(|(p, e)| (p.clone(), e * k)).collect(),
            cofactor: Pow::pow(&self.cofactor, k),
        }
    }

    /// Factorization of `self / d` when `d` is supported on the listed primes.
    pub fn divide_exact(&self, d: &Factorization) -> Option<Factorization> {
        if !d.is_complete() {
            return None;
        }
        let mut map: BTreeMap<BigUint, u32> = self.factors.iter().cloned().collect();
        for (p, e) in &d.factors {
            let slot = map.get_mut(p)?;
            if *slot < *e {
                return None;
            }
            *slot -= e;
        }
        map.retain(|_, e| *e > 0);
        Some(Factorization::assemble(self.sign.times(d.sign), map, self.cofactor.clone()))
    }
}

impl PowerSplit {
    pub fn check(&self) -> bool {
        self.u.gcd(&self.v).is_one()
    }
}

/// Canonical text: `[-]p1^e1 * p2 * ... [* C<cofactor>]`, primes ascending,
/// exponent 1 omitted, a bare `1` (or `-1`) for units.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == Sign::Negative {
            f.write_str("-")?;
        }
        if self.is_unit() {
            return f.write_str("1");
        }
        let mut first = true;
        for (p, e) in &self.factors {
            if !first {
                f.write_str(" * ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        if !self.cofactor.is_one() {
            if !first {
                f.write_str(" * ")?;
            }
            write!(f, "C<{}>", self.cofactor)?;
        }
        Ok(())
    }
}

impl FromStr for Factorization {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, ArithError> {
        let bad = |_| ArithError::Parse(String::from(s));
        let s_trim = s.trim();
        let (sign, body) = match s_trim.strip_prefix('-') {
            Some(rest) => (Sign::Negative, rest.trim()),
            None => (Sign::Positive, s_trim),
        };
        if body == "1" {
            return Ok(Factorization { sign, factors: Vec::new(), cofactor: BigUint::one() });
        }
        let mut factors = Vec::new();
        let mut cofactor = BigUint::one();
        for token in body.split('*') {
            let token = token.trim();
            if let Some(inner) = token.strip_prefix("C<").and_then(|t| t.strip_suffix('>')) {
                cofactor = BigUint::from_str(inner).map_err(bad)?;
                continue;
            }
            let (p, e) = match token.split_once('^') {
                Some((p, e)) => (p, e.parse::<u32>().map_err(|_| ArithError::Parse(String::from(s)))?),
                None => (token, 1),
            };
            factors.push((BigUint::from_str(p).map_err(bad)?, e));
        }
        Factorization::from_parts(sign, factors, cofactor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn parse(s: &str) -> Factorization {
        s.parse().unwrap()
    }

    #[test]
    fn text_form_round_trips() {
        for s in ["1", "-1", "3^2 * 7", "2^3 * 3^2 * 5 * 17 * 23 * 1737017", "3 * C<1000036000099>"] {
            assert_eq!(parse(s).to_string(), s);
        }
        assert_eq!(parse("3^2 * 7").value(), BigInt::from(63));
    }

    #[test]
    fn rejects_non_canonical_text() {
        assert!("7 * 3^2".parse::<Factorization>().is_err());
        assert!("4 * 7".parse::<Factorization>().is_err());
        assert!("3 * C<7>".parse::<Factorization>().is_err());
        assert!("3^0".parse::<Factorization>().is_err());
    }

    #[test]
    fn derived_quantities() {
        let f = parse("2^2 * 3");
        assert_eq!(f.tau().unwrap(), BigUint::from(6u32));
        assert_eq!(f.power_split().unwrap(), PowerSplit { u: 3u32.into(), v: 4u32.into() });
        assert_eq!(parse("2^3 * 3^2 * 5").radical().unwrap(), BigUint::from(30u32));
        assert_eq!(parse("2^3").radical().unwrap(), BigUint::from(2u32));
        let split = parse("3^2 * 7").power_split().unwrap();
        assert_eq!((split.u, split.v), (7u32.into(), 9u32.into()));
        assert_eq!(Factorization::one().omega().unwrap(), 0);
        assert_eq!(Factorization::one().tau().unwrap(), BigUint::one());
        assert_eq!(
            Factorization::one().power_split().unwrap(),
            PowerSplit { u: 1u32.into(), v: 1u32.into() }
        );
    }

    #[test]
    fn greatest_prime_factor_exactness() {
        assert_eq!(parse("23 * 89").greatest_prime_factor().unwrap(), (89u32.into(), true));
        assert_eq!(parse("2").greatest_prime_factor().unwrap(), (2u32.into(), true));
        assert_eq!(parse("3^2 * 17").greatest_prime_factor().unwrap(), (17u32.into(), true));
        assert_eq!(
            parse("3 * C<1000036000099>").greatest_prime_factor().unwrap(),
            (3u32.into(), false)
        );
        assert_eq!(Factorization::one().greatest_prime_factor(), Err(ArithError::NoPrimeFactor));
        assert_eq!(parse("3 * C<1000036000099>").omega(), Err(ArithError::IncompleteFactorization));
    }

    #[test]
    fn products_and_quotients() {
        let a = parse("3 * 5");
        let b = parse("-3 * 7");
        let ab = a.mul(&b);
        assert_eq!(ab.to_string(), "-3^2 * 5 * 7");
        assert_eq!(ab.divide_exact(&a).unwrap(), b);
        assert_eq!(parse("3").pow(4).to_string(), "3^4");
    }
}
