use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::iter::Peekable;
use core::str::Chars;

use super::field::{FieldSpec, FqElement};
use super::raw::{self, Raw};
use super::FfError;

/// A polynomial over `F_q` in the variable `t`.
///
/// Text form: an expression in `t` (and, for `r > 1`, the field generator
/// `g`) built from integers, `+`, `-`, `*`, `^` and parentheses, such as
/// `t^3+t+1` or `(g+1)*t^2 + g`. Juxtaposition multiplies: `2t^2`.
#[derive(Clone)]
pub struct FqPolynomial {
    field: Arc<FieldSpec>,
    coeffs: Raw,
}

impl PartialEq for FqPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
            && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}

impl Eq for FqPolynomial {}

impl fmt::Debug for FqPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqPolynomial({self})")
    }
}

impl FqPolynomial {
    pub(crate) fn from_raw(field: &Arc<FieldSpec>, coeffs: Raw) -> Self {
        FqPolynomial { field: field.clone(), coeffs: raw::trim(coeffs) }
    }

    /// From coefficient encodings, low degree first.
    pub fn new(field: &Arc<FieldSpec>, coeffs: &[FqElement]) -> Result<Self, FfError> {
        if coeffs.iter().any(|c| c.0 as u64 >= field.order()) {
            return Err(FfError::Parse("coefficient outside the field".to_string()));
        }
        Ok(Self::from_raw(field, coeffs.iter().map(|c| c.0).collect()))
    }

    pub fn parse(field: &Arc<FieldSpec>, text: &str) -> Result<Self, FfError> {
        let mut parser = Parser { field, chars: text.chars().peekable() };
        let value = parser.expr()?;
        parser.skip_ws();
        if let Some(c) = parser.chars.peek() {
            return Err(FfError::Parse(format!("unexpected `{c}` in `{text}`")));
        }
        Ok(Self::from_raw(field, value))
    }

    pub fn zero(field: &Arc<FieldSpec>) -> Self {
        Self::from_raw(field, Vec::new())
    }

    pub fn one(field: &Arc<FieldSpec>) -> Self {
        Self::from_raw(field, alloc::vec![1])
    }

    pub fn t(field: &Arc<FieldSpec>) -> Self {
        Self::from_raw(field, raw::x())
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coefficients(&self) -> Vec<FqElement> {
        self.coeffs.iter().map(|&c| FqElement(c)).collect()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        raw::deg(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        raw::is_one(&self.coeffs)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn leading(&self) -> FqElement {
        FqElement(self.coeffs.last().copied().unwrap_or(0))
    }

    fn same_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "polynomials over different fields"
        );
    }

    fn wrap(&self, coeffs: Raw) -> Self {
        Self::from_raw(&self.field, coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        self.wrap(raw::add(&self.field, &self.coeffs, &other.coeffs))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        self.wrap(raw::sub(&self.field, &self.coeffs, &other.coeffs))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        self.wrap(raw::mul(&self.field, &self.coeffs, &other.coeffs))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.wrap(raw::pow(&self.field, &self.coeffs, e))
    }

    pub fn div_rem(&self, other: &Self) -> Result<(Self, Self), FfError> {
        self.same_field(other);
        if other.is_zero() {
            return Err(FfError::DivisionByZeroPoly);
        }
        let (q, r) = raw::divrem(&self.field, &self.coeffs, &other.coeffs);
        Ok((self.wrap(q), self.wrap(r)))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        self.same_field(other);
        self.wrap(raw::gcd(&self.field, &self.coeffs, &other.coeffs))
    }

    pub fn derivative(&self) -> Self {
        self.wrap(raw::derivative(&self.field, &self.coeffs))
    }

    /// Leading coefficient and monic associate.
    pub fn monic(&self) -> (FqElement, Self) {
        let (lead, m) = raw::monic(&self.field, &self.coeffs);
        (FqElement(lead), self.wrap(m))
    }

    pub fn scale(&self, c: FqElement) -> Self {
        self.wrap(raw::scale(&self.field, &self.coeffs, c.0))
    }

    /// `a(t^p)` with every coefficient raised to the `p`-th power, which is
    /// `a(t)^p` by the Frobenius identity.
    pub fn frobenius(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic() as usize;
        let mut out = alloc::vec![0u32; self.coeffs.len().saturating_sub(1) * p + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i * p] = f.pow(c, p as u64);
        }
        self.wrap(out)
    }

    pub fn is_irreducible(&self) -> bool {
        raw::is_irreducible(&self.field, &self.coeffs)
    }

    pub fn element_to_string(field: &FieldSpec, e: FqElement) -> String {
        element_text(field, e.0)
    }
}

fn element_text(field: &FieldSpec, e: u32) -> String {
    if field.degree() == 1 {
        return e.to_string();
    }
    let coords = field.coords(FqElement(e));
    let terms: Vec<String> = coords
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "g".to_string(),
            (1, c) => format!("{c}*g"),
            (i, 1) => format!("g^{i}"),
            (i, c) => format!("{c}*g^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

impl fmt::Display for FqPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let field = &*self.field;
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            let text = element_text(field, c);
            let atomic = !text.contains('+');
            let coef = match (k, c, atomic) {
                (0, _, true) => text,
                (0, _, false) => format!("({text})"),
                (_, 1, _) => String::new(),
                (_, _, true) => format!("{text}*"),
                (_, _, false) => format!("({text})*"),
            };
            match k {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}t")?,
                _ => write!(f, "{coef}t^{k}")?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    field: &'a Arc<FieldSpec>,
    chars: Peekable<Chars<'a>>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().copied()
    }

    fn err(&self, what: &str) -> FfError {
        FfError::Parse(what.to_string())
    }

    fn expr(&mut self) -> Result<Raw, FfError> {
        let f = &**self.field;
        let mut acc = Vec::new();
        let mut negate = false;
        match self.peek() {
            Some('-') => {
                self.chars.next();
                negate = true;
            }
            Some('+') => {
                self.chars.next();
            }
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if negate { raw::sub(f, &acc, &t) } else { raw::add(f, &acc, &t) };
            match self.peek() {
                Some('+') => negate = false,
                Some('-') => negate = true,
                _ => return Ok(acc),
            }
            self.chars.next();
        }
    }

    fn term(&mut self) -> Result<Raw, FfError> {
        let f = &**self.field;
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.chars.next();
                }
                Some(c) if c.is_ascii_digit() || c == 't' || c == 'g' || c == '(' => {}
                _ => return Ok(acc),
            }
            let rhs = self.power()?;
            acc = raw::mul(f, &acc, &rhs);
        }
    }

    fn power(&mut self) -> Result<Raw, FfError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.chars.next();
            self.skip_ws();
            let e = self.integer()?.ok_or_else(|| self.err("expected exponent after `^`"))?;
            return Ok(raw::pow(self.field, &base, e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<Option<u64>, FfError> {
        let mut value: Option<u64> = None;
        while let Some(d) = self.chars.peek().and_then(|c| c.to_digit(10)) {
            self.chars.next();
            value = Some(
                value
                    .unwrap_or(0)
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(d as u64))
                    .ok_or_else(|| self.err("integer literal too large"))?,
            );
        }
        Ok(value)
    }

    fn atom(&mut self) -> Result<Raw, FfError> {
        let f = &**self.field;
        match self.peek() {
            Some('t') => {
                self.chars.next();
                Ok(raw::x())
            }
            Some('g') => {
                self.chars.next();
                let g = f.generator().ok_or_else(|| self.err("`g` only exists in F_q with r > 1"))?;
                Ok(raw::trim(alloc::vec![g.0]))
            }
            Some('(') => {
                self.chars.next();
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("missing `)`"));
                }
                self.chars.next();
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?.expect("digit present");
                Ok(raw::trim(alloc::vec![f.from_int((n % f.characteristic() as u64) as i64)]))
            }
            Some(c) => Err(FfError::Parse(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}
