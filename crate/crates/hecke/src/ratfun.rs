//! The scalar field Q(v): normalized ratios of integer polynomials.
//!
//! Every value is kept in canonical form: coprime numerator and denominator
//! over Z[v] (including integer content), denominator with positive leading
//! coefficient, and zero represented as 0/1. All arithmetic is exact.

use crate::poly::IntPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactFieldError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("malformed input: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: IntPoly,
    den: IntPoly,
}

impl RationalFunction {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self, ExactFieldError> {
        if den.is_zero() {
            return Err(ExactFieldError::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: IntPoly, den: IntPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RationalFunction {
                num: IntPoly::zero(),
                den: IntPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g);
        let mut den = den.div_exact(&g);
        if den.leading().map_or(false, |l| l.is_negative()) {
            num = -num;
            den = -den;
        }
        RationalFunction { num, den }
    }

    /// Renormalize an arbitrary pair; the public entry point for `new` data.
    /// Idempotent on already-canonical values.
    pub fn normalize(&self) -> Self {
        Self::normalized(self.num.clone(), self.den.clone())
    }

    pub fn zero() -> Self {
        RationalFunction {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        RationalFunction {
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        RationalFunction {
            num: IntPoly::constant_i64(c),
            den: IntPoly::one(),
        }
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RationalFunction {
            num: p,
            den: IntPoly::one(),
        }
    }

    /// The Laurent monomial `c * v^k` (k may be negative).
    pub fn monomial(c: i64, k: i64) -> Self {
        if k >= 0 {
            RationalFunction::from_poly(IntPoly::monomial(BigInt::from(c), k as usize))
        } else {
            RationalFunction {
                num: IntPoly::constant_i64(c),
                den: IntPoly::monomial(BigInt::one(), (-k) as usize),
            }
        }
    }

    pub fn v() -> Self {
        RationalFunction::monomial(1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    /// The bar involution v -> 1/v.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return RationalFunction::zero();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let mut num = self.num.reversed();
        let mut den = self.den.reversed();
        // num(1/v)/den(1/v) = v^(dd-dn) * rev(num)/rev(den)
        if dd >= dn {
            num = num.shifted(dd - dn);
        } else {
            den = den.shifted(dn - dd);
        }
        Self::normalized(num, den)
    }

    pub fn inv(&self) -> Result<Self, ExactFieldError> {
        if self.is_zero() {
            return Err(ExactFieldError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, n: i32) -> Self {
        if n == 0 {
            return RationalFunction::one();
        }
        let base = if n < 0 {
            self.inv().expect("pow of zero with negative exponent")
        } else {
            self.clone()
        };
        let mut out = RationalFunction::one();
        for _ in 0..n.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// If this is a Laurent polynomial with integer coefficients, return
    /// `(lowest_degree, coefficients)` with coefficients ascending from
    /// `lowest_degree` and both ends nonzero.
    pub fn as_int_laurent(&self) -> Option<(i64, Vec<BigInt>)> {
        if self.is_zero() {
            return Some((0, Vec::new()));
        }
        // Canonical denominators dividing a power of v are exactly v^k.
        let dd = self.den.degree().unwrap();
        if self.den.num_terms() != 1 || !self.den.leading().unwrap().is_one() {
            return None;
        }
        let val = self.num.valuation().unwrap();
        let lo = val as i64 - dd as i64;
        let coeffs = self.num.unshifted(val).coeffs().to_vec();
        Some((lo, coeffs))
    }

    /// If this is a polynomial in v (denominator 1), return it.
    pub fn as_int_poly(&self) -> Option<&IntPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// Sum of the strictly positive-degree terms of an integer Laurent
    /// polynomial. `None` if the value is not an integer Laurent polynomial.
    pub fn positive_degree_part(&self) -> Option<RationalFunction> {
        let (lo, coeffs) = self.as_int_laurent()?;
        let mut out = IntPoly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let d = lo + i as i64;
            if d > 0 && !c.is_zero() {
                out = &out + &IntPoly::monomial(c.clone(), d as usize);
            }
        }
        Some(RationalFunction::from_poly(out))
    }

    /// Canonical rendering with variable `var`, e.g. `v/(1+v^2)`.
    pub fn display(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.display(var);
        }
        let num = if self.num.num_terms() > 1 {
            format!("({})", self.num.display(var))
        } else {
            self.num.display(var)
        };
        let den = if self.den.num_terms() > 1 || self.den.degree() == Some(0) {
            format!("({})", self.den.display(var))
        } else {
            self.den.display(var)
        };
        format!("{}/{}", num, den)
    }

    /// Parse the canonical grammar: integer coefficients, `var` powers with
    /// `^`, `+`/`-` separated terms, optional `/(den)`.
    pub fn parse(s: &str, var: char) -> Result<Self, ExactFieldError> {
        let s: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        let (num_s, den_s) = match split_fraction(&s) {
            Some((n, d)) => (n.to_string(), d.to_string()),
            None => (s.clone(), String::new()),
        };
        let num = parse_poly(strip_parens(&num_s), var)?;
        let den = if den_s.is_empty() {
            IntPoly::one()
        } else {
            parse_poly(strip_parens(&den_s), var)?
        };
        if den.is_zero() {
            return Err(ExactFieldError::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }
}

fn split_fraction(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    if s.starts_with('(') && s.ends_with(')') {
        let inner = &s[1..s.len() - 1];
        let mut depth = 0i32;
        for c in inner.chars() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if depth < 0 {
                return s;
            }
        }
        return inner;
    }
    s
}

fn parse_poly(s: &str, var: char) -> Result<IntPoly, ExactFieldError> {
    if s.is_empty() {
        return Err(ExactFieldError::Parse("empty polynomial".into()));
    }
    let bytes: Vec<char> = s.chars().collect();
    let mut terms: Vec<(BigInt, usize)> = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let mut sign = BigInt::one();
        while i < bytes.len() && (bytes[i] == '+' || bytes[i] == '-') {
            if bytes[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        if i >= bytes.len() {
            return Err(ExactFieldError::Parse(format!("dangling sign in {:?}", s)));
        }
        let mut digits = String::new();
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            digits.push(bytes[i]);
            i += 1;
        }
        let coeff: BigInt = if digits.is_empty() {
            BigInt::one()
        } else {
            digits.parse().map_err(|_| ExactFieldError::Parse(s.into()))?
        };
        let mut exp = 0usize;
        if i < bytes.len() && bytes[i] == var {
            i += 1;
            exp = 1;
            if i < bytes.len() && bytes[i] == '^' {
                i += 1;
                let mut e = String::new();
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    e.push(bytes[i]);
                    i += 1;
                }
                exp = e.parse().map_err(|_| ExactFieldError::Parse(s.into()))?;
            }
        } else if digits.is_empty() {
            return Err(ExactFieldError::Parse(format!(
                "unexpected character {:?} in {:?}",
                bytes[i], s
            )));
        }
        terms.push((sign * coeff, exp));
    }
    let deg = terms.iter().map(|t| t.1).max().unwrap_or(0);
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for (c, e) in terms {
        coeffs[e] += c;
    }
    Ok(IntPoly::from_coeffs(coeffs))
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("v"))
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RationalFunction::normalized(num, den)
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        RationalFunction::normalized(num, den)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RationalFunction::normalized(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.clone().neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse(s, 'v').unwrap()
    }

    #[test]
    fn normalize_examples() {
        // (1-v^2)/(1-v^2) -> 1
        let f = RationalFunction::new(IntPoly::from_i64s(&[1, 0, -1]), IntPoly::from_i64s(&[1, 0, -1])).unwrap();
        assert!(f.is_one());
        // (v+v^3)/(1+v^2) -> v
        let g = RationalFunction::new(IntPoly::from_i64s(&[0, 1, 0, 1]), IntPoly::from_i64s(&[1, 0, 1])).unwrap();
        assert_eq!(g, rf("v"));
        // v/(1+v^2) stays put
        let h = rf("v/(1+v^2)");
        assert_eq!(h.normalize(), h);
        assert_eq!(h.display("v"), "v/(1+v^2)");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RationalFunction::new(IntPoly::one(), IntPoly::zero()),
            Err(ExactFieldError::ZeroDenominator)
        );
    }

    #[test]
    fn bar_examples() {
        assert_eq!(rf("v").bar(), rf("1/v"));
        let f0 = rf("v/(1+v^2)");
        assert_eq!(f0.bar(), f0);
        // 1 - v^2 -> (v^2-1)/v^2
        assert_eq!(rf("1-v^2").bar(), rf("(-1+v^2)/v^2"));
        assert_eq!(rf("1-v^2").bar().display("v"), "(-1+v^2)/v^2");
    }

    #[test]
    fn laurent_decomposition() {
        let f = rf("(1+v^3)/v");
        let (lo, coeffs) = f.as_int_laurent().unwrap();
        assert_eq!(lo, -1);
        assert_eq!(coeffs.len(), 4);
        assert_eq!(f.positive_degree_part().unwrap(), rf("v^2"));
        assert!(rf("v/(1+v^2)").as_int_laurent().is_none());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "1", "-v", "v/(1+v^2)", "(v+v^3)/(1+v^2+v^4)", "1+2v+2v^2+v^3", "3/2", "1/v^2"] {
            let f = rf(s);
            assert_eq!(RationalFunction::parse(&f.display("v"), 'v').unwrap(), f);
        }
        assert_eq!(rf("(v+v^3)/(1+v^2)"), rf("v"));
    }

    #[test]
    fn monomials_and_pow() {
        assert_eq!(RationalFunction::monomial(-1, -2).display("v"), "-1/v^2");
        assert_eq!(rf("v").pow(-3), rf("1/v^3"));
    }
}
