//! Dense univariate polynomials over the integers.
//!
//! `IntPoly` stores coefficients in ascending degree order. Invariant: the
//! vector is empty (zero polynomial) or the last entry is nonzero. These
//! polynomials are the numerators and denominators of [`crate::ratfun::RationalFunction`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = IntPoly { coeffs: vec![c] };
        p.normalize();
        p
    }

    pub fn constant_i64(c: i64) -> Self {
        IntPoly::constant(BigInt::from(c))
    }

    /// The monomial `c * x^deg`.
    pub fn monomial(c: BigInt, deg: usize) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c;
        IntPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Lowest degree with a nonzero coefficient (the x-adic valuation).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Multiply by `x^k`.
    pub fn shifted(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    /// Divide by `x^k`; panics if the valuation is smaller than `k`.
    pub fn unshifted(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        assert!(self.valuation().map_or(true, |v| v >= k), "unshift below valuation");
        IntPoly::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Coefficient reversal: `x^deg * p(1/x)`.
    pub fn reversed(&self) -> Self {
        let mut coeffs: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Content: gcd of the coefficients, nonnegative. Zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        self.div_exact_scalar(&c)
    }

    fn div_exact_scalar(&self, c: &BigInt) -> Self {
        IntPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| {
                    let (q, r) = a.div_rem(c);
                    debug_assert!(r.is_zero());
                    q
                })
                .collect(),
        }
    }

    /// Exact division; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &IntPoly) -> Self {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return IntPoly::zero();
        }
        let (q, r) = self.div_rem_rational(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Division with remainder, performed over the rationals and asserted to
    /// stay integral where used. Returns `(q, r)` with `self = q*d + r`.
    fn div_rem_rational(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (IntPoly::zero(), self.clone());
        }
        let mut q = vec![BigInt::zero(); rem.len() - dd];
        let lead = d.coeffs[dd].clone();
        for k in (0..q.len()).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(&lead);
            if !r.is_zero() {
                // Caller only uses this on exact divisions; signal via remainder.
                return (IntPoly::zero(), self.clone());
            }
            q[k] = c.clone();
            for i in 0..=dd {
                let t = &d.coeffs[i] * &c;
                rem[k + i] -= t;
            }
        }
        (IntPoly::from_coeffs(q), IntPoly::from_coeffs(rem))
    }

    /// Pseudo-remainder of `self` by `d` (both nonzero, deg self >= deg d).
    fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let n = self.degree().unwrap();
        let m = d.degree().unwrap();
        debug_assert!(n >= m);
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        for k in (m..=n).rev() {
            let top = rem[k].clone();
            for c in rem.iter_mut().take(k) {
                *c = &*c * &lead;
            }
            for i in 0..m {
                let t = &d.coeffs[i] * &top;
                rem[k - m + i] -= t;
            }
            rem[k] = BigInt::zero();
        }
        IntPoly::from_coeffs(rem)
    }

    /// Polynomial gcd over Z[x]: product of the coefficient gcd and the
    /// primitive gcd, normalized with a positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.positive_lead();
        }
        if other.is_zero() {
            return self.positive_lead();
        }
        let cont = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.positive_lead().scale(&cont)
    }

    fn positive_lead(&self) -> IntPoly {
        match self.leading() {
            Some(l) if l.is_negative() => -self.clone(),
            _ => self.clone(),
        }
    }

    /// Substitute `x^2 -> y` when all exponents are even.
    pub fn even_part(&self) -> Option<IntPoly> {
        if self.coeffs.iter().enumerate().any(|(i, c)| i % 2 == 1 && !c.is_zero()) {
            return None;
        }
        Some(IntPoly::from_coeffs(
            self.coeffs.iter().step_by(2).cloned().collect(),
        ))
    }

    /// Format with the given variable name, ascending degree.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    out.push('-');
                }
                first = false;
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let unit = mag.is_one();
            if i == 0 {
                out.push_str(&mag.to_string());
            } else {
                if !unit {
                    out.push_str(&mag.to_string());
                }
                out.push_str(var);
                if i > 1 {
                    out.push('^');
                    out.push_str(&i.to_string());
                }
            }
        }
        out
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("v"))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        IntPoly::from_coeffs(coeffs)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        IntPoly::from_coeffs(coeffs)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::from_coeffs(coeffs)
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_i64s(coeffs)
    }

    #[test]
    fn arithmetic_and_normalization() {
        let a = p(&[1, 2]);
        let b = p(&[-1, -2]);
        assert!((&a + &b).is_zero());
        assert_eq!(&a * &a, p(&[1, 4, 4]));
        assert_eq!(p(&[0, 0, 0]), IntPoly::zero());
    }

    #[test]
    fn gcd_cancels_common_factor() {
        // (1 - v^2) = (1-v)(1+v), (v + v^3) = v(1 + v^2): gcd 1
        let a = p(&[1, 0, -1]);
        let b = p(&[0, 1, 0, 1]);
        assert_eq!(a.gcd(&b), IntPoly::one());
        // v(1+v) vs (1+v): gcd 1+v
        let c = p(&[0, 1, 1]);
        let d = p(&[1, 1]);
        assert_eq!(c.gcd(&d), p(&[1, 1]));
        // contents combine
        assert_eq!(p(&[2]).gcd(&p(&[4])), p(&[2]));
    }

    #[test]
    fn exact_division() {
        let a = p(&[1, 2, 1]);
        let b = p(&[1, 1]);
        assert_eq!(a.div_exact(&b), p(&[1, 1]));
    }

    #[test]
    fn display_ascending() {
        assert_eq!(p(&[1, 0, 1]).display("q"), "1+q^2");
        assert_eq!(p(&[0, -1, 2]).display("v"), "-v+2v^2");
        assert_eq!(IntPoly::zero().display("v"), "0");
    }

    #[test]
    fn reversal() {
        assert_eq!(p(&[1, 0, -3]).reversed(), p(&[-3, 0, 1]));
        assert_eq!(p(&[0, 1]).reversed(), p(&[1]));
    }
}
