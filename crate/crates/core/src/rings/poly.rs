use std::ops::{Add, Mul, Neg, Sub};

use super::{FieldElem, Ring};

/// Dense univariate polynomial, coefficients from low to high degree.
///
/// The coefficient vector is never empty and carries no trailing zeros
/// except for the zero polynomial, which is stored as a single zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs a template coefficient");
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: R) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `c * x^deg`.
    pub fn monomial(c: R, deg: usize) -> Self {
        let mut coeffs = vec![c.zero_like(); deg + 1];
        coeffs[deg] = c;
        Self::new(coeffs)
    }

    /// The variable `x` over the ring of `template`.
    pub fn x(template: &R) -> Self {
        Self::monomial(template.one_like(), 1)
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(Ring::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.len() == 1 && self.coeffs[0].is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.coeffs[0].zero_like())
    }

    pub fn leading(&self) -> &R {
        self.coeffs.last().expect("non-empty")
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn template(&self) -> &R {
        &self.coeffs[0]
    }

    pub fn eval(&self, x: &R) -> R {
        let mut acc = self.leading().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(self.coeffs[0].zero_like());
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.clone() * c.lift_i64(i as i64)).collect())
    }

    /// Remainder and quotient by a polynomial with unit leading coefficient.
    pub fn divrem(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let lead_inv = d.leading().try_inv()?;
        let zero = self.template().zero_like();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::constant(zero), self.clone()));
        }
        let mut quot = vec![zero.clone(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                rem[k - dd + i] = rem[k - dd + i].clone() - c.clone() * di.clone();
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd.max(1));
        Some((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, d: &Self) -> Option<Self> {
        self.divrem(d).map(|(_, r)| r)
    }

    /// `self^e mod m` for `m` with unit leading coefficient.
    pub fn powmod(&self, mut e: u64, m: &Self) -> Option<Self> {
        let mut base = self.rem(m)?;
        let mut acc = Self::constant(self.template().one_like()).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = (acc * base.clone()).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                base = (base.clone() * base).rem(m)?;
            }
        }
        Some(acc)
    }
}

impl Poly<FieldElem> {
    pub fn make_monic(&self) -> Self {
        match self.leading().try_inv() {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero if both inputs vanish).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while b.degree().is_some() {
            let r = a.rem(&b).expect("nonzero divisor over a field");
            a = b;
            b = r;
        }
        a.make_monic()
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let zero = self.template().zero_like();
        let mut out = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero_like(&self) -> Self {
        Self::constant(self.template().zero_like())
    }
    fn one_like(&self) -> Self {
        Self::constant(self.template().one_like())
    }
    fn lift_i64(&self, v: i64) -> Self {
        Self::constant(self.template().lift_i64(v))
    }
    fn is_zero(&self) -> bool {
        self.degree().is_none()
    }
    fn try_inv(&self) -> Option<Self> {
        if self.coeffs.len() == 1 {
            self.coeffs[0].try_inv().map(Self::constant)
        } else {
            None
        }
    }
}
