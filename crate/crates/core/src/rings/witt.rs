use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::modp::{inv_mod, mul_mod, reduce_i64};
use super::{PrimeModulus, Ring, RingError};

/// `W_N(F_p)`, realized as `Z/p^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WittRing {
    p: u64,
    length: u32,
    modulus: u64,
}

impl WittRing {
    pub fn new(p: PrimeModulus, length: u32) -> Result<Self, RingError> {
        if length == 0 {
            return Err(RingError::ZeroLength);
        }
        let modulus = p.p().checked_pow(length).ok_or(RingError::Overflow)?;
        if modulus >= 1 << 62 {
            return Err(RingError::Overflow);
        }
        Ok(Self { p: p.p(), length, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    /// `p^N`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elem(&self, v: i64) -> WittElem {
        WittElem { value: reduce_i64(v, self.modulus), ring: *self }
    }

    pub fn from_u64(&self, v: u64) -> WittElem {
        WittElem { value: v % self.modulus, ring: *self }
    }

    pub fn zero(&self) -> WittElem {
        self.from_u64(0)
    }

    pub fn one(&self) -> WittElem {
        self.from_u64(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = WittElem> + '_ {
        (0..self.modulus).map(|v| self.from_u64(v))
    }

    /// Same prime with a different length.
    pub fn with_length(&self, length: u32) -> Result<Self, RingError> {
        Self::new(PrimeModulus { p: self.p, guard_rank: None }, length)
    }
}

/// Element of [`WittRing`], stored as its least nonnegative residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WittElem {
    value: u64,
    ring: WittRing,
}

impl WittElem {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn ring(&self) -> WittRing {
        self.ring
    }

    /// Image in `F_p`.
    pub fn residue(&self) -> u64 {
        self.value % self.ring.p
    }

    pub fn is_unit(&self) -> bool {
        self.residue() != 0
    }

    /// Reduction to `W_{N'}` for `N' <= N`.
    pub fn truncate(&self, length: u32) -> Result<Self, RingError> {
        let ring = self.ring.with_length(length.min(self.ring.length))?;
        Ok(ring.from_u64(self.value))
    }

    /// `p`-adic valuation, capped at `N` for zero.
    pub fn valuation(&self) -> u32 {
        let mut v = self.value;
        if v == 0 {
            return self.ring.length;
        }
        let mut k = 0;
        while v.is_multiple_of(self.ring.p) {
            v /= self.ring.p;
            k += 1;
        }
        k
    }
}

impl fmt::Debug for WittElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for WittElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for WittElem {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.ring, rhs.ring);
        let s = self.value + rhs.value;
        let m = self.ring.modulus;
        Self { value: if s >= m { s - m } else { s }, ring: self.ring }
    }
}

impl Sub for WittElem {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.ring, rhs.ring);
        let m = self.ring.modulus;
        let value = if self.value >= rhs.value { self.value - rhs.value } else { self.value + m - rhs.value };
        Self { value, ring: self.ring }
    }
}

impl Neg for WittElem {
    type Output = Self;
    fn neg(self) -> Self {
        let value = if self.value == 0 { 0 } else { self.ring.modulus - self.value };
        Self { value, ring: self.ring }
    }
}

impl Mul for WittElem {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.ring, rhs.ring);
        Self { value: mul_mod(self.value, rhs.value, self.ring.modulus), ring: self.ring }
    }
}

impl Ring for WittElem {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }
    fn one_like(&self) -> Self {
        self.ring.one()
    }
    fn lift_i64(&self, v: i64) -> Self {
        self.ring.elem(v)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn try_inv(&self) -> Option<Self> {
        inv_mod(self.value, self.ring.modulus).map(|v| self.ring.from_u64(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(p: u64, n: u32) -> WittRing {
        WittRing::new(PrimeModulus::new(p).unwrap(), n).unwrap()
    }

    #[test]
    fn arithmetic_mod_prime_power() {
        let r = w(5, 2);
        assert_eq!(r.modulus(), 25);
        assert_eq!((r.elem(7) * r.elem(4)).value(), 3);
        assert_eq!((-r.elem(1)).value(), 24);
        assert_eq!(r.elem(7).try_inv().unwrap().value(), 18);
        assert!(r.elem(10).try_inv().is_none());
        assert_eq!(r.elem(10).valuation(), 1);
    }

    #[test]
    fn truncation_is_reduction() {
        let r = w(3, 3);
        let x = r.elem(20);
        assert_eq!(x.truncate(2).unwrap().value(), 2);
        assert_eq!(x.truncate(1).unwrap().value(), 2);
    }

    #[test]
    fn zero_length_rejected() {
        assert_eq!(WittRing::new(PrimeModulus::new(5).unwrap(), 0), Err(RingError::ZeroLength));
    }
}
