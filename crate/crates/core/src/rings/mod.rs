//! Exact coefficient arithmetic.
//!
//! Everything downstream is generic over [`Ring`], which is implemented by
//! elements of finite fields ([`FieldElem`]), of truncated Witt rings of
//! `F_p` ([`WittElem`], realized as `Z/p^N`) and by dense univariate
//! polynomials over either ([`Poly`]). Elements carry their own ring context,
//! so `zero`/`one` are produced from a template element.
//!
//! Nothing here uses floating point; equality is always exact.

mod field;
mod hensel;
mod matrix;
pub mod modp;
mod poly;
mod witt;

pub use field::{common_extension, find_root_of_unity_scale, roots_in_field, FieldElem, FieldEmbedding, GaloisField};
pub use hensel::hensel_lift_roots;
pub use matrix::Matrix;
pub use modp::{is_prime, lucas_binom};
pub use poly::Poly;
pub use witt::{WittElem, WittRing};

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

/// Errors raised while building or combining coefficient rings.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("{0} is not an odd prime below 2^31")]
    NotOddPrime(u64),
    #[error("prime {p} violates the Coxeter guard 2*{h} < {p}")]
    PrimeTooSmall { p: u64, h: usize },
    #[error("modulus is not a monic irreducible polynomial of degree {degree} over F_{p}")]
    ReducibleModulus { p: u64, degree: usize },
    #[error("field or ring order exceeds 64-bit arithmetic")]
    Overflow,
    #[error("Witt vector length must be at least 1")]
    ZeroLength,
    #[error("input is zero")]
    ZeroInput,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("mod-p reduction has a repeated root")]
    NonSeparableReduction,
    #[error("mod-p reduction does not split into linear factors over F_p")]
    NonSplitReduction,
    #[error("cannot embed F_{p}^{from} into F_{p}^{to}")]
    NoEmbedding { p: u64, from: usize, to: usize },
}

/// A commutative ring element that knows its own ring.
pub trait Ring:
    Clone
    + PartialEq
    + Eq
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    /// Image of an integer under the structure map `Z -> R`.
    fn lift_i64(&self, v: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse when `self` is a unit.
    fn try_inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// An odd prime, optionally tied to a rank `n` for which `2n < p` must hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeModulus {
    p: u64,
    guard_rank: Option<usize>,
}

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self, RingError> {
        if p == 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(RingError::NotOddPrime(p));
        }
        Ok(Self { p, guard_rank: None })
    }

    /// Prime carrying the standing hypothesis `2n < p` for `PGL_n`.
    pub fn with_guard(p: u64, n: usize) -> Result<Self, RingError> {
        let m = Self::new(p)?;
        m.check_coxeter(n)?;
        Ok(Self { guard_rank: Some(n), ..m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn guard_rank(&self) -> Option<usize> {
        self.guard_rank
    }

    pub fn is_guarded(&self) -> bool {
        self.guard_rank.is_some()
    }

    /// Checks `2h < p` for a Coxeter number `h`.
    pub fn check_coxeter(&self, h: usize) -> Result<(), RingError> {
        if (2 * h as u64) < self.p {
            Ok(())
        } else {
            Err(RingError::PrimeTooSmall { p: self.p, h })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_modulus_validation() {
        assert!(PrimeModulus::new(5).is_ok());
        assert_eq!(PrimeModulus::new(2), Err(RingError::NotOddPrime(2)));
        assert_eq!(PrimeModulus::new(9), Err(RingError::NotOddPrime(9)));
        assert!(PrimeModulus::with_guard(5, 2).is_ok());
        assert_eq!(PrimeModulus::with_guard(5, 3), Err(RingError::PrimeTooSmall { p: 5, h: 3 }));
        assert!(PrimeModulus::with_guard(7, 3).is_ok());
    }
}
