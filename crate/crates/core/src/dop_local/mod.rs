//! Level-`(N-1)` differential operators on the multiplicative local model.
//!
//! Sections are Laurent monomials `s^k` and `d = s d/ds`. The divided powers
//! `d^[m]` act on `s^k` by `C(k, m)`, so every operator considered here is
//! diagonal on monomials and the model is exact. The rank-one structure
//! `nabla_a` for `a` in `Z/p^N` lets `d^[p^i]` act on `s^k` by
//! `C(k + a, p^i) mod p`, with `a` read as its representative in `[0, p^N)`.
//!
//! [`verify_descent`] recomputes these scalars independently: it finds the
//! horizontal monomials of `d + a` over `Z/p^N`, writes each section as a
//! function times a horizontal one, and lets divided powers act on that
//! function through exact integer binomials.

use std::sync::Arc;

use rayon::prelude::*;

use crate::rings::modp::{binom_falling_mod, digits, lucas_binom};
use crate::rings::{FieldElem, GaloisField, Ring, RingError, WittElem, WittRing};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DopError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("operator level {level} exceeds the maximal level {max}")]
    LevelOutOfRange { level: u32, max: u32 },
    #[error("divided power order {m} is not below p^N = {bound}")]
    OrderOutOfRange { m: u64, bound: u64 },
    #[error("structures live over different Witt rings")]
    RingMismatch,
    #[error("structure has no horizontal monomials")]
    NoSolutions,
    #[error("structure has horizontal monomials in several residue classes")]
    AmbiguousSolutions,
    #[error("tensor product scalars disagree at s^{k}")]
    TensorMismatch { k: i64 },
    #[error("perturbation offset must lie in F_(p^2) outside F_p")]
    BadPerturbation,
}

/// A deliberately broken coefficient rule: adds `offset` to the scalars of
/// `d^[p^level]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    level: u32,
    offset: FieldElem,
}

/// `nabla_a^{(N-1)}` on the rank-one model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelStructure {
    a: WittElem,
    field: Arc<GaloisField>,
    perturbation: Option<Perturbation>,
}

impl LevelStructure {
    pub fn new(a: WittElem) -> Result<Self, DopError> {
        let field = GaloisField::prime(a.ring().p())?;
        Ok(Self { a, field, perturbation: None })
    }

    /// Negative control: the rule at `level` shifted by an element of
    /// `F_{p^2}` outside `F_p`.
    pub fn perturbed(a: WittElem, level: u32, offset_index: u64) -> Result<Self, DopError> {
        let field = GaloisField::extension(a.ring().p(), 2)?;
        let offset = field.from_index(offset_index);
        if offset.is_in_prime_field() {
            return Err(DopError::BadPerturbation);
        }
        check_level(level, a.ring().length())?;
        Ok(Self { a, field, perturbation: Some(Perturbation { level, offset }) })
    }

    pub fn a(&self) -> WittElem {
        self.a
    }

    pub fn p(&self) -> u64 {
        self.a.ring().p()
    }

    /// `N`; operators `d^[p^i]` exist for `i < N`.
    pub fn length(&self) -> u32 {
        self.a.ring().length()
    }

    pub fn modulus(&self) -> u64 {
        self.a.ring().modulus()
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn is_perturbed(&self) -> bool {
        self.perturbation.is_some()
    }

    fn shifted(&self, k: i64) -> u64 {
        (k as i128 + self.a.value() as i128).rem_euclid(self.modulus() as i128) as u64
    }

    /// Scalar of `d^[m]` on `s^k` for `m < p^N`.
    pub fn act_divided(&self, m: u64, k: i64) -> Result<FieldElem, DopError> {
        if m >= self.modulus() {
            return Err(DopError::OrderOutOfRange { m, bound: self.modulus() });
        }
        let base = lucas_binom(self.shifted(k), m, self.p());
        let mut v = self.field.from_i64(base as i64);
        if let Some(pert) = &self.perturbation {
            if m == self.p().pow(pert.level) {
                v = v + pert.offset.clone();
            }
        }
        Ok(v)
    }
}

fn check_level(level: u32, length: u32) -> Result<(), DopError> {
    if level >= length {
        return Err(DopError::LevelOutOfRange { level, max: length - 1 });
    }
    Ok(())
}

/// Scalar of `d^[p^i]` on `s^k` under `structure`.
pub fn act(level: u32, structure: &LevelStructure, k: i64) -> Result<FieldElem, DopError> {
    check_level(level, structure.length())?;
    structure.act_divided(structure.p().pow(level), k)
}

/// Symmetric exponent window `[-w, w]`.
pub fn window(w: i64) -> impl Iterator<Item = i64> + Clone {
    -w..=w
}

/// Default window `p^N * n`.
pub fn default_window(p: u64, length: u32, n: usize) -> i64 {
    (p.pow(length) as i64) * n as i64
}

/// Per-monomial `p^N`-curvature: `(d^[p^{N-1}])^p - d^[p^{N-1}]` under the
/// structure, since `(d^[p^{N-1}])^p = d^[p^{N-1}]` in the level-`(N-1)`
/// algebra on this model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureTable {
    pub entries: Vec<(i64, FieldElem)>,
}

impl CurvatureTable {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|(_, v)| v.is_zero())
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|(_, v)| !v.is_zero()).count()
    }
}

pub fn pn_curvature(structure: &LevelStructure, w: i64) -> Result<CurvatureTable, DopError> {
    let top = structure.length() - 1;
    let p = structure.p();
    let entries = window(w)
        .map(|k| {
            let phi = act(top, structure, k)?;
            Ok((k, Ring::pow(&phi, p) - phi))
        })
        .collect::<Result<Vec<_>, DopError>>()?;
    Ok(CurvatureTable { entries })
}

/// `d^[m](s^l s^k) = sum_j d^[j](s^l) d^[m-j](s^k)` with `d^[j](s^l) = C(l, j)`,
/// for all `m < p^N`, `k` in the window and `0 <= l < p^N`.
pub fn leibniz_consistent(structure: &LevelStructure, w: i64) -> Result<bool, DopError> {
    let p = structure.p();
    let bound = structure.modulus();
    let ks: Vec<i64> = window(w).collect();
    let ok = ks
        .par_iter()
        .map(|&k| -> Result<bool, DopError> {
            for l in 0..bound {
                for m in 0..bound {
                    let lhs = structure.act_divided(m, k + l as i64)?;
                    let mut rhs = structure.field.zero();
                    for j in 0..=m {
                        let c = lucas_binom(l, j, p);
                        if c != 0 {
                            rhs = rhs + structure.field.from_i64(c as i64) * structure.act_divided(m - j, k)?;
                        }
                    }
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })
        .collect::<Result<Vec<bool>, DopError>>()?;
    Ok(ok.into_iter().all(|b| b))
}

/// `d^[m] = prod_i C(d^[p^i], m_i)` over the base-`p` digits `m_i` of `m`,
/// checked on every monomial of the window.
pub fn composition_consistent(structure: &LevelStructure, w: i64) -> Result<bool, DopError> {
    let p = structure.p();
    let f = &structure.field;
    for k in window(w) {
        let gens: Vec<FieldElem> = (0..structure.length()).map(|i| act(i, structure, k)).collect::<Result<_, _>>()?;
        for m in 0..structure.modulus() {
            let ds = digits(m, p);
            let mut prod = f.one();
            for (i, &mi) in ds.iter().enumerate() {
                let mut falling = f.one();
                let mut fact = f.one();
                for t in 0..mi {
                    falling = falling * (gens[i].clone() - f.from_i64(t as i64));
                    fact = fact * f.from_i64(t as i64 + 1);
                }
                prod = prod * falling * fact.inv().expect("digit factorial is a unit");
            }
            if prod != structure.act_divided(m, k)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Horizontal sections `{s^k : k = residue mod p^N}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolBasis {
    pub residue: u64,
    pub modulus: u64,
}

/// Residue class of monomials killed by every `d^[p^i]`.
pub fn sol(structure: &LevelStructure) -> Result<SolBasis, DopError> {
    let mut residues = Vec::new();
    for k in 0..structure.modulus() {
        let killed = (0..structure.length()).all(|i| act(i, structure, k as i64).map(|v| v.is_zero()).unwrap_or(false));
        if killed {
            residues.push(k);
        }
    }
    match residues.as_slice() {
        [] => Err(DopError::NoSolutions),
        [r] => Ok(SolBasis { residue: *r, modulus: structure.modulus() }),
        _ => Err(DopError::AmbiguousSolutions),
    }
}

/// The structure whose horizontal sections are `sol`.
pub fn from_sol(sol: &SolBasis, ring: WittRing) -> Result<LevelStructure, DopError> {
    if sol.modulus != ring.modulus() {
        return Err(DopError::RingMismatch);
    }
    LevelStructure::new(-ring.from_u64(sol.residue))
}

/// Exponents `r` in the window with `c (r + a) = 0` in `Z/p^N` for a unit
/// `c`, i.e. the horizontal monomials of `d + a` over `Z/p^N`.
pub fn horizontal_exponents(a: WittElem, w: i64) -> Vec<i64> {
    let ring = a.ring();
    let c = ring.elem(1 + ring.p() as i64);
    window(w).filter(|&r| (c * (ring.elem(r) + a)).is_zero()).collect()
}

/// Scalar of `d^[p^i]` on `s^k` induced by writing `s^k = s^{k-r} s^r` with
/// `s^r` horizontal.
pub fn descended_scalar(k: i64, r: i64, level: u32, p: u64) -> u64 {
    binom_falling_mod(k - r, p.pow(level), p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentReport {
    pub horizontal: usize,
    pub compared: usize,
    pub mismatches: usize,
}

impl DescentReport {
    pub fn passed(&self) -> bool {
        self.horizontal > 0 && self.mismatches == 0
    }
}

/// Compares the structure induced from the kernel of `d + a` with
/// `structure`, on every `k` in the window, every level and every horizontal
/// representative found.
pub fn compare_descent(a: WittElem, structure: &LevelStructure, w: i64) -> Result<DescentReport, DopError> {
    if a.ring() != structure.a.ring() {
        return Err(DopError::RingMismatch);
    }
    let p = a.ring().p();
    let horizontal = horizontal_exponents(a, w);
    let reps: Vec<i64> = horizontal.iter().copied().take(5).collect();
    let ks: Vec<i64> = window(w).collect();
    let counts = ks
        .par_iter()
        .map(|&k| -> Result<(usize, usize), DopError> {
            let mut compared = 0;
            let mut bad = 0;
            for level in 0..a.ring().length() {
                let want = act(level, structure, k)?;
                for &r in &reps {
                    let got = structure.field.from_i64(descended_scalar(k, r, level, p) as i64);
                    compared += 1;
                    if got != want {
                        bad += 1;
                    }
                }
            }
            Ok((compared, bad))
        })
        .collect::<Result<Vec<_>, DopError>>()?;
    let (compared, mismatches) = counts.into_iter().fold((0, 0), |(c, b), (x, y)| (c + x, b + y));
    Ok(DescentReport { horizontal: horizontal.len(), compared, mismatches })
}

pub fn verify_descent_report(a: WittElem, w: i64) -> Result<DescentReport, DopError> {
    compare_descent(a, &LevelStructure::new(a)?, w)
}

/// Diagonal reduction of `(O, d + a)` agrees with `nabla_a^{(N-1)}` on the window.
pub fn verify_descent(a: WittElem, w: i64) -> Result<bool, DopError> {
    Ok(verify_descent_report(a, w)?.passed())
}

/// Whether a nonzero constant `c` intertwines the two structures on the window.
pub fn admits_surjection(x: &LevelStructure, y: &LevelStructure, w: i64) -> Result<bool, DopError> {
    if x.a.ring() != y.a.ring() {
        return Err(DopError::RingMismatch);
    }
    let f = &x.field;
    for c in f.elements().skip(1) {
        let mut ok = true;
        'outer: for k in window(w) {
            for i in 0..x.length() {
                let lhs = c.clone() * act(i, x, k)?;
                let rhs = act(i, y, k)? * c.clone();
                if lhs != rhs {
                    ok = false;
                    break 'outer;
                }
            }
        }
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `nabla_a (x) nabla_b`, with its scalars recomputed by the Leibniz rule
/// `d^[m](u v) = sum_j d^[j] u d^[m-j] v` and checked against `nabla_{a+b}`.
pub fn tensor(x: &LevelStructure, y: &LevelStructure, w: i64) -> Result<LevelStructure, DopError> {
    if x.a.ring() != y.a.ring() {
        return Err(DopError::RingMismatch);
    }
    let sum = LevelStructure::new(x.a + y.a)?;
    let p = x.p();
    for k in window(w) {
        for i in 0..x.length() {
            let m = p.pow(i);
            let mut conv = x.field.zero();
            for j in 0..=m {
                conv = conv + x.act_divided(j, k)? * y.act_divided(m - j, 0)?;
            }
            if conv != act(i, &sum, k)? {
                return Err(DopError::TensorMismatch { k });
            }
        }
    }
    Ok(sum)
}

/// Restriction to operators of level below `length`.
pub fn truncate(structure: &LevelStructure, length: u32) -> Result<LevelStructure, DopError> {
    if length == 0 || length > structure.length() {
        return Err(DopError::LevelOutOfRange { level: length, max: structure.length() });
    }
    LevelStructure::new(structure.a.truncate(length)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::PrimeModulus;

    fn ring(p: u64, n: u32) -> WittRing {
        WittRing::new(PrimeModulus::new(p).unwrap(), n).unwrap()
    }

    fn scalar(level: u32, a: i64, k: i64, p: u64, n: u32) -> u64 {
        act(level, &LevelStructure::new(ring(p, n).elem(a)).unwrap(), k).unwrap().to_index()
    }

    #[test]
    fn act_examples() {
        assert_eq!(scalar(0, 0, 5, 5, 1), 0);
        for i in 0..3 {
            assert_eq!(scalar(i, 0, 0, 5, 3), 0);
        }
        assert_eq!(scalar(0, 1, 4, 5, 1), 0);
        assert_eq!(scalar(0, 1, 3, 5, 1), 4);
        let s = LevelStructure::new(ring(5, 2).elem(3)).unwrap();
        assert_eq!(act(2, &s, 0), Err(DopError::LevelOutOfRange { level: 2, max: 1 }));
    }

    #[test]
    fn sol_examples() {
        let sol_of = |a, p, n| sol(&LevelStructure::new(ring(p, n).elem(a)).unwrap()).unwrap().residue;
        assert_eq!(sol_of(0, 5, 2), 0);
        assert_eq!(sol_of(1, 5, 1), 4);
        assert_eq!(sol_of(7, 5, 2), 18);
    }

    #[test]
    fn curvature_vanishes_and_control_fails() {
        let r = ring(5, 2);
        for a in r.elements() {
            let s = LevelStructure::new(a).unwrap();
            assert!(pn_curvature(&s, 50).unwrap().is_zero());
        }
        let bad = LevelStructure::perturbed(r.elem(3), 1, 5).unwrap();
        assert!(!pn_curvature(&bad, 50).unwrap().is_zero());
        assert_eq!(LevelStructure::perturbed(r.elem(3), 1, 2), Err(DopError::BadPerturbation));
    }

    #[test]
    fn descent_examples() {
        let r = ring(5, 2);
        for a in r.elements() {
            assert!(verify_descent(a, 60).unwrap(), "a = {a}");
        }
        let wrong = LevelStructure::new(r.elem(8)).unwrap();
        assert!(!compare_descent(r.elem(7), &wrong, 60).unwrap().passed());
    }

    #[test]
    fn leibniz_and_composition() {
        let r = ring(3, 2);
        for a in r.elements() {
            let s = LevelStructure::new(a).unwrap();
            assert!(leibniz_consistent(&s, 9).unwrap());
            assert!(composition_consistent(&s, 9).unwrap());
        }
        let bad = LevelStructure::perturbed(r.elem(1), 0, 3).unwrap();
        assert!(!leibniz_consistent(&bad, 9).unwrap());
    }

    #[test]
    fn surjection_iff_equal() {
        let r = ring(5, 2);
        let s = |a| LevelStructure::new(r.elem(a)).unwrap();
        assert!(admits_surjection(&s(7), &s(7), 25).unwrap());
        assert!(!admits_surjection(&s(7), &s(8), 25).unwrap());
        assert!(!admits_surjection(&s(7), &s(2), 25).unwrap());
    }

    #[test]
    fn tensor_adds_and_truncation_reduces() {
        let r = ring(5, 2);
        let t = tensor(&LevelStructure::new(r.elem(1)).unwrap(), &LevelStructure::new(r.elem(2)).unwrap(), 25).unwrap();
        assert_eq!(t.a().value(), 3);
        let s = LevelStructure::new(r.elem(18)).unwrap();
        let t1 = truncate(&s, 1).unwrap();
        assert_eq!(t1.a().value(), 3);
        for k in -25..=25 {
            assert_eq!(act(0, &s, k).unwrap(), act(0, &t1, k).unwrap());
        }
    }

    #[test]
    fn scalars_are_periodic() {
        let s = LevelStructure::new(ring(3, 3).elem(11)).unwrap();
        for k in -27..27 {
            for i in 0..3 {
                assert_eq!(act(i, &s, k).unwrap(), act(i, &s, k + 27).unwrap());
            }
        }
    }
}
