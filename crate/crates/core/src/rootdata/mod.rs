//! Classical root systems, their Weyl groups and regular points of the
//! Cartan subalgebra over `F_p`.
//!
//! Coordinates are the standard ones: type `A_{n-1}` lives in `F_p^n` modulo
//! the all-ones vector, types `B`, `C`, `D` of rank `r` in `F_p^r`. Weyl
//! groups are realized as signed permutations and enumerated by closure.

mod lie;

pub use lie::{
    chi, chi_coeffs, chi_in, kostant_matrix, kostant_section, q_minus, q_plus, sl2_triple, two_rho_check,
    AdjointQuotientPoint, LieMatrix, TraceConvention,
};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::rings::{FieldElem, GaloisField, PrimeModulus, Ring, RingError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootDataError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("invalid rank {rank} for family {family}")]
    InvalidRank { family: Family, rank: usize },
    #[error("family {0} has no matrix realization")]
    UnrealizedFamily(Family),
    #[error("Weyl group does not act freely: orbit of size {orbit} versus |W| = {order}")]
    NonFreeAction { orbit: usize, order: usize },
    #[error("Kostant section is degenerate: leading constant {index} is not a unit")]
    KostantDegenerate { index: usize },
    #[error("expected {expected} adjoint quotient coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("matrix has nonzero trace under the sl convention")]
    TraceNonzero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
        };
        write!(f, "{c}")
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "A" | "a" => Ok(Family::A),
            "B" | "b" => Ok(Family::B),
            "C" | "c" => Ok(Family::C),
            "D" | "d" => Ok(Family::D),
            other => Err(format!("unknown family {other}")),
        }
    }
}

/// `v -> w.v` with `(w.v)_i = sign_i * v_{perm_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n).collect(), signs: vec![1; n] }
    }

    fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut w = Self::identity(n);
        w.perm.swap(i, j);
        w
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let perm = self.perm.iter().map(|&i| other.perm[i]).collect();
        let signs = self.perm.iter().zip(&self.signs).map(|(&i, &s)| s * other.signs[i]).collect();
        Self { perm, signs }
    }

    pub fn apply_int(&self, v: &[i64]) -> Vec<i64> {
        self.perm.iter().zip(&self.signs).map(|(&i, &s)| s as i64 * v[i]).collect()
    }

    pub fn apply<R: Ring>(&self, v: &[R]) -> Vec<R> {
        self.perm.iter().zip(&self.signs).map(|(&i, &s)| if s < 0 { -v[i].clone() } else { v[i].clone() }).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    family: Family,
    rank: usize,
    roots: Vec<Vec<i64>>,
    weyl_generators: Vec<SignedPerm>,
}

impl RootDatum {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootDataError> {
        let min_rank = if family == Family::D { 2 } else { 1 };
        if rank < min_rank {
            return Err(RootDataError::InvalidRank { family, rank });
        }
        let dim = if family == Family::A { rank + 1 } else { rank };
        let unit = |i: usize, c: i64| {
            let mut v = vec![0; dim];
            v[i] = c;
            v
        };
        let mut roots = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                if i == j {
                    continue;
                }
                let mut v = unit(i, 1);
                v[j] = -1;
                roots.push(v);
                if family != Family::A && i < j {
                    let mut w = unit(i, 1);
                    w[j] = 1;
                    roots.push(w.clone());
                    roots.push(w.iter().map(|c| -c).collect());
                }
            }
        }
        match family {
            Family::B => (0..dim).for_each(|i| roots.extend([unit(i, 1), unit(i, -1)])),
            Family::C => (0..dim).for_each(|i| roots.extend([unit(i, 2), unit(i, -2)])),
            _ => {}
        }
        roots.sort();

        let mut weyl_generators: Vec<SignedPerm> =
            (0..dim - 1).map(|i| SignedPerm::transposition(dim, i, i + 1)).collect();
        match family {
            Family::A => {}
            Family::B | Family::C => {
                let mut s = SignedPerm::identity(dim);
                s.signs[dim - 1] = -1;
                weyl_generators.push(s);
            }
            Family::D => {
                let mut s = SignedPerm::transposition(dim, dim - 2, dim - 1);
                s.signs[dim - 2] = -1;
                s.signs[dim - 1] = -1;
                weyl_generators.push(s);
            }
        }
        Ok(Self { family, rank, roots, weyl_generators })
    }

    /// `A_{n-1}`, the root datum of `PGL_n`.
    pub fn pgl(n: usize) -> Result<Self, RootDataError> {
        Self::new(Family::A, n.saturating_sub(1))
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Length of coordinate vectors.
    pub fn ambient_dim(&self) -> usize {
        if self.family == Family::A {
            self.rank + 1
        } else {
            self.rank
        }
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn weyl_generators(&self) -> &[SignedPerm] {
        &self.weyl_generators
    }

    pub fn coxeter_number(&self) -> usize {
        match self.family {
            Family::A => self.rank + 1,
            Family::B | Family::C => 2 * self.rank,
            Family::D => 2 * self.rank - 2,
        }
    }

    /// Classical root count.
    pub fn expected_root_count(&self) -> usize {
        let r = self.rank;
        match self.family {
            Family::A => r * (r + 1),
            Family::B | Family::C => 2 * r * r,
            Family::D => 2 * r * (r - 1),
        }
    }

    pub fn expected_weyl_order(&self) -> usize {
        let fact: usize = (1..=self.ambient_dim()).product();
        match self.family {
            Family::A => fact,
            Family::B | Family::C => fact << self.rank,
            Family::D => fact << (self.rank - 1),
        }
    }

    /// All Weyl group elements, by closure under the generators.
    pub fn weyl_group(&self) -> Vec<SignedPerm> {
        let id = SignedPerm::identity(self.ambient_dim());
        let mut seen = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(w) = queue.pop_front() {
            for g in &self.weyl_generators {
                let next = g.compose(&w);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Matrix size of the type-A realization.
    pub fn matrix_size(&self) -> Result<usize, RootDataError> {
        match self.family {
            Family::A => Ok(self.rank + 1),
            f => Err(RootDataError::UnrealizedFamily(f)),
        }
    }

    fn guard(&self, p: &PrimeModulus) -> Result<(), RootDataError> {
        if p.is_guarded() {
            p.check_coxeter(self.coxeter_number())?;
        }
        Ok(())
    }
}

/// A point of the Cartan subalgebra over `F_p`. Type-A points are stored
/// with first coordinate zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    coords: Vec<FieldElem>,
}

impl TorusPoint {
    /// Builds a point, normalizing type-A coordinates by translation.
    pub fn new(datum: &RootDatum, coords: Vec<FieldElem>) -> Self {
        assert_eq!(coords.len(), datum.ambient_dim(), "coordinate length");
        if datum.family == Family::A {
            let c0 = coords[0].clone();
            Self { coords: coords.into_iter().map(|c| c - c0.clone()).collect() }
        } else {
            Self { coords }
        }
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn residues(&self) -> Vec<u64> {
        self.coords.iter().map(FieldElem::to_index).collect()
    }

    pub fn is_regular(&self, datum: &RootDatum) -> bool {
        datum.roots.iter().all(|alpha| {
            let s = alpha
                .iter()
                .zip(&self.coords)
                .fold(self.coords[0].zero_like(), |acc, (&a, c)| acc + c.clone() * c.lift_i64(a));
            !s.is_zero()
        })
    }

    pub fn act(&self, datum: &RootDatum, w: &SignedPerm) -> Self {
        Self::new(datum, w.apply(&self.coords))
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn all_points(datum: &RootDatum, fp: &Arc<GaloisField>) -> Vec<TorusPoint> {
    let p = fp.p();
    let free = datum.rank;
    let total = p.pow(free as u32);
    (0..total)
        .map(|idx| {
            let mut digits: Vec<FieldElem> =
                (0..free).rev().map(|k| fp.from_i64(((idx / p.pow(k as u32)) % p) as i64)).collect();
            if datum.family == Family::A {
                digits.insert(0, fp.zero());
            }
            TorusPoint::new(datum, digits)
        })
        .collect()
}

/// Regular points of `t(F_p)`, in lexicographic order of coordinates.
pub fn regular_points(datum: &RootDatum, p: &PrimeModulus) -> Result<Vec<TorusPoint>, RootDataError> {
    datum.guard(p)?;
    let fp = GaloisField::prime(p.p())?;
    Ok(all_points(datum, &fp).into_iter().filter(|v| v.is_regular(datum)).collect())
}

/// Orbits of `W` on the regular points; each orbit sorted, orbits ordered by
/// their minimal element. Fails unless every orbit has size `|W|`.
pub fn weyl_orbits(datum: &RootDatum, p: &PrimeModulus) -> Result<Vec<Vec<TorusPoint>>, RootDataError> {
    let points = regular_points(datum, p)?;
    let group = datum.weyl_group();
    let mut remaining: BTreeSet<TorusPoint> = points.into_iter().collect();
    let mut orbits = Vec::new();
    while let Some(v) = remaining.pop_first() {
        let orbit: BTreeSet<TorusPoint> = group.iter().map(|w| v.act(datum, w)).collect();
        if orbit.len() != group.len() {
            return Err(RootDataError::NonFreeAction { orbit: orbit.len(), order: group.len() });
        }
        for x in &orbit {
            remaining.remove(x);
        }
        orbits.push(orbit.into_iter().collect());
    }
    Ok(orbits)
}

/// `#(t_reg(F_p)/W)` by explicit orbit partition.
pub fn weyl_orbit_count(datum: &RootDatum, p: &PrimeModulus) -> Result<usize, RootDataError> {
    Ok(weyl_orbits(datum, p)?.len())
}
