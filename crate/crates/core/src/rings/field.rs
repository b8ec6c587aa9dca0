use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use super::modp::{inv_mod, mul_mod, reduce_i64};
use super::{is_prime, Poly, Ring, RingError};

type Coeffs = SmallVec<[u32; 4]>;

/// `F_{p^d} = F_p[t]/(m)` for a monic irreducible `m` of degree `d`.
///
/// For `d = 1` the modulus is `t`. Extensions built by [`GaloisField::extension`]
/// use the smallest monic irreducible in the packed order, where `m = t^d +
/// c_{d-1} t^{d-1} + ... + c_0` is ranked by the integer `sum c_i p^i`.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct GaloisField {
    p: u64,
    degree: usize,
    modulus: Vec<u64>,
    order: u64,
}

impl GaloisField {
    pub fn prime(p: u64) -> Result<Arc<Self>, RingError> {
        if p == 2 || p >= (1 << 31) || !is_prime(p) {
            return Err(RingError::NotOddPrime(p));
        }
        Ok(Arc::new(Self { p, degree: 1, modulus: vec![0, 1], order: p }))
    }

    /// Field of order `p^d` with the canonical modulus.
    pub fn extension(p: u64, d: usize) -> Result<Arc<Self>, RingError> {
        let base = Self::prime(p)?;
        if d == 1 {
            return Ok(base);
        }
        let order = checked_order(p, d)?;
        let tail = order / p;
        for idx in 0..tail {
            let mut m: Vec<u64> = (0..d).map(|i| (idx / p.pow(i as u32)) % p).collect();
            m.push(1);
            if m[0] != 0 && is_irreducible(&base, &m) {
                return Ok(Arc::new(Self { p, degree: d, modulus: m, order }));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// Field defined by an explicit monic modulus, low coefficients first.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Arc<Self>, RingError> {
        let base = Self::prime(p)?;
        let d = modulus.len().saturating_sub(1);
        if d == 0 || modulus[d] % p != 1 {
            return Err(RingError::ReducibleModulus { p, degree: d });
        }
        let modulus: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        if d == 1 {
            if modulus[0] != 0 {
                return Err(RingError::ReducibleModulus { p, degree: d });
            }
            return Ok(base);
        }
        let order = checked_order(p, d)?;
        if !is_irreducible(&base, &modulus) {
            return Err(RingError::ReducibleModulus { p, degree: d });
        }
        Ok(Arc::new(Self { p, degree: d, modulus, order }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn raw(self: &Arc<Self>, coeffs: Coeffs) -> FieldElem {
        FieldElem { field: Arc::clone(self), coeffs }
    }

    pub fn zero(self: &Arc<Self>) -> FieldElem {
        self.raw(SmallVec::from_elem(0, self.degree))
    }

    pub fn one(self: &Arc<Self>) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(self: &Arc<Self>, v: i64) -> FieldElem {
        let mut c: Coeffs = SmallVec::from_elem(0, self.degree);
        c[0] = reduce_i64(v, self.p) as u32;
        self.raw(c)
    }

    /// Element from polynomial coefficients in `t`, reduced mod the modulus.
    pub fn element(self: &Arc<Self>, coeffs: &[i64]) -> FieldElem {
        let t = self.generator();
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = acc * t.clone() + self.from_i64(c);
        }
        acc
    }

    /// The class of `t`.
    pub fn generator(self: &Arc<Self>) -> FieldElem {
        if self.degree == 1 {
            return self.zero();
        }
        let mut c: Coeffs = SmallVec::from_elem(0, self.degree);
        c[1] = 1;
        self.raw(c)
    }

    /// Inverse of [`FieldElem::to_index`].
    pub fn from_index(self: &Arc<Self>, mut idx: u64) -> FieldElem {
        let mut c: Coeffs = SmallVec::from_elem(0, self.degree);
        for slot in c.iter_mut() {
            *slot = (idx % self.p) as u32;
            idx /= self.p;
        }
        self.raw(c)
    }

    /// All elements in index order.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order).map(move |i| self.from_index(i))
    }

    /// Elements of the prime subfield.
    pub fn prime_elements(self: &Arc<Self>) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.p).map(move |i| self.from_i64(i as i64))
    }
}

fn checked_order(p: u64, d: usize) -> Result<u64, RingError> {
    let order = p.checked_pow(d as u32).ok_or(RingError::Overflow)?;
    if order >= 1 << 62 {
        return Err(RingError::Overflow);
    }
    Ok(order)
}

fn poly_from_u64(f: &Arc<GaloisField>, m: &[u64]) -> Poly<FieldElem> {
    Poly::new(m.iter().map(|&c| f.from_i64(c as i64)).collect())
}

/// Rabin irreducibility test over the prime field `base`.
fn is_irreducible(base: &Arc<GaloisField>, m: &[u64]) -> bool {
    let d = m.len() - 1;
    let f = poly_from_u64(base, m);
    let x = Poly::x(&base.one());
    let p = base.p;
    let frob_iter = |k: usize| {
        let mut y = x.clone();
        for _ in 0..k {
            y = y.powmod(p, &f).expect("monic modulus");
        }
        y
    };
    if frob_iter(d) != x.rem(&f).expect("monic") {
        return false;
    }
    let mut q = d;
    let mut prime_divisors = Vec::new();
    let mut r = 2;
    while r <= q {
        if q.is_multiple_of(r) {
            prime_divisors.push(r);
            while q.is_multiple_of(r) {
                q /= r;
            }
        }
        r += 1;
    }
    prime_divisors.into_iter().all(|r| {
        let h = frob_iter(d / r) - x.clone();
        f.gcd(&h).degree() == Some(0)
    })
}

/// Element of a [`GaloisField`].
#[derive(Clone)]
pub struct FieldElem {
    field: Arc<GaloisField>,
    coeffs: Coeffs,
}

impl FieldElem {
    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Packed index `sum c_i p^i`; a bijection onto `0..q`.
    pub fn to_index(&self) -> u64 {
        let p = self.field.p;
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c as u64)
    }

    pub fn is_in_prime_field(&self) -> bool {
        self.coeffs.iter().skip(1).all(|&c| c == 0)
    }

    /// Residue in `0..p` when the element lies in `F_p`.
    pub fn prime_residue(&self) -> Option<u64> {
        self.is_in_prime_field().then(|| self.coeffs[0] as u64)
    }

    pub fn frobenius(&self) -> Self {
        Ring::pow(self, self.field.p)
    }

    pub fn inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            return None;
        }
        if self.field.degree == 1 {
            let v = inv_mod(self.coeffs[0] as u64, self.field.p)?;
            return Some(self.field.from_i64(v as i64));
        }
        Some(Ring::pow(self, self.field.order - 2))
    }

    fn same_field(&self, other: &Self) {
        debug_assert!(Arc::ptr_eq(&self.field, &other.field) || self.field == other.field, "field mismatch");
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field.p == other.field.p
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_index().cmp(&other.to_index())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.degree == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}

impl Add for FieldElem {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.same_field(&rhs);
        let p = self.field.p as u32;
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            let s = *a + *b;
            *a = if s >= p { s - p } else { s };
        }
        self
    }
}

impl Sub for FieldElem {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.same_field(&rhs);
        let p = self.field.p as u32;
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            *a = if *a >= *b { *a - *b } else { *a + p - *b };
        }
        self
    }
}

impl Neg for FieldElem {
    type Output = Self;
    fn neg(mut self) -> Self {
        let p = self.field.p as u32;
        for a in self.coeffs.iter_mut() {
            if *a != 0 {
                *a = p - *a;
            }
        }
        self
    }
}

impl Mul for FieldElem {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.same_field(&rhs);
        let p = self.field.p;
        let d = self.field.degree;
        if d == 1 {
            let v = mul_mod(self.coeffs[0] as u64, rhs.coeffs[0] as u64, p);
            let mut out = self;
            out.coeffs[0] = v as u32;
            return out;
        }
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u64 * b as u64) % p;
            }
        }
        let m = &self.field.modulus;
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..d {
                prod[k - d + i] = (prod[k - d + i] + (p - c) * m[i]) % p;
            }
            prod[k] = 0;
        }
        let coeffs = prod[..d].iter().map(|&c| c as u32).collect();
        FieldElem { field: self.field, coeffs }
    }
}

impl Ring for FieldElem {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn lift_i64(&self, v: i64) -> Self {
        self.field.from_i64(v)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}

/// Distinct roots of `f` in its coefficient field, sorted by index.
///
/// Uses `gcd(f, x^q - x)` followed by equal-degree splitting with
/// deterministic shifts `x + a`, `a` running through the field in index order.
pub fn roots_in_field(f: &Poly<FieldElem>) -> Vec<FieldElem> {
    let Some(deg) = f.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let field = Arc::clone(f.template().field());
    let f = f.make_monic();
    let x = Poly::x(&field.one());
    let xq = x.powmod(field.order, &f).expect("monic");
    let g = f.gcd(&(xq - x));
    let mut roots = Vec::new();
    split_linear(&field, g, &mut roots);
    roots.sort();
    roots
}

fn split_linear(field: &Arc<GaloisField>, g: Poly<FieldElem>, out: &mut Vec<FieldElem>) {
    match g.degree() {
        None | Some(0) => return,
        Some(1) => {
            out.push(-g.coeff(0));
            return;
        }
        _ => {}
    }
    let one = Poly::constant(field.one());
    let e = (field.order - 1) / 2;
    for a in field.elements() {
        let shift = Poly::new(vec![a, field.one()]);
        let h = shift.powmod(e, &g).expect("monic") - one.clone();
        let d = g.gcd(&h);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && Some(dd) < g.degree() {
            let (q, _) = g.divrem(&d).expect("monic");
            split_linear(field, d, out);
            split_linear(field, q.make_monic(), out);
            return;
        }
    }
    unreachable!("equal-degree splitting exhausts shifts only on linear input")
}

/// Ring map `F_{p^a} -> F_{p^b}` sending `t` to a chosen root of the source modulus.
#[derive(Debug, Clone)]
pub struct FieldEmbedding {
    source: Arc<GaloisField>,
    target: Arc<GaloisField>,
    image_of_t: FieldElem,
}

impl FieldEmbedding {
    /// Embedding through the smallest root of the source modulus in the target.
    pub fn new(source: &Arc<GaloisField>, target: &Arc<GaloisField>) -> Result<Self, RingError> {
        let no = || RingError::NoEmbedding { p: source.p, from: source.degree, to: target.degree };
        if source.p != target.p || !target.degree.is_multiple_of(source.degree) {
            return Err(no());
        }
        let image_of_t = if source.degree == 1 {
            target.zero()
        } else if source == target {
            target.generator()
        } else {
            let m = poly_from_u64(target, &source.modulus);
            roots_in_field(&m).into_iter().next().ok_or_else(no)?
        };
        Ok(Self { source: Arc::clone(source), target: Arc::clone(target), image_of_t })
    }

    pub fn source(&self) -> &Arc<GaloisField> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GaloisField> {
        &self.target
    }

    pub fn map(&self, x: &FieldElem) -> FieldElem {
        let mut acc = self.target.zero();
        for &c in x.coeffs.iter().rev() {
            acc = acc * self.image_of_t.clone() + self.target.from_i64(c as i64);
        }
        acc
    }
}

/// Canonical field of degree `lcm` containing both inputs, with embeddings.
pub fn common_extension(
    a: &Arc<GaloisField>,
    b: &Arc<GaloisField>,
) -> Result<(Arc<GaloisField>, FieldEmbedding, FieldEmbedding), RingError> {
    if a.p != b.p {
        return Err(RingError::NoEmbedding { p: a.p, from: a.degree, to: b.degree });
    }
    let (mut x, mut y) = (a.degree, b.degree);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    let lcm = a.degree / x * b.degree;
    let target = if lcm == a.degree {
        Arc::clone(a)
    } else if lcm == b.degree {
        Arc::clone(b)
    } else {
        GaloisField::extension(a.p, lcm)?
    };
    let ea = FieldEmbedding::new(a, &target)?;
    let eb = FieldEmbedding::new(b, &target)?;
    Ok((target, ea, eb))
}

/// Smallest `lambda` with `lambda^(p-1) = h` in the field of `h`, if any.
pub fn find_root_of_unity_scale(h: &FieldElem) -> Result<Option<FieldElem>, RingError> {
    if Ring::is_zero(h) {
        return Err(RingError::ZeroInput);
    }
    let p = h.field.p as usize;
    let mut cs = vec![h.zero_like(); p];
    cs[0] = -h.clone();
    cs[p - 1] = h.one_like();
    Ok(roots_in_field(&Poly::new(cs)).into_iter().next())
}
