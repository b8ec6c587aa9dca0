//! `PGL_n`-opers over `W_N(F_p)` through regular `a`-tuples.
//!
//! A dormant oper at level `(N, 1)` is determined by `(O^n, d + diag(a) delta)`
//! with its oper flag; a dormant oper at level `(1, N)` by the direct sum of
//! the level-`(N-1)` structures `nabla_{a_i}`. Both are classified by
//! regular tuples modulo translation and permutation. Classes are stored by
//! their canonical representative: the lexicographically smallest sorted
//! translate.

use std::collections::BTreeMap;

use crate::dop_local::{self, DopError, LevelStructure};
use crate::rings::modp::lucas_binom;
use crate::rings::{hensel_lift_roots, Matrix, Poly, PrimeModulus, Ring, RingError, WittElem, WittRing};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WittError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Dop(#[from] DopError),
    #[error("tuple is not regular: residues mod p collide")]
    NotRegular,
    #[error("matrix is not dormant mod p: A^p != A")]
    NotDormantModP,
    #[error("eigenvalues mod p are not pairwise distinct")]
    RepeatedEigenvalues,
    #[error("rank n = {n} must satisfy 1 <= n < p = {p}")]
    BadRank { n: usize, p: u64 },
    #[error("matrix must be square of size {expected}")]
    BadShape { expected: usize },
    #[error("operands live on different sides or rings")]
    SideMismatch,
    #[error("expected data at level {expected:?}")]
    WrongSide { expected: LevelSide },
    #[error("internal verification failed: {0}")]
    Verification(String),
}

/// Rank, prime and length for the classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WittContext {
    n: usize,
    ring: WittRing,
}

impl WittContext {
    /// Enforces `2n < p`.
    pub fn new(n: usize, p: u64, length: u32) -> Result<Self, WittError> {
        let modulus = PrimeModulus::with_guard(p, n)?;
        Self::checked(n, modulus, length)
    }

    /// Only requires `n < p`.
    pub fn unguarded(n: usize, p: u64, length: u32) -> Result<Self, WittError> {
        Self::checked(n, PrimeModulus::new(p)?, length)
    }

    fn checked(n: usize, modulus: PrimeModulus, length: u32) -> Result<Self, WittError> {
        if n == 0 || n as u64 >= modulus.p() {
            return Err(WittError::BadRank { n, p: modulus.p() });
        }
        Ok(Self { n, ring: WittRing::new(modulus, length)? })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> WittRing {
        self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    pub fn length(&self) -> u32 {
        self.ring.length()
    }

    /// `(p-1)(p-2)...(p-n+1) p^{(N-1)(n-1)} / n!`.
    pub fn expected_class_count(&self) -> u64 {
        let (n, p, len) = (self.n as u64, self.p(), self.length() as u64);
        let falling: u64 = (1..n).map(|i| p - i).product();
        let fact: u64 = (1..=n).product();
        falling * p.pow(((len - 1) * (n - 1)) as u32) / fact
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LevelSide {
    /// Flat connections over `W_N`.
    N1,
    /// Level-`(N-1)` structures over `F_p`.
    OneN,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ATuple {
    entries: Vec<WittElem>,
}

impl ATuple {
    pub fn new(entries: Vec<WittElem>) -> Self {
        assert!(!entries.is_empty(), "tuples are nonempty");
        Self { entries }
    }

    pub fn from_ints(ring: WittRing, values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| ring.elem(v)).collect())
    }

    pub fn entries(&self) -> &[WittElem] {
        &self.entries
    }

    pub fn ring(&self) -> WittRing {
        self.entries[0].ring()
    }

    pub fn values(&self) -> Vec<u64> {
        self.entries.iter().map(WittElem::value).collect()
    }

    /// Residues mod `p` pairwise distinct.
    pub fn is_regular(&self) -> bool {
        let mut seen: Vec<u64> = self.entries.iter().map(WittElem::residue).collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }

    pub fn translate(&self, c: WittElem) -> Self {
        Self { entries: self.entries.iter().map(|&a| a + c).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ATupleClass {
    canonical: ATuple,
}

impl ATupleClass {
    pub fn canonical(&self) -> &ATuple {
        &self.canonical
    }

    pub fn values(&self) -> Vec<u64> {
        self.canonical.values()
    }

    pub fn n(&self) -> usize {
        self.canonical.entries.len()
    }

    /// Class of the reduction mod `p^{N'}`.
    pub fn truncate(&self, length: u32) -> Result<Self, WittError> {
        let entries = self.canonical.entries.iter().map(|a| a.truncate(length)).collect::<Result<Vec<_>, _>>()?;
        canonicalize(&ATuple::new(entries))
    }
}

fn sorted(t: &ATuple) -> ATuple {
    let mut e = t.entries.clone();
    e.sort();
    ATuple { entries: e }
}

/// Lexicographically minimal sorted translate.
pub fn canonicalize(t: &ATuple) -> Result<ATupleClass, WittError> {
    if !t.is_regular() {
        return Err(WittError::NotRegular);
    }
    let best = t.entries.iter().map(|&a| sorted(&t.translate(-a))).min().expect("nonempty");
    Ok(ATupleClass { canonical: best })
}

/// The class with canonical representative `values`, which must already be canonical.
pub fn class_from_canonical(ring: WittRing, values: &[i64]) -> Result<ATupleClass, WittError> {
    let t = ATuple::from_ints(ring, values);
    let class = canonicalize(&t)?;
    if class.canonical != t {
        return Err(WittError::Verification(format!("{values:?} is not canonical")));
    }
    Ok(class)
}

/// Data of a dormant oper attached to a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittOperData {
    class: ATupleClass,
    side: LevelSide,
    ring: WittRing,
    connection_matrix: Matrix<WittElem>,
    oper_flag: Matrix<WittElem>,
    flag_det: WittElem,
    miura_transverse: bool,
    structures: Vec<LevelStructure>,
}

impl WittOperData {
    pub fn class(&self) -> &ATupleClass {
        &self.class
    }

    pub fn side(&self) -> LevelSide {
        self.side
    }

    pub fn ring(&self) -> WittRing {
        self.ring
    }

    /// `diag(a)`, the coefficient of the lifted generator.
    pub fn connection_matrix(&self) -> &Matrix<WittElem> {
        &self.connection_matrix
    }

    /// Columns `v_j`, `j = 0..n`, spanning the oper flag from the last column on.
    pub fn oper_flag(&self) -> &Matrix<WittElem> {
        &self.oper_flag
    }

    pub fn flag_det(&self) -> WittElem {
        self.flag_det
    }

    pub fn flag_det_unit(&self) -> bool {
        self.flag_det.is_unit()
    }

    /// The coordinate flag is stable and in generic position.
    pub fn miura_transverse(&self) -> bool {
        self.miura_transverse
    }

    /// Level-`(N-1)` summands, on the `(1, N)` side.
    pub fn structures(&self) -> &[LevelStructure] {
        &self.structures
    }

    /// Connection matrix in the oper-flag basis, `F^{-1} diag(a) F`.
    pub fn matrix_in_flag_basis(&self) -> Result<Matrix<WittElem>, WittError> {
        let inv = self.oper_flag.try_inverse().ok_or(WittError::NotRegular)?;
        Ok(&(&inv * &self.connection_matrix) * &self.oper_flag)
    }
}

fn vandermonde_product(a: &[WittElem]) -> WittElem {
    let mut acc = a[0].one_like();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            acc = acc * (a[i] - a[j]);
        }
    }
    acc
}

/// Ranks of the leading spans `[v_{n-1}], [v_{n-1}, v_{n-2}], ...` mod `p`.
fn flag_ranks(flag: &Matrix<WittElem>) -> Vec<usize> {
    let n = flag.cols();
    let res = flag.residue();
    (1..=n).map(|k| Matrix::from_fn(n, k, |i, j| res[(i, n - 1 - j)].clone()).rank()).collect()
}

/// `det[e_1 .. e_{n-k}, v_{n-1} .. v_{n-k}]` is a unit for every `k`.
fn miura_generic_position(a: &Matrix<WittElem>, flag: &Matrix<WittElem>) -> bool {
    let n = flag.cols();
    let stable = (0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)].is_zero()));
    stable
        && (1..=n).all(|k| {
            let m = Matrix::from_fn(n, n, |i, j| {
                if j < n - k {
                    if i == j {
                        flag.template().one_like()
                    } else {
                        flag.template().zero_like()
                    }
                } else {
                    flag[(i, n - 1 - (j - (n - k)))]
                }
            });
            m.det().is_unit()
        })
}

/// Builds the oper from a regular tuple on the requested side.
pub fn build_witt_oper(ctx: &WittContext, t: &ATuple, side: LevelSide) -> Result<WittOperData, WittError> {
    if t.entries.len() != ctx.n || t.ring() != ctx.ring {
        return Err(WittError::BadShape { expected: ctx.n });
    }
    let class = canonicalize(t)?;
    let n = ctx.n;
    let a = class.canonical.entries.clone();
    let connection_matrix = Matrix::diagonal(&a);
    let (ring, oper_flag, structures) = match side {
        LevelSide::N1 => {
            let ones = vec![ctx.ring.one(); n];
            let mut cols = vec![ones];
            for _ in 1..n {
                let next = connection_matrix.mul_vec(cols.last().expect("nonempty"));
                cols.push(next);
            }
            cols.reverse();
            let flag = Matrix::from_fn(n, n, |i, j| cols[j][i]);
            (ctx.ring, flag, Vec::new())
        }
        LevelSide::OneN => {
            let fp = ctx.ring.with_length(1)?;
            let p = ctx.p();
            let flag = Matrix::from_fn(n, n, |i, j| fp.from_u64(lucas_binom(a[i].value(), (n - 1 - j) as u64, p)));
            let structures = a.iter().map(|&x| LevelStructure::new(x)).collect::<Result<Vec<_>, _>>()?;
            (fp, flag, structures)
        }
    };
    let flag_det = oper_flag.det();
    if !flag_det.is_unit() {
        return Err(WittError::NotRegular);
    }
    if side == LevelSide::N1 && flag_det != vandermonde_product(&a) {
        return Err(WittError::Verification("flag determinant differs from the difference product".into()));
    }
    if flag_ranks(&oper_flag) != (1..=n).collect::<Vec<_>>() {
        return Err(WittError::Verification("oper flag steps are not of rank one".into()));
    }
    let diag_ring = Matrix::diagonal(&a.iter().map(|x| ring.from_u64(x.value())).collect::<Vec<_>>());
    let miura_transverse = miura_generic_position(&diag_ring, &oper_flag);
    if !miura_transverse {
        return Err(WittError::Verification("Miura flag is not in generic position".into()));
    }
    Ok(WittOperData { class, side, ring, connection_matrix, oper_flag, flag_det, miura_transverse, structures })
}

/// The class of a dormant `d + A delta` over `W_N`, via Hensel lifting of the
/// eigenvalues of `A` and an explicit diagonalizing matrix.
pub fn decompose_dormant_matrix(a: &Matrix<WittElem>) -> Result<ATupleClass, WittError> {
    if !a.is_square() {
        return Err(WittError::BadShape { expected: a.rows() });
    }
    let n = a.rows();
    let ring = a.template().ring();
    let p = ring.p();
    let res = a.residue();
    if res.pow(p) != res {
        return Err(WittError::NotDormantModP);
    }
    let cp: Poly<WittElem> = a.charpoly();
    let mod_p_roots = (0..p).filter(|&r| cp.eval(&ring.from_u64(r)).residue() == 0).count();
    if mod_p_roots < n {
        return Err(WittError::RepeatedEigenvalues);
    }
    let roots = hensel_lift_roots(&cp).map_err(|e| match e {
        RingError::NonSeparableReduction | RingError::NonSplitReduction => WittError::RepeatedEigenvalues,
        other => WittError::Ring(other),
    })?;
    let id = Matrix::identity(n, &ring.one());
    let mut cols = Vec::with_capacity(n);
    for &lam in &roots {
        let adj = (a - &id.scale(&lam)).adjugate();
        let col = (0..n)
            .map(|j| adj.column(j))
            .find(|c| c.iter().any(WittElem::is_unit))
            .ok_or_else(|| WittError::Verification("no unimodular eigenvector".into()))?;
        cols.push(col);
    }
    let pm = Matrix::from_fn(n, n, |i, j| cols[j][i]);
    if !pm.det().is_unit() || (a * &pm) != (&pm * &Matrix::diagonal(&roots)) {
        return Err(WittError::Verification("eigenvector matrix does not diagonalize".into()));
    }
    canonicalize(&ATuple::new(roots))
}

fn canonical_candidates(ctx: &WittContext) -> Vec<ATuple> {
    let q = ctx.ring.modulus();
    let n = ctx.n;
    let mut out = Vec::new();
    let mut cur = vec![0u64];
    fn rec(cur: &mut Vec<u64>, n: usize, q: u64, out: &mut Vec<Vec<u64>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let start = cur.last().map_or(0, |&x| x + 1);
        for v in start..q {
            cur.push(v);
            rec(cur, n, q, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(&mut cur, n, q, &mut raw);
    for vals in raw {
        out.push(ATuple::new(vals.iter().map(|&v| ctx.ring.from_u64(v)).collect()));
    }
    out
}

/// All classes of regular tuples, in increasing canonical order.
pub fn theta_classify(ctx: &WittContext) -> Vec<ATupleClass> {
    canonical_candidates(ctx)
        .into_iter()
        .filter(ATuple::is_regular)
        .filter_map(|t| canonicalize(&t).ok().filter(|c| c.canonical == t))
        .collect()
}

/// Ordered regular tuples up to translation, normalized to first entry 0.
pub fn miura_classify(ctx: &WittContext) -> Vec<ATuple> {
    let q = ctx.ring.modulus();
    let n = ctx.n;
    let total = q.pow(n as u32 - 1);
    (0..total)
        .map(|idx| {
            let mut vals = vec![0u64];
            vals.extend((0..n - 1).rev().map(|k| (idx / q.pow(k as u32)) % q));
            ATuple::new(vals.iter().map(|&v| ctx.ring.from_u64(v)).collect())
        })
        .filter(ATuple::is_regular)
        .collect()
}

/// Fiber sizes of `miura_classify -> theta_classify`.
pub fn miura_fibers(ctx: &WittContext) -> Result<BTreeMap<ATupleClass, usize>, WittError> {
    let mut fibers = BTreeMap::new();
    for t in miura_classify(ctx) {
        *fibers.entry(canonicalize(&t)?).or_insert(0) += 1;
    }
    Ok(fibers)
}

/// `(N,1)`-data to `(1,N)`-data on the same class, after checking that the
/// diagonal reduction of every summand is `nabla_{a_i}^{(N-1)}`.
pub fn diagonal_reduce(ctx: &WittContext, d: &WittOperData, w: i64) -> Result<WittOperData, WittError> {
    if d.side != LevelSide::N1 {
        return Err(WittError::WrongSide { expected: LevelSide::N1 });
    }
    for &a in d.class.canonical.entries() {
        if !dop_local::verify_descent(a, w)? {
            return Err(WittError::Verification(format!("diagonal reduction of a = {a} failed")));
        }
    }
    build_witt_oper(ctx, &d.class.canonical, LevelSide::OneN)
}

/// The unique `(N,1)`-data reducing to `d`.
pub fn canonical_diagonal_lift(ctx: &WittContext, d: &WittOperData) -> Result<WittOperData, WittError> {
    if d.side != LevelSide::OneN {
        return Err(WittError::WrongSide { expected: LevelSide::OneN });
    }
    build_witt_oper(ctx, &d.class.canonical, LevelSide::N1)
}

/// Isomorphism class of a rank-one structure, identified with `a` in `Z/p^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConnElem {
    a: WittElem,
    side: LevelSide,
}

impl ConnElem {
    pub fn new(a: WittElem, side: LevelSide) -> Self {
        Self { a, side }
    }

    pub fn trivial(ring: WittRing, side: LevelSide) -> Self {
        Self { a: ring.zero(), side }
    }

    pub fn a(&self) -> WittElem {
        self.a
    }

    pub fn side(&self) -> LevelSide {
        self.side
    }

    pub fn from_structure(s: &LevelStructure) -> Self {
        Self { a: s.a(), side: LevelSide::OneN }
    }

    /// Order in the group.
    pub fn order(&self) -> u64 {
        let mut x = *self;
        let mut k = 1;
        while !x.a.is_zero() {
            x = conn_tensor(&x, self).expect("same side");
            k += 1;
        }
        k
    }
}

pub fn conn_tensor(x: &ConnElem, y: &ConnElem) -> Result<ConnElem, WittError> {
    if x.side != y.side || x.a.ring() != y.a.ring() {
        return Err(WittError::SideMismatch);
    }
    Ok(ConnElem { a: x.a + y.a, side: x.side })
}
