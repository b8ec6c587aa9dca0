//! Type-A matrix realization: principal `sl_2`-triple, adjoint quotient map
//! `chi` and the Kostant section.
//!
//! Conventions. `q_{-1}` has ones on the subdiagonal, `q_1` carries
//! `i(n-i)` in superdiagonal position `(i-1, i)`, and
//! `2rho = diag(n-1, n-3, ..., 1-n)`. The slice `g^{ad q_1}` is spanned by
//! `q_1, ..., q_1^{n-1}` (together with `I` in the `gl_n` convention), so the
//! Kostant section is `q_{-1} + sum c_k q_1^k`.
//!
//! Under `sl_n`, `chi` records the coefficients of `t^{n-2}, ..., t^0` of
//! `det(tI - M)`. Under `gl_n`, it records the elementary symmetric functions
//! `e_1, ..., e_n` of the eigenvalues.

use std::fmt;
use std::sync::Arc;

use super::{RootDataError, RootDatum, TorusPoint};
use crate::rings::{FieldElem, GaloisField, Matrix, Poly, PrimeModulus, Ring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TraceConvention {
    Gl,
    Sl,
    /// `pgl_n` identified with `sl_n`; valid when `p` does not divide `n`.
    PglAsSl,
}

impl TraceConvention {
    fn first_index(self) -> usize {
        match self {
            TraceConvention::Gl => 1,
            _ => 2,
        }
    }

    /// Number of adjoint quotient coordinates for matrix size `n`.
    pub fn quotient_dim(self, n: usize) -> usize {
        n + 1 - self.first_index()
    }
}

/// An `n x n` matrix over a finite field tagged with its trace convention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieMatrix {
    entries: Matrix<FieldElem>,
    convention: TraceConvention,
}

impl LieMatrix {
    pub fn new(entries: Matrix<FieldElem>, convention: TraceConvention) -> Result<Self, RootDataError> {
        assert!(entries.is_square(), "Lie algebra elements are square");
        if convention != TraceConvention::Gl && !entries.trace().is_zero() {
            return Err(RootDataError::TraceNonzero);
        }
        Ok(Self { entries, convention })
    }

    pub fn entries(&self) -> &Matrix<FieldElem> {
        &self.entries
    }

    pub fn into_entries(self) -> Matrix<FieldElem> {
        self.entries
    }

    pub fn convention(&self) -> TraceConvention {
        self.convention
    }

    pub fn n(&self) -> usize {
        self.entries.rows()
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        self.entries.template().field()
    }

    pub fn bracket(&self, other: &Self) -> Self {
        Self { entries: self.entries.bracket(&other.entries), convention: self.convention }
    }
}

/// Point of the adjoint quotient `c = g//G`, in the coordinates of [`chi`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdjointQuotientPoint {
    coeffs: Vec<FieldElem>,
    n: usize,
    convention_gl: bool,
}

impl AdjointQuotientPoint {
    pub fn new(coeffs: Vec<FieldElem>, n: usize, convention: TraceConvention) -> Result<Self, RootDataError> {
        let expected = convention.quotient_dim(n);
        if coeffs.len() != expected {
            return Err(RootDataError::WrongLength { expected, got: coeffs.len() });
        }
        Ok(Self { coeffs, n, convention_gl: convention == TraceConvention::Gl })
    }

    pub fn zero(field: &Arc<GaloisField>, n: usize, convention: TraceConvention) -> Self {
        let coeffs = vec![field.zero(); convention.quotient_dim(n)];
        Self { coeffs, n, convention_gl: convention == TraceConvention::Gl }
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn convention(&self) -> TraceConvention {
        if self.convention_gl {
            TraceConvention::Gl
        } else {
            TraceConvention::Sl
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Ring::is_zero)
    }

    /// Coefficientwise Frobenius `x -> x^p`.
    pub fn frobenius(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(FieldElem::frobenius).collect(), ..self.clone() }
    }

    pub fn indices(&self) -> Vec<u64> {
        self.coeffs.iter().map(FieldElem::to_index).collect()
    }
}

impl fmt::Display for AdjointQuotientPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn coordinate<R: Ring>(cp: &Poly<R>, n: usize, j: usize, convention: TraceConvention) -> R {
    let c = cp.coeff(n - j);
    if convention == TraceConvention::Gl && j % 2 == 1 {
        -c
    } else {
        c
    }
}

/// `chi` on an arbitrary square matrix over any commutative ring.
pub fn chi_coeffs<R: Ring>(m: &Matrix<R>, convention: TraceConvention) -> Vec<R> {
    let n = m.rows();
    let cp = m.charpoly();
    (convention.first_index()..=n).map(|j| coordinate(&cp, n, j, convention)).collect()
}

pub fn chi(m: &LieMatrix) -> AdjointQuotientPoint {
    AdjointQuotientPoint {
        coeffs: chi_coeffs(&m.entries, m.convention),
        n: m.n(),
        convention_gl: m.convention == TraceConvention::Gl,
    }
}

/// `chi` for an element of the Lie algebra of `datum`; only type A is realized.
pub fn chi_in(datum: &RootDatum, m: &LieMatrix) -> Result<AdjointQuotientPoint, RootDataError> {
    let n = datum.matrix_size()?;
    if n != m.n() {
        return Err(RootDataError::WrongLength { expected: n, got: m.n() });
    }
    Ok(chi(m))
}

pub fn q_minus<R: Ring>(n: usize, template: &R) -> Matrix<R> {
    Matrix::from_fn(n, n, |i, j| if i == j + 1 { template.one_like() } else { template.zero_like() })
}

pub fn q_plus<R: Ring>(n: usize, template: &R) -> Matrix<R> {
    Matrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            template.lift_i64(((i + 1) * (n - i - 1)) as i64)
        } else {
            template.zero_like()
        }
    })
}

pub fn two_rho_check<R: Ring>(n: usize, template: &R) -> Matrix<R> {
    Matrix::from_fn(
        n,
        n,
        |i, j| {
            if i == j {
                template.lift_i64(n as i64 - 1 - 2 * i as i64)
            } else {
                template.zero_like()
            }
        },
    )
}

/// `(q_{-1}, 2rho, q_1)` for `sl_n`; requires `2n < p`.
pub fn sl2_triple(n: usize, p: &PrimeModulus) -> Result<(LieMatrix, LieMatrix, LieMatrix), RootDataError> {
    p.check_coxeter(n)?;
    let fp = GaloisField::prime(p.p())?;
    let one = fp.one();
    let wrap = |m| LieMatrix::new(m, TraceConvention::Sl);
    Ok((wrap(q_minus(n, &one))?, wrap(two_rho_check(n, &one))?, wrap(q_plus(n, &one))?))
}

/// `q_{-1} + sum c_k q_1^k` with `chi = coeffs`, over any commutative ring in
/// which the leading constants of the triangular system are units.
pub fn kostant_matrix<R: Ring>(
    coeffs: &[R],
    n: usize,
    convention: TraceConvention,
    template: &R,
) -> Result<Matrix<R>, RootDataError> {
    let expected = convention.quotient_dim(n);
    if coeffs.len() != expected {
        return Err(RootDataError::WrongLength { expected, got: coeffs.len() });
    }
    let qm = q_minus(n, template);
    let qp = q_plus(n, template);
    let mut m = qm.clone();
    for (target, j) in coeffs.iter().zip(convention.first_index()..=n) {
        let basis = qp.pow(j as u64 - 1);
        let lead = coordinate(&(&qm + &basis).charpoly(), n, j, convention);
        let inv = lead.try_inv().ok_or(RootDataError::KostantDegenerate { index: j })?;
        let current = coordinate(&m.charpoly(), n, j, convention);
        let c = (target.clone() - current) * inv;
        m = &m + &basis.scale(&c);
    }
    debug_assert!(chi_coeffs(&m, convention) == coeffs);
    Ok(m)
}

pub fn kostant_section(rho: &AdjointQuotientPoint) -> Result<LieMatrix, RootDataError> {
    let convention = rho.convention();
    let template = rho.coeffs.first().ok_or(RootDataError::WrongLength { expected: 1, got: 0 })?;
    let m = kostant_matrix(&rho.coeffs, rho.n, convention, template)?;
    LieMatrix::new(m, convention)
}

impl TorusPoint {
    /// Trace-zero diagonal representative of a type-A point.
    pub fn to_sl_diagonal(&self) -> LieMatrix {
        let n = self.coords().len();
        let field = self.coords()[0].field();
        let n_inv = field.from_i64(n as i64).inv().expect("p does not divide n");
        let mean = self.coords().iter().fold(field.zero(), |a, b| a + b.clone()) * n_inv;
        let diag: Vec<FieldElem> = self.coords().iter().map(|c| c.clone() - mean.clone()).collect();
        LieMatrix::new(Matrix::diagonal(&diag), TraceConvention::Sl).expect("trace zero by construction")
    }

    /// Image under `chi` of the trace-zero diagonal representative.
    pub fn chi(&self) -> AdjointQuotientPoint {
        chi(&self.to_sl_diagonal())
    }
}
