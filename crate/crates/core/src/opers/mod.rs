//! `PGL_n`-opers in normal form `nabla = d + (q_{-1} + v) delta` over a
//! curve with a chosen generator, their `p`-curvature, the dormant
//! classification, Miura fibers and the Hitchin-Mochizuki map `gamma_a`.
//!
//! With `M = q_{-1} + v`, the `p`-curvature evaluated on the dual vector
//! field is `M^p - H M` where `H` is the Hasse invariant of the generator.
//! Dormant opers over an ordinary curve with normalized generator (`H = 1`)
//! are exactly those with `M^p = M`; over a supersingular curve (`H = 0`)
//! they are those with `M` nilpotent.

use std::sync::Arc;

use rayon::prelude::*;

use crate::elliptic::{
    normalize_generator, pth_power_derivation, CurveModel, EllipticError, HasseValue, InvariantDifferential,
};
use crate::rings::{common_extension, FieldElem, FieldEmbedding, GaloisField, Matrix, PrimeModulus, Ring, RingError};
use crate::rootdata::{
    chi, chi_coeffs, kostant_matrix, kostant_section, q_minus, weyl_orbits, AdjointQuotientPoint, LieMatrix,
    RootDataError, RootDatum, TorusPoint, TraceConvention,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OperError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error("rank n = {n} must satisfy 2 <= n < p = {p}")]
    BadRank { n: usize, p: u64 },
    #[error("curve characteristic {curve} differs from the oper prime {oper}")]
    CharacteristicMismatch { curve: u64, oper: u64 },
    #[error("gauge transformation is singular")]
    Singular,
    #[error("oper is not dormant")]
    NotDormant,
    #[error("internal verification failed: {0}")]
    Verification(String),
}

/// Rank and prime for a family of `PGL_n`-opers.
///
/// [`OperContext::new`] enforces `2n < p`. [`OperContext::unguarded`] only
/// requires `n < p`, which is what the matrix computations need.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperContext {
    n: usize,
    modulus: PrimeModulus,
}

impl OperContext {
    pub fn new(n: usize, p: u64) -> Result<Self, OperError> {
        let modulus = PrimeModulus::with_guard(p, n)?;
        Self::checked(n, modulus)
    }

    pub fn unguarded(n: usize, p: u64) -> Result<Self, OperError> {
        Self::checked(n, PrimeModulus::new(p)?)
    }

    fn checked(n: usize, modulus: PrimeModulus) -> Result<Self, OperError> {
        if n < 2 || n as u64 >= modulus.p() {
            return Err(OperError::BadRank { n, p: modulus.p() });
        }
        Ok(Self { n, modulus })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u64 {
        self.modulus.p()
    }

    pub fn modulus(&self) -> &PrimeModulus {
        &self.modulus
    }

    pub fn datum(&self) -> RootDatum {
        RootDatum::pgl(self.n).expect("n >= 2")
    }
}

/// `nabla_{d, q_{-1} + kappa^{-1}(rho)}` on `curve` with dual generator of `generator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperSpec {
    curve: CurveModel,
    generator: InvariantDifferential,
    rho: AdjointQuotientPoint,
}

impl OperSpec {
    pub fn new(
        curve: CurveModel,
        generator: InvariantDifferential,
        rho: AdjointQuotientPoint,
    ) -> Result<Self, OperError> {
        FieldEmbedding::new(curve.field(), generator.field())?;
        if curve.p() != rho.coeffs()[0].field().p() {
            return Err(OperError::CharacteristicMismatch { curve: curve.p(), oper: rho.coeffs()[0].field().p() });
        }
        Ok(Self { curve, generator, rho })
    }

    pub fn curve(&self) -> &CurveModel {
        &self.curve
    }

    pub fn generator(&self) -> &InvariantDifferential {
        &self.generator
    }

    pub fn rho(&self) -> &AdjointQuotientPoint {
        &self.rho
    }

    /// `q_{-1} + kappa^{-1}(rho)`.
    pub fn connection(&self) -> Result<LieMatrix, OperError> {
        Ok(kostant_section(&self.rho)?)
    }

    pub fn hasse(&self) -> Result<HasseValue, OperError> {
        Ok(pth_power_derivation(&self.curve, &self.generator)?)
    }
}

/// `nabla_{d, q_{-1} + mu}` with `mu` a torus point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MiuraSpec {
    mu: TorusPoint,
    degenerate: bool,
}

impl MiuraSpec {
    pub fn mu(&self) -> &TorusPoint {
        &self.mu
    }

    /// Set for the single point returned over a supersingular curve.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn connection(&self) -> LieMatrix {
        let diag = self.mu.to_sl_diagonal();
        let m = diag.entries() + &q_minus(self.mu.coords().len(), diag.entries().template());
        LieMatrix::new(m, TraceConvention::Sl).expect("trace zero")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PCurvatureValue {
    matrix: LieMatrix,
}

impl PCurvatureValue {
    pub fn matrix(&self) -> &LieMatrix {
        &self.matrix
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.entries().is_zero()
    }
}

fn embed_matrix(m: &LieMatrix, e: &FieldEmbedding) -> LieMatrix {
    LieMatrix::new(m.entries().map(|x| e.map(x)), m.convention()).expect("embedding preserves trace")
}

/// `M^p - H M`, computed over a field containing both `M` and `H`.
pub fn p_curvature(v: &LieMatrix, h: &HasseValue) -> Result<PCurvatureValue, OperError> {
    let (_, ev, eh) = common_extension(v.field(), h.value().field())?;
    let m = embed_matrix(v, &ev);
    let hv = eh.map(h.value());
    let p = m.field().p();
    let psi = m.entries().pow(p) - m.entries().scale(&hv);
    Ok(PCurvatureValue { matrix: LieMatrix::new(psi, m.convention()).expect("p-curvature is traceless") })
}

fn p_curvature_zero(m: &Matrix<FieldElem>, h: &FieldElem) -> bool {
    let p = m.template().field().p();
    (m.pow(p) - m.scale(h)).is_zero()
}

pub fn is_dormant(spec: &OperSpec) -> Result<bool, OperError> {
    Ok(p_curvature(&spec.connection()?, &spec.hasse()?)?.is_zero())
}

/// `chi(psi) = 0`.
pub fn is_p_nilpotent(spec: &OperSpec) -> Result<bool, OperError> {
    let psi = p_curvature(&spec.connection()?, &spec.hasse()?)?;
    Ok(chi(psi.matrix()).is_zero())
}

/// `h v h^{-1}`.
pub fn gauge_transform(v: &LieMatrix, h: &Matrix<FieldElem>) -> Result<LieMatrix, OperError> {
    let inv = h.try_inverse().ok_or(OperError::Singular)?;
    Ok(LieMatrix::new(&(h * v.entries()) * &inv, v.convention())?)
}

/// All points of `c(F)` in lexicographic order of packed coefficient indices.
pub fn quotient_points(field: &Arc<GaloisField>, n: usize) -> impl ParallelIterator<Item = AdjointQuotientPoint> + '_ {
    let dim = TraceConvention::Sl.quotient_dim(n);
    let q = field.order();
    let total = q.pow(dim as u32);
    (0..total).into_par_iter().map(move |idx| {
        let coeffs = (0..dim).rev().map(|k| field.from_index((idx / q.pow(k as u32)) % q)).collect();
        AdjointQuotientPoint::new(coeffs, n, TraceConvention::Sl).expect("length matches")
    })
}

/// `{rho in c(F) : p-curvature of q_{-1} + kappa^{-1}(rho) with Hasse value h vanishes}`.
pub fn dormant_locus(
    field: &Arc<GaloisField>,
    ctx: &OperContext,
    h: &FieldElem,
) -> Result<Vec<AdjointQuotientPoint>, OperError> {
    if field.p() != ctx.p() {
        return Err(OperError::CharacteristicMismatch { curve: field.p(), oper: ctx.p() });
    }
    let h = FieldEmbedding::new(h.field(), field)?.map(h);
    let one = field.one();
    let found: Result<Vec<Option<AdjointQuotientPoint>>, OperError> = quotient_points(field, ctx.n)
        .map(|rho| {
            let m = kostant_matrix(rho.coeffs(), ctx.n, TraceConvention::Sl, &one)?;
            Ok(p_curvature_zero(&m, &h).then_some(rho))
        })
        .collect();
    Ok(found?.into_iter().flatten().collect())
}

/// Outcome of the exhaustive sweep over `c(F_{p^2})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementCheck {
    pub field_order: u64,
    pub swept: u64,
    pub dormant_found: usize,
    pub agrees: bool,
}

/// Upper bound on the number of points swept by the complement check.
pub const COMPLEMENT_SWEEP_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone)]
pub struct Classification {
    pub curve: CurveModel,
    pub n: usize,
    pub canonical_hasse: HasseValue,
    pub generator: InvariantDifferential,
    pub normalized: bool,
    pub classes: Vec<OperSpec>,
    pub complement: Option<ComplementCheck>,
}

impl Classification {
    pub fn is_supersingular(&self) -> bool {
        !self.canonical_hasse.is_unit()
    }
}

/// Dormant opers on `curve`: one per class of `t_reg(F_p)/W` for ordinary
/// curves (after normalizing the generator), the single point `rho = 0` for
/// supersingular ones. Every class is checked to be dormant, and the set is
/// compared against an exhaustive sweep of `c(F_{p^2})` when that is small
/// enough.
pub fn classify_dormant(curve: &CurveModel, ctx: &OperContext) -> Result<Classification, OperError> {
    if curve.p() != ctx.p() {
        return Err(OperError::CharacteristicMismatch { curve: curve.p(), oper: ctx.p() });
    }
    let canonical = curve.canonical_differential();
    let canonical_hasse = pth_power_derivation(curve, &canonical)?;
    let fp = GaloisField::prime(ctx.p())?;
    let (generator, normalized, h, rhos) = if canonical_hasse.is_unit() {
        let generator = normalize_generator(curve, &canonical)?;
        let rhos: Vec<AdjointQuotientPoint> =
            weyl_orbits(&ctx.datum(), ctx.modulus())?.iter().map(|orbit| orbit[0].chi()).collect();
        (generator, true, fp.one(), rhos)
    } else {
        (canonical, false, fp.zero(), vec![AdjointQuotientPoint::zero(&fp, ctx.n, TraceConvention::Sl)])
    };
    let mut rhos = rhos;
    rhos.sort();

    let generator_h = pth_power_derivation(curve, &generator)?;
    let expected = if normalized { generator_h.value().is_one() } else { generator_h.value().is_zero() };
    if !expected {
        return Err(OperError::Verification("generator Hasse value".into()));
    }

    let mut classes = Vec::with_capacity(rhos.len());
    for rho in rhos {
        let spec = OperSpec::new(curve.clone(), generator.clone(), rho)?;
        if !p_curvature(&spec.connection()?, &generator_h)?.is_zero() {
            return Err(OperError::Verification(format!("class {} is not dormant", spec.rho)));
        }
        classes.push(spec);
    }

    let f2 = GaloisField::extension(ctx.p(), 2)?;
    let swept = f2.order().pow(TraceConvention::Sl.quotient_dim(ctx.n) as u32);
    let complement = if swept <= COMPLEMENT_SWEEP_LIMIT {
        let locus = dormant_locus(&f2, ctx, &h)?;
        let emb = FieldEmbedding::new(&fp, &f2)?;
        let mut embedded: Vec<Vec<u64>> =
            classes.iter().map(|c| c.rho.coeffs().iter().map(|x| emb.map(x).to_index()).collect()).collect();
        embedded.sort();
        let found: Vec<Vec<u64>> = locus.iter().map(AdjointQuotientPoint::indices).collect();
        Some(ComplementCheck { field_order: f2.order(), swept, dormant_found: locus.len(), agrees: found == embedded })
    } else {
        None
    };
    Ok(Classification { curve: curve.clone(), n: ctx.n, canonical_hasse, generator, normalized, classes, complement })
}

/// Miura opers over a dormant oper: all regular `mu` with `chi(mu) = rho`.
pub fn miura_fiber(spec: &OperSpec, ctx: &OperContext) -> Result<Vec<MiuraSpec>, OperError> {
    if !is_dormant(spec)? {
        return Err(OperError::NotDormant);
    }
    let fp = GaloisField::prime(ctx.p())?;
    if !spec.hasse()?.is_unit() {
        let datum = ctx.datum();
        let mu = TorusPoint::new(&datum, vec![fp.zero(); ctx.n]);
        return Ok(vec![MiuraSpec { mu, degenerate: true }]);
    }
    let rho = spec.rho.coeffs();
    if !rho.iter().all(FieldElem::is_in_prime_field) {
        return Ok(Vec::new());
    }
    let target: Vec<u64> = spec.rho.indices();
    let datum = ctx.datum();
    let fiber: Vec<MiuraSpec> = crate::rootdata::regular_points(&datum, ctx.modulus())?
        .into_iter()
        .filter(|mu| mu.chi().indices() == target)
        .map(|mu| MiuraSpec { mu, degenerate: false })
        .collect();
    for m in &fiber {
        let c = m.connection();
        if chi(&c).indices() != target || !p_curvature_zero(c.entries(), &fp.one()) {
            return Err(OperError::Verification(format!("Miura lift {} is not dormant over rho", m.mu)));
        }
    }
    Ok(fiber)
}

/// `chi(M^p - a M)` for `M = q_{-1} + kappa^{-1}(rho)`, over any commutative ring.
pub fn hm_gamma_coeffs<R: Ring>(a: &R, rho: &[R], n: usize, p: u64) -> Result<Vec<R>, OperError> {
    let m = kostant_matrix(rho, n, TraceConvention::Sl, a)?;
    let psi = m.pow(p) - m.scale(a);
    Ok(chi_coeffs(&psi, TraceConvention::Sl))
}

pub fn hm_gamma(a: &FieldElem, rho: &AdjointQuotientPoint) -> Result<AdjointQuotientPoint, OperError> {
    let p = a.field().p();
    let coeffs = hm_gamma_coeffs(a, rho.coeffs(), rho.n(), p)?;
    Ok(AdjointQuotientPoint::new(coeffs, rho.n(), TraceConvention::Sl)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::{parse_curve, NodeModel};
    use crate::rings::Poly;

    fn fmat(f: &Arc<GaloisField>, rows: &[&[i64]]) -> Matrix<FieldElem> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect())
    }

    fn hasse_one(f: &Arc<GaloisField>) -> HasseValue {
        let node = CurveModel::Node(NodeModel::over(f).unwrap());
        pth_power_derivation(&node, &node.canonical_differential()).unwrap()
    }

    #[test]
    fn p_curvature_examples() {
        let f5 = GaloisField::prime(5).unwrap();
        let gl = |rows: &[&[i64]]| LieMatrix::new(fmat(&f5, rows), TraceConvention::Gl).unwrap();
        assert!(p_curvature(&gl(&[&[1, 0], &[0, 2]]), &hasse_one(&f5)).unwrap().is_zero());
        let psi = p_curvature(&gl(&[&[1, 1], &[0, 1]]), &hasse_one(&f5)).unwrap();
        assert_eq!(*psi.matrix().entries(), fmat(&f5, &[&[0, -1], &[0, 0]]));
        let ss = parse_curve("p=5 A=0 B=1").unwrap();
        let h0 = pth_power_derivation(&ss, &ss.canonical_differential()).unwrap();
        let qm = LieMatrix::new(q_minus(3, &f5.one()), TraceConvention::Sl).unwrap();
        assert!(p_curvature(&qm, &h0).unwrap().is_zero());
    }

    #[test]
    fn classify_examples() {
        let ctx = OperContext::new(2, 5).unwrap();
        let node = parse_curve("node p=5").unwrap();
        let c = classify_dormant(&node, &ctx).unwrap();
        assert_eq!(c.classes.len(), 2);
        assert!(c.complement.unwrap().agrees);

        let ss = parse_curve("p=5 A=0 B=1").unwrap();
        let c = classify_dormant(&ss, &ctx).unwrap();
        assert_eq!(c.classes.len(), 1);
        assert!(c.classes[0].rho().is_zero());
        assert!(c.complement.unwrap().agrees);
        assert_eq!(miura_fiber(&c.classes[0], &ctx).unwrap().len(), 1);
    }

    #[test]
    fn pgl3_over_p7_has_five_classes_with_six_lifts() {
        let ctx = OperContext::new(3, 7).unwrap();
        let node = parse_curve("node p=7").unwrap();
        let c = classify_dormant(&node, &ctx).unwrap();
        assert_eq!(c.classes.len(), 5);
        for spec in &c.classes {
            assert_eq!(miura_fiber(spec, &ctx).unwrap().len(), 6);
        }
    }

    #[test]
    fn dormancy_fails_off_the_locus() {
        let ctx = OperContext::new(2, 5).unwrap();
        let f25 = GaloisField::extension(5, 2).unwrap();
        let locus = dormant_locus(&f25, &ctx, &f25.one()).unwrap();
        assert_eq!(locus.len(), 2);
        // rho = 2 gives t^2 + 2, irreducible over F_5
        let node = parse_curve("node p=5").unwrap();
        let rho = AdjointQuotientPoint::new(vec![f25.from_i64(2)], 2, TraceConvention::Sl).unwrap();
        let spec = OperSpec::new(node.clone(), node.canonical_differential(), rho).unwrap();
        assert!(!is_dormant(&spec).unwrap());
        assert!(miura_fiber(&spec, &ctx).is_err());
    }

    #[test]
    fn gauge_examples() {
        let f5 = GaloisField::prime(5).unwrap();
        // companion of (t-1)(t-2) = t^2 - 3t + 2
        let comp = LieMatrix::new(fmat(&f5, &[&[0, -2], &[1, 3]]), TraceConvention::Gl).unwrap();
        // columns are eigenvectors (-2, 1) for 1 and (-1, 1) for 2
        let v = fmat(&f5, &[&[-2, -1], &[1, 1]]);
        let vinv = v.try_inverse().unwrap();
        let d = gauge_transform(&comp, &vinv).unwrap();
        assert_eq!(*d.entries(), fmat(&f5, &[&[1, 0], &[0, 2]]));
        assert_eq!(gauge_transform(&comp, &Matrix::identity(2, &f5.one())).unwrap(), comp);
        assert_eq!(gauge_transform(&comp, &fmat(&f5, &[&[1, 1], &[1, 1]])), Err(OperError::Singular));
    }

    #[test]
    fn hm_gamma_basics() {
        let f5 = GaloisField::prime(5).unwrap();
        for a in 0..5 {
            let zero = AdjointQuotientPoint::zero(&f5, 3, TraceConvention::Sl);
            assert!(hm_gamma(&f5.from_i64(a), &zero).unwrap().is_zero());
        }
        for d in 0..5 {
            let rho = AdjointQuotientPoint::new(vec![f5.from_i64(d)], 2, TraceConvention::Sl).unwrap();
            assert_eq!(hm_gamma(&f5.zero(), &rho).unwrap(), rho.frobenius());
        }
    }

    #[test]
    fn hm_gamma_degree_p_in_rho() {
        let f5 = GaloisField::prime(5).unwrap();
        let d = Poly::x(&f5.one());
        let a = Poly::constant(f5.from_i64(3));
        let gamma = hm_gamma_coeffs(&a, &[d], 2, 5).unwrap();
        assert_eq!(gamma[0].degree(), Some(5));
    }
}
