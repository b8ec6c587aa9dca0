//! Weierstrass curves over `F_q`, the nodal multiplicative model, invariant
//! differentials and the Hasse invariant.
//!
//! The Hasse invariant of a differential `delta` is the scalar `H` with
//! `(delta^v)^p = H * delta^v`, where `delta^v` is the dual vector field.
//! [`pth_power_derivation`] computes it by iterating the derivation exactly
//! on the affine coordinate ring; [`hasse_deuring`] and
//! [`is_supersingular_by_count`] are independent checks.

mod functions;
mod parse;

pub use parse::parse_curve;

use std::sync::Arc;

use functions::CoordinateRing;

use crate::rings::{
    find_root_of_unity_scale, FieldElem, FieldEmbedding, GaloisField, Poly, PrimeModulus, Ring, RingError,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EllipticError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("curve is singular (discriminant vanishes)")]
    Singular,
    #[error("characteristic {0} is not supported; p must be at least 5")]
    SmallCharacteristic(u64),
    #[error("unsupported curve form: {0}")]
    UnsupportedForm(&'static str),
    #[error("curve is supersingular; no normalization exists")]
    Supersingular,
    #[error("differential scale must be a unit")]
    ScaleNotUnit,
    #[error("cannot parse curve `{input}`: {reason}")]
    Parse { input: String, reason: String },
    #[error("p-th power of the derivation is not proportional to it")]
    NotProportional,
}

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over a finite field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    field: Arc<GaloisField>,
    a: [FieldElem; 5],
}

impl WeierstrassCurve {
    /// Long form from `[a1, a2, a3, a4, a6]`.
    pub fn long(field: &Arc<GaloisField>, a: [FieldElem; 5]) -> Result<Self, EllipticError> {
        let p = field.p();
        if p < 5 {
            return Err(EllipticError::SmallCharacteristic(p));
        }
        let curve = Self { field: Arc::clone(field), a };
        if curve.discriminant().is_zero() {
            return Err(EllipticError::Singular);
        }
        Ok(curve)
    }

    /// `y^2 = x^3 + A x + B`.
    pub fn short(field: &Arc<GaloisField>, a: FieldElem, b: FieldElem) -> Result<Self, EllipticError> {
        let z = field.zero();
        Self::long(field, [z.clone(), z.clone(), z, a, b])
    }

    pub fn short_from_ints(p: u64, a: i64, b: i64) -> Result<Self, EllipticError> {
        let f = GaloisField::prime(p)?;
        Self::short(&f, f.from_i64(a), f.from_i64(b))
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        &self.field
    }

    pub fn coefficients(&self) -> &[FieldElem; 5] {
        &self.a
    }

    pub fn is_short(&self) -> bool {
        self.a[0].is_zero() && self.a[1].is_zero() && self.a[2].is_zero()
    }

    pub fn discriminant(&self) -> FieldElem {
        let [a1, a2, a3, a4, a6] = self.a.clone();
        let k = |v: i64| self.field.from_i64(v);
        let b2 = a1.clone() * a1.clone() + k(4) * a2.clone();
        let b4 = k(2) * a4.clone() + a1.clone() * a3.clone();
        let b6 = a3.clone() * a3.clone() + k(4) * a6.clone();
        let b8 = a1.clone() * a1.clone() * a6.clone() + k(4) * a2.clone() * a6 - a1 * a3.clone() * a4.clone()
            + a2 * a3.clone() * a3
            - a4.clone() * a4;
        -(b2.clone() * b2.clone() * b8) - k(8) * b4.clone() * b4.clone() * b4.clone() - k(27) * b6.clone() * b6.clone()
            + k(9) * b2 * b4 * b6
    }

    /// `x^3 + a2 x^2 + a4 x + a6`.
    pub fn cubic(&self) -> Poly<FieldElem> {
        Poly::new(vec![self.a[4].clone(), self.a[3].clone(), self.a[1].clone(), self.field.one()])
    }

    /// `a1 x + a3`.
    pub fn linear(&self) -> Poly<FieldElem> {
        Poly::new(vec![self.a[2].clone(), self.a[0].clone()])
    }

    pub fn base_change(&self, e: &FieldEmbedding) -> Self {
        Self { field: Arc::clone(e.target()), a: self.a.clone().map(|c| e.map(&c)) }
    }
}

/// The 2-pointed projective line with coordinate `s` and generator `s d/ds`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeModel {
    field: Arc<GaloisField>,
}

impl NodeModel {
    pub fn new(p: u64) -> Result<Self, EllipticError> {
        PrimeModulus::new(p)?;
        if p < 5 {
            return Err(EllipticError::SmallCharacteristic(p));
        }
        Ok(Self { field: GaloisField::prime(p)? })
    }

    pub fn over(field: &Arc<GaloisField>) -> Result<Self, EllipticError> {
        if field.p() < 5 {
            return Err(EllipticError::SmallCharacteristic(field.p()));
        }
        Ok(Self { field: Arc::clone(field) })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurveModel {
    Weierstrass(WeierstrassCurve),
    Node(NodeModel),
}

impl CurveModel {
    pub fn field(&self) -> &Arc<GaloisField> {
        match self {
            CurveModel::Weierstrass(c) => &c.field,
            CurveModel::Node(n) => &n.field,
        }
    }

    pub fn p(&self) -> u64 {
        self.field().p()
    }

    pub fn base_change(&self, e: &FieldEmbedding) -> Self {
        match self {
            CurveModel::Weierstrass(c) => CurveModel::Weierstrass(c.base_change(e)),
            CurveModel::Node(_) => CurveModel::Node(NodeModel { field: Arc::clone(e.target()) }),
        }
    }

    /// The differential `dx/(2y + a1 x + a3)`, resp. `ds/s`.
    pub fn canonical_differential(&self) -> InvariantDifferential {
        InvariantDifferential { scale: self.field().one() }
    }

    /// Human-readable description used in certificates.
    pub fn describe(&self) -> String {
        match self {
            CurveModel::Node(n) => format!("node p={}", n.field.p()),
            CurveModel::Weierstrass(c) => {
                let names = ["a1", "a2", "a3", "a4", "a6"];
                let coeffs: Vec<String> = names.iter().zip(&c.a).map(|(n, v)| format!("{n}={v}")).collect();
                let deg = if c.field.degree() > 1 { format!(" d={}", c.field.degree()) } else { String::new() };
                format!("p={}{deg} {}", c.field.p(), coeffs.join(" "))
            }
        }
    }
}

/// `lambda` times the canonical differential; `lambda` may live in an
/// extension of the curve's field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantDifferential {
    scale: FieldElem,
}

impl InvariantDifferential {
    pub fn new(scale: FieldElem) -> Result<Self, EllipticError> {
        if scale.is_zero() {
            return Err(EllipticError::ScaleNotUnit);
        }
        Ok(Self { scale })
    }

    pub fn scale(&self) -> &FieldElem {
        &self.scale
    }

    pub fn field(&self) -> &Arc<GaloisField> {
        self.scale.field()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseValue {
    h: FieldElem,
}

impl HasseValue {
    pub fn value(&self) -> &FieldElem {
        &self.h
    }

    pub fn is_unit(&self) -> bool {
        !self.h.is_zero()
    }
}

/// The curve over the field of `delta`, which must contain the curve's field.
fn curve_in_field(curve: &CurveModel, field: &Arc<GaloisField>) -> Result<CurveModel, EllipticError> {
    if curve.field() == field {
        return Ok(curve.clone());
    }
    let e = FieldEmbedding::new(curve.field(), field)?;
    Ok(curve.base_change(&e))
}

/// `H` with `(delta^v)^p = H * delta^v`, by iterating the derivation `p` times.
pub fn pth_power_derivation(curve: &CurveModel, delta: &InvariantDifferential) -> Result<HasseValue, EllipticError> {
    let curve = curve_in_field(curve, delta.field())?;
    let c = delta.scale.inv().ok_or(EllipticError::ScaleNotUnit)?;
    let p = curve.p();
    match &curve {
        CurveModel::Node(_) => {
            // (c s d/ds) acts on s^k by c k.
            let on_s = |k: i64| {
                let kf = c.lift_i64(k);
                let mut v = c.one_like();
                for _ in 0..p {
                    v = v * c.clone() * kf.clone();
                }
                (v, c.clone() * kf)
            };
            let (iter, once) = on_s(1);
            let h = iter * once.inv().expect("c is a unit");
            for k in 2..p as i64 {
                let (iter_k, once_k) = on_s(k);
                if iter_k != h.clone() * once_k {
                    return Err(EllipticError::NotProportional);
                }
            }
            Ok(HasseValue { h })
        }
        CurveModel::Weierstrass(w) => {
            let ring = CoordinateRing::new(w);
            let x = ring.x();
            let y = ring.y();
            let dx = ring.derive(&x).scale(&c);
            let dy = ring.derive(&y).scale(&c);
            let mut fx = x;
            let mut fy = y;
            for _ in 0..p {
                fx = ring.derive(&fx).scale(&c);
                fy = ring.derive(&fy).scale(&c);
            }
            let h = ring.ratio(&fx, &dx).ok_or(EllipticError::NotProportional)?;
            if fy != dy.scale(&h) {
                return Err(EllipticError::NotProportional);
            }
            Ok(HasseValue { h })
        }
    }
}

/// Coefficient of `x^{p-1}` in `f^{(p-1)/2}`, where `y^2 = f` after
/// completing the square.
pub fn hasse_deuring(curve: &WeierstrassCurve) -> Result<HasseValue, EllipticError> {
    let p = curve.field.p();
    if p <= 3 {
        return Err(EllipticError::UnsupportedForm("long form in characteristic at most 3"));
    }
    let g = curve.linear();
    let quarter = curve.field.from_i64(4).inv().expect("p odd");
    let f = curve.cubic() + (g.clone() * g).scale(&quarter);
    let power = Ring::pow(&f, (p - 1) / 2);
    Ok(HasseValue { h: power.coeff(p as usize - 1) })
}

/// `#E(F_q)` by enumerating `x` and the quadratic character of the
/// discriminant in `y`.
pub fn count_points(curve: &WeierstrassCurve) -> u64 {
    let q = curve.field.order();
    let f = curve.cubic();
    let g = curve.linear();
    let four = curve.field.from_i64(4);
    let e = (q - 1) / 2;
    let affine: u64 = curve
        .field
        .elements()
        .map(|x| {
            let gx = g.eval(&x);
            let disc = gx.clone() * gx + four.clone() * f.eval(&x);
            if disc.is_zero() {
                1
            } else if Ring::pow(&disc, e).is_one() {
                2
            } else {
                0
            }
        })
        .sum();
    affine + 1
}

/// Supersingularity via `#E(F_q) = 1 mod p`.
pub fn is_supersingular_by_count(curve: &WeierstrassCurve) -> bool {
    count_points(curve) % curve.field.p() == 1
}

pub fn is_ordinary(curve: &CurveModel) -> Result<bool, EllipticError> {
    Ok(pth_power_derivation(curve, &curve.canonical_differential())?.is_unit())
}

/// `lambda * delta` with Hasse invariant 1, searching the field of `delta`
/// and then its extensions of degree `2..=p-1`.
pub fn normalize_generator(
    curve: &CurveModel,
    delta: &InvariantDifferential,
) -> Result<InvariantDifferential, EllipticError> {
    let h = pth_power_derivation(curve, delta)?;
    if !h.is_unit() {
        return Err(EllipticError::Supersingular);
    }
    let base = Arc::clone(delta.field());
    let p = base.p();
    for e in 1..p as usize {
        let target = GaloisField::extension(p, base.degree() * e)?;
        let emb = FieldEmbedding::new(&base, &target)?;
        if let Some(lambda) = find_root_of_unity_scale(&emb.map(&h.h))? {
            return InvariantDifferential::new(emb.map(&delta.scale) * lambda);
        }
    }
    unreachable!("lambda^(p-1) = H is solvable in degree p-1")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short(p: u64, a: i64, b: i64) -> CurveModel {
        CurveModel::Weierstrass(WeierstrassCurve::short_from_ints(p, a, b).unwrap())
    }

    fn hasse(curve: &CurveModel) -> u64 {
        pth_power_derivation(curve, &curve.canonical_differential()).unwrap().value().to_index()
    }

    #[test]
    fn node_model_has_unit_hasse() {
        let node = CurveModel::Node(NodeModel::new(5).unwrap());
        assert_eq!(hasse(&node), 1);
        assert!(is_ordinary(&node).unwrap());
        let n = normalize_generator(&node, &node.canonical_differential()).unwrap();
        assert!(n.scale().is_one());
    }

    #[test]
    fn hasse_examples_p5() {
        assert_eq!(hasse(&short(5, 1, 0)), 2);
        assert_eq!(hasse(&short(5, 0, 1)), 0);
        let w = WeierstrassCurve::short_from_ints(5, 1, 0).unwrap();
        assert_eq!(hasse_deuring(&w).unwrap().value().to_index(), 2);
        assert_eq!(count_points(&w), 4);
        let ss = WeierstrassCurve::short_from_ints(5, 0, 1).unwrap();
        assert_eq!(count_points(&ss), 6);
        assert!(is_supersingular_by_count(&ss));
    }

    #[test]
    fn deuring_p7_ordinary() {
        let w = WeierstrassCurve::short_from_ints(7, 0, 1).unwrap();
        // (x^3 + 1)^3 has x^6 coefficient 3
        assert_eq!(hasse_deuring(&w).unwrap().value().to_index(), 3);
        assert_eq!(hasse(&CurveModel::Weierstrass(w)), 3);
    }

    #[test]
    fn singular_and_small_characteristic_rejected() {
        assert_eq!(WeierstrassCurve::short_from_ints(5, 0, 0), Err(EllipticError::Singular));
        assert!(matches!(WeierstrassCurve::short_from_ints(3, 1, 0), Err(EllipticError::SmallCharacteristic(3))));
    }

    #[test]
    fn scaling_law() {
        let curve = short(7, 2, 3);
        let h = pth_power_derivation(&curve, &curve.canonical_differential()).unwrap();
        let f = curve.field().clone();
        for l in 1..7 {
            let lam = f.from_i64(l);
            let scaled = pth_power_derivation(&curve, &InvariantDifferential::new(lam.clone()).unwrap()).unwrap();
            let want = h.value().clone() * Ring::pow(&lam.inv().unwrap(), 6);
            assert_eq!(*scaled.value(), want);
        }
    }

    #[test]
    fn normalization_needs_degree_four_over_f5() {
        let curve = short(5, 1, 0);
        let n = normalize_generator(&curve, &curve.canonical_differential()).unwrap();
        assert_eq!(n.field().order(), 625);
        assert!(pth_power_derivation(&curve, &n).unwrap().value().is_one());
        let ss = short(5, 0, 1);
        assert_eq!(normalize_generator(&ss, &ss.canonical_differential()), Err(EllipticError::Supersingular));
    }

    #[test]
    fn long_form_matches_completed_square() {
        let f = GaloisField::prime(7).unwrap();
        let a = [1, 2, 3, 4, 5].map(|v| f.from_i64(v));
        let w = WeierstrassCurve::long(&f, a).unwrap();
        let iter = hasse(&CurveModel::Weierstrass(w.clone()));
        assert_eq!(hasse_deuring(&w).unwrap().value().to_index(), iter);
        assert_eq!(iter == 0, is_supersingular_by_count(&w));
    }
}
