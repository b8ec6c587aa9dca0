use crate::rings::{FieldElem, Poly, Ring};

use super::WeierstrassCurve;

/// `P0(x) + y P1(x)` in `k[x, y]/(y^2 + G y - F)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Func {
    p0: Poly<FieldElem>,
    p1: Poly<FieldElem>,
}

impl Func {
    pub(crate) fn scale(&self, c: &FieldElem) -> Self {
        Self { p0: self.p0.scale(c), p1: self.p1.scale(c) }
    }
}

/// Affine coordinate ring of a Weierstrass curve with the derivation dual to
/// `dx/(2y + a1 x + a3)`.
pub(crate) struct CoordinateRing {
    f: Poly<FieldElem>,
    df: Poly<FieldElem>,
    g: Poly<FieldElem>,
    a1: FieldElem,
    two: FieldElem,
}

impl CoordinateRing {
    pub(crate) fn new(curve: &WeierstrassCurve) -> Self {
        let f = curve.cubic();
        let g = curve.linear();
        Self { df: f.derivative(), f, a1: curve.a[0].clone(), g, two: curve.field.from_i64(2) }
    }

    fn zero(&self) -> Poly<FieldElem> {
        Poly::constant(self.two.zero_like())
    }

    pub(crate) fn x(&self) -> Func {
        Func { p0: Poly::x(&self.two), p1: self.zero() }
    }

    pub(crate) fn y(&self) -> Func {
        Func { p0: self.zero(), p1: Poly::constant(self.two.one_like()) }
    }

    /// `D(x) = 2y + G`, `D(y) = F' - a1 y`, extended by Leibniz and reduced.
    pub(crate) fn derive(&self, u: &Func) -> Func {
        let dp0 = u.p0.derivative();
        let dp1 = u.p1.derivative();
        let p0 = dp0.clone() * self.g.clone()
            + self.df.clone() * u.p1.clone()
            + (self.f.clone() * dp1.clone()).scale(&self.two);
        let p1 = dp0.scale(&self.two) - u.p1.scale(&self.a1) - self.g.clone() * dp1;
        Func { p0, p1 }
    }

    /// `h` with `u = h v`, if it exists.
    pub(crate) fn ratio(&self, u: &Func, v: &Func) -> Option<FieldElem> {
        let (den, num) = (0..v.p1.coeffs().len())
            .map(|i| (v.p1.coeff(i), u.p1.coeff(i)))
            .chain((0..v.p0.coeffs().len()).map(|i| (v.p0.coeff(i), u.p0.coeff(i))))
            .find(|(d, _)| !d.is_zero())?;
        let h = num * den.inv()?;
        (*u == v.scale(&h)).then_some(h)
    }
}
