use operlab_core::elliptic::{
    count_points, hasse_deuring, is_supersingular_by_count, normalize_generator, parse_curve, pth_power_derivation,
    CurveModel, InvariantDifferential, NodeModel, WeierstrassCurve,
};
use operlab_core::opers::{classify_dormant, gauge_transform, hm_gamma, miura_fiber, p_curvature, OperContext};
use operlab_core::rings::{GaloisField, Matrix, Ring};
use operlab_core::rootdata::{AdjointQuotientPoint, LieMatrix, TraceConvention};
use proptest::prelude::*;

fn hasse_triple_sweep(p: u64) -> usize {
    let mut smooth = 0;
    for a in 0..p as i64 {
        for b in 0..p as i64 {
            let Ok(w) = WeierstrassCurve::short_from_ints(p, a, b) else { continue };
            smooth += 1;
            let model = CurveModel::Weierstrass(w.clone());
            let h = pth_power_derivation(&model, &model.canonical_differential()).unwrap();
            let d = hasse_deuring(&w).unwrap();
            assert_eq!(h, d, "p={p} A={a} B={b}");
            assert_eq!(h.value().is_zero(), is_supersingular_by_count(&w), "p={p} A={a} B={b}");
        }
    }
    smooth
}

#[test]
fn hasse_triple_agrees_on_small_fields() {
    assert_eq!(hasse_triple_sweep(5), 20);
    assert_eq!(hasse_triple_sweep(7), 42);
}

#[test]
fn hasse_examples() {
    let c = parse_curve("p=5 A=1 B=0").unwrap();
    let h = pth_power_derivation(&c, &c.canonical_differential()).unwrap();
    assert_eq!(h.value().to_index(), 2);
    let CurveModel::Weierstrass(w) = &c else { unreachable!() };
    assert_eq!(count_points(w), 4);
    let g = normalize_generator(&c, &c.canonical_differential()).unwrap();
    assert_eq!(g.field().order(), 625);
    assert!(pth_power_derivation(&c, &g).unwrap().value().is_one());
    let node = CurveModel::Node(NodeModel::new(7).unwrap());
    assert!(pth_power_derivation(&node, &node.canonical_differential()).unwrap().value().is_one());
}

proptest! {
    #[test]
    fn hasse_scaling_law(a in 0i64..7, b in 0i64..7, l in 1u64..49) {
        let Ok(w) = WeierstrassCurve::short_from_ints(7, a, b) else { return Ok(()) };
        let model = CurveModel::Weierstrass(w);
        let f49 = GaloisField::extension(7, 2).unwrap();
        let lambda = f49.from_index(l);
        let h = pth_power_derivation(&model, &InvariantDifferential::new(f49.one()).unwrap()).unwrap();
        let hl = pth_power_derivation(&model, &InvariantDifferential::new(lambda.clone()).unwrap()).unwrap();
        let factor = lambda.inv().unwrap().pow(6);
        prop_assert_eq!(hl.value().clone(), h.value().clone() * factor);
    }

    #[test]
    fn p_curvature_is_gauge_equivariant(v in proptest::collection::vec(0u64..5, 4), g in proptest::collection::vec(0u64..5, 4)) {
        let f = GaloisField::prime(5).unwrap();
        let m = Matrix::from_fn(2, 2, |i, j| f.from_index(v[2 * i + j]));
        let gm = Matrix::from_fn(2, 2, |i, j| f.from_index(g[2 * i + j]));
        prop_assume!(!gm.det().is_zero());
        let node = CurveModel::Node(NodeModel::new(5).unwrap());
        let h = pth_power_derivation(&node, &node.canonical_differential()).unwrap();
        let lie = LieMatrix::new(m, TraceConvention::Gl).unwrap();
        let psi = p_curvature(&lie, &h).unwrap();
        let moved = p_curvature(&gauge_transform(&lie, &gm).unwrap(), &h).unwrap();
        prop_assert_eq!(moved.matrix(), &gauge_transform(psi.matrix(), &gm).unwrap());
    }
}

#[test]
fn hm_gamma_zero_is_frobenius() {
    for p in [3u64, 5] {
        let f = GaloisField::extension(p, 2).unwrap();
        for x in f.elements() {
            let rho = AdjointQuotientPoint::new(vec![x], 2, TraceConvention::Sl).unwrap();
            assert_eq!(hm_gamma(&f.zero(), &rho).unwrap(), rho.frobenius());
        }
    }
}

#[test]
fn classification_on_node_and_ordinary_curve() {
    let ctx = OperContext::new(2, 5).unwrap();
    for curve in [parse_curve("node p=5").unwrap(), parse_curve("p=5 A=1 B=0").unwrap()] {
        let c = classify_dormant(&curve, &ctx).unwrap();
        assert_eq!(c.classes.len(), 2);
        assert!(c.normalized);
        assert!(c.complement.as_ref().unwrap().agrees);
        for spec in &c.classes {
            let lifts = miura_fiber(spec, &ctx).unwrap();
            assert_eq!(lifts.len(), 2);
        }
    }
    let ss = classify_dormant(&parse_curve("p=5 A=0 B=1").unwrap(), &ctx).unwrap();
    assert!(ss.is_supersingular());
    assert_eq!(ss.classes.len(), 1);
    assert!(ss.classes[0].rho().is_zero());
    assert_eq!(ss.complement.unwrap().dormant_found, 1);
}
