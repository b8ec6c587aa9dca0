use num_bigint::BigUint;
use operlab_core::rings::modp::binom_falling_mod;
use operlab_core::rings::{
    hensel_lift_roots, lucas_binom, roots_in_field, FieldEmbedding, GaloisField, Matrix, Poly, PrimeModulus, Ring,
    WittRing,
};
use proptest::prelude::*;

fn binom_big(k: u64, j: u64) -> BigUint {
    if j > k {
        return BigUint::from(0u32);
    }
    let mut acc = BigUint::from(1u32);
    for i in 0..j {
        acc = acc * BigUint::from(k - i) / BigUint::from(i + 1);
    }
    acc
}

#[test]
fn lucas_matches_bigint_oracle() {
    for p in [3u64, 5, 7, 11] {
        for k in 0..=200u64 {
            for j in 0..=200u64 {
                let want = (binom_big(k, j) % BigUint::from(p)).to_u64_digits().first().copied().unwrap_or(0);
                assert_eq!(lucas_binom(k, j, p), want, "C({k},{j}) mod {p}");
            }
        }
    }
}

#[test]
fn falling_binomial_matches_bigint_for_nonnegative_arguments() {
    for p in [3u64, 5] {
        for x in 0..=150i64 {
            for m in [1u64, p, p * p] {
                let want = (binom_big(x as u64, m) % BigUint::from(p)).to_u64_digits().first().copied().unwrap_or(0);
                assert_eq!(binom_falling_mod(x, m, p), want);
            }
        }
    }
}

#[test]
fn canonical_moduli() {
    assert_eq!(GaloisField::extension(5, 2).unwrap().modulus(), &[2, 0, 1]);
    assert_eq!(GaloisField::extension(7, 2).unwrap().modulus(), &[1, 0, 1]);
    assert_eq!(GaloisField::extension(3, 2).unwrap().modulus(), &[1, 0, 1]);
    assert!(GaloisField::with_modulus(5, vec![1, 0, 1]).is_err());
}

#[test]
fn field_axioms_exhaustive_f25() {
    let f = GaloisField::extension(5, 2).unwrap();
    let elems: Vec<_> = f.elements().collect();
    assert_eq!(elems.len(), 25);
    for a in &elems {
        if !a.is_zero() {
            assert!((a.clone() * a.inv().unwrap()).is_one());
        }
        assert_eq!(a.pow(25), *a);
        for b in &elems {
            assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
            for c in elems.iter().step_by(7) {
                assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            }
        }
    }
}

#[test]
fn embedding_is_a_homomorphism() {
    let f5 = GaloisField::extension(5, 2).unwrap();
    let f625 = GaloisField::extension(5, 4).unwrap();
    let e = FieldEmbedding::new(&f5, &f625).unwrap();
    for a in f5.elements() {
        for b in f5.elements() {
            assert_eq!(e.map(&(a.clone() * b.clone())), e.map(&a) * e.map(&b));
            assert_eq!(e.map(&(a.clone() + b.clone())), e.map(&a) + e.map(&b));
        }
    }
    assert!(FieldEmbedding::new(&GaloisField::extension(5, 3).unwrap(), &f625).is_err());
}

#[test]
fn roots_of_split_polynomial() {
    let f = GaloisField::prime(7).unwrap();
    let x = Poly::x(&f.one());
    let poly = (x.clone() - Poly::constant(f.from_i64(1)))
        * (x.clone() - Poly::constant(f.from_i64(4)))
        * (x * Poly::constant(f.one()));
    let roots: Vec<u64> = roots_in_field(&poly).iter().map(|r| r.to_index()).collect();
    assert_eq!(roots, vec![0, 1, 4]);
}

proptest! {
    #[test]
    fn witt_ring_axioms(a in 0i64..125, b in 0i64..125, c in 0i64..125) {
        let r = WittRing::new(PrimeModulus::new(5).unwrap(), 3).unwrap();
        let (a, b, c) = (r.elem(a), r.elem(b), r.elem(c));
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!(a - a, r.zero());
        prop_assert_eq!(a.is_unit(), a.residue() != 0);
        if a.is_unit() {
            prop_assert!((a * a.try_inv().unwrap()).is_one());
        }
    }

    #[test]
    fn witt_truncation_is_a_ring_map(a in 0i64..343, b in 0i64..343) {
        let r = WittRing::new(PrimeModulus::new(7).unwrap(), 3).unwrap();
        let (x, y) = (r.elem(a), r.elem(b));
        prop_assert_eq!((x * y).truncate(2).unwrap(), x.truncate(2).unwrap() * y.truncate(2).unwrap());
        prop_assert_eq!((x + y).truncate(1).unwrap(), x.truncate(1).unwrap() + y.truncate(1).unwrap());
    }

    #[test]
    fn hensel_lifts_distinct_roots(r in proptest::collection::btree_set(0i64..125, 3)) {
        let ring = WittRing::new(PrimeModulus::new(5).unwrap(), 3).unwrap();
        let roots: Vec<i64> = r.into_iter().collect();
        let residues: std::collections::BTreeSet<i64> = roots.iter().map(|v| v % 5).collect();
        prop_assume!(residues.len() == 3);
        let x = Poly::x(&ring.one());
        let f = roots.iter().fold(Poly::constant(ring.one()), |acc, &v| acc * (x.clone() - Poly::constant(ring.elem(v))));
        let lifted: Vec<u64> = hensel_lift_roots(&f).unwrap().iter().map(|e| e.value()).collect();
        let mut want: Vec<u64> = roots.iter().map(|&v| v as u64).collect();
        want.sort();
        prop_assert_eq!(lifted, want);
    }

    #[test]
    fn vandermonde_determinant_is_difference_product(v in proptest::collection::vec(0i64..49, 1..5)) {
        let ring = WittRing::new(PrimeModulus::new(7).unwrap(), 2).unwrap();
        let a: Vec<_> = v.iter().map(|&x| ring.elem(x)).collect();
        let n = a.len();
        let m = Matrix::from_fn(n, n, |i, j| a[i].pow((n - 1 - j) as u64));
        let mut prod = ring.one();
        for i in 0..n {
            for j in i + 1..n {
                prod = prod * (a[i] - a[j]);
            }
        }
        prop_assert_eq!(m.det(), prod);
    }

    #[test]
    fn adjugate_identity(v in proptest::collection::vec(0i64..25, 9)) {
        let ring = WittRing::new(PrimeModulus::new(5).unwrap(), 2).unwrap();
        let m = Matrix::from_fn(3, 3, |i, j| ring.elem(v[3 * i + j]));
        let id = Matrix::identity(3, &ring.one());
        prop_assert_eq!(&m * &m.adjugate(), id.scale(&m.det()));
        let cp = m.charpoly();
        let mut acc = Matrix::zeros(3, 3, &ring.one());
        for k in (0..=3).rev() {
            acc = &(&acc * &m) + &id.scale(&cp.coeff(k));
        }
        prop_assert!(acc.is_zero());
    }
}
