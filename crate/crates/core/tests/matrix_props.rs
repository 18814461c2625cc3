mod common;

use common::*;
use indefinite_linalg::matrix::{classify, determinant, hermitian_conjugate, kronecker_product, matmul, MatrixClass};
use indefinite_linalg::{DenseMatrix, Field, Scalar};
use indefinite_linalg_oracles as oracle;
use proptest::prelude::*;

fn square(max: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max, field_strategy()).prop_flat_map(|(n, f)| matrix(n, n, f))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lu_determinant_matches_permutation_sum(a in square(6)) {
        let lu = determinant(&a).unwrap();
        let lc = oracle::levi_civita_det(&to_oracle(&a));
        prop_assert!((lu - lc).norm() <= 1e-10 * lc.norm().max(1e-3));
    }

    #[test]
    fn determinant_is_multiplicative(
        (a, b) in (1..=8usize, field_strategy()).prop_flat_map(|(n, f)| (matrix(n, n, f), matrix(n, n, f)))
    ) {
        let (da, db) = (determinant(&a).unwrap(), determinant(&b).unwrap());
        let dab = determinant(&matmul(&a, &b).unwrap()).unwrap();
        prop_assert!((dab - da * db).norm() <= 1e-9 * (da.norm() * db.norm()).max(1e-12));
    }

    #[test]
    fn conjugation_rules_are_exact(
        (a, b, re, im) in (1..=6usize, field_strategy())
            .prop_flat_map(|(n, f)| (dyadic_matrix(n, n, f), dyadic_matrix(n, n, f), -4i32..=4, -4i32..=4))
    ) {
        let alpha = if a.field() == Field::Complex {
            Scalar::new(f64::from(re) / 4.0, f64::from(im) / 4.0)
        } else {
            Scalar::new(f64::from(re) / 4.0, 0.0)
        };
        let h = hermitian_conjugate;
        prop_assert_eq!(h(&a.add(&b).unwrap()), h(&a).add(&h(&b)).unwrap());
        prop_assert_eq!(h(&a.scale(alpha)), h(&a).scale(alpha.conj()));
        prop_assert_eq!(h(&matmul(&a, &b).unwrap()), matmul(&h(&b), &h(&a)).unwrap());
        prop_assert_eq!(h(&h(&a)), a);
    }

    #[test]
    fn kronecker_mixed_product(
        (a, b, c, d) in (1..=3usize, 1..=3usize, 1..=3usize, 1..=3usize, 1..=3usize, 1..=3usize, field_strategy())
            .prop_flat_map(|(p, q, r, s, t, u, f)| (matrix(p, q, f), matrix(s, t, f), matrix(q, r, f), matrix(t, u, f)))
    ) {
        let lhs = matmul(&kronecker_product(&a, &b).unwrap(), &kronecker_product(&c, &d).unwrap()).unwrap();
        let rhs = kronecker_product(&matmul(&a, &c).unwrap(), &matmul(&b, &d).unwrap()).unwrap();
        prop_assert!(lhs.distance(&rhs) <= 1e-10 * rhs.frobenius_norm().max(1.0));
    }

    #[test]
    fn kronecker_matches_index_formula(
        (a, b) in (1..=4usize, 1..=4usize, 1..=4usize, 1..=4usize, field_strategy())
            .prop_flat_map(|(p, q, s, t, f)| (matrix(p, q, f), matrix(s, t, f)))
    ) {
        let k = kronecker_product(&a, &b).unwrap();
        let o = oracle::kron(&to_oracle(&a), &to_oracle(&b));
        prop_assert_eq!(to_oracle(&k), o);
    }

    #[test]
    fn determinant_of_conjugate(a in square(8)) {
        let d = determinant(&a).unwrap();
        let dd = determinant(&hermitian_conjugate(&a)).unwrap();
        prop_assert!((dd - d.conj()).norm() <= 1e-10 * d.norm().max(1e-12));
    }

    #[test]
    fn hermitian_sums_are_classified_hermitian(a in square(6)) {
        let h = a.add(&hermitian_conjugate(&a)).unwrap();
        prop_assert!(classify(&h).unwrap().contains(&MatrixClass::Hermitian));
    }
}

#[test]
fn determinant_examples() {
    let a = DenseMatrix::from_real_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
    assert_eq!(determinant(&a).unwrap(), Scalar::new(-2.0, 0.0));
    assert_eq!(oracle::levi_civita_det(&to_oracle(&a)), Scalar::new(-2.0, 0.0));
    let i = Scalar::new(0.0, 1.0);
    let diag = DenseMatrix::diag(&[i, i], Field::Complex);
    assert_eq!(determinant(&diag).unwrap(), Scalar::new(-1.0, 0.0));
}

#[test]
fn non_square_determinant_is_rejected() {
    let a = DenseMatrix::zeros(2, 3, Field::Real);
    assert!(matches!(determinant(&a), Err(indefinite_linalg::Error::Shape(_))));
}
