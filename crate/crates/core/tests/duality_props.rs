mod common;

use common::*;
use indefinite_linalg::duality::{
    change_of_basis, conjugate_representation, dual_basis, operator_determinant, pairing, rank_nullity, rep_covector,
    rep_vector, represent_map, Basis,
};
use indefinite_linalg::matrix::{determinant, matmul};
use indefinite_linalg::{DenseMatrix, Error, Field};
use proptest::prelude::*;

fn setup(k: usize) -> impl Strategy<Value = (usize, Field, Vec<DenseMatrix>, DenseMatrix, DenseMatrix)> {
    (1..=6usize, field_strategy()).prop_flat_map(move |(n, f)| {
        (Just(n), Just(f), prop::collection::vec(invertible(n, f), k), matrix(n, n, f), matrix(n, n, f))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn dual_basis_is_biorthogonal((n, f, bs, _, _) in setup(1)) {
        let b = Basis::new(&space(n, f), &bs[0]).unwrap();
        let pairing = matmul(&dual_basis(&b), b.matrix()).unwrap();
        prop_assert!(pairing.distance(&DenseMatrix::identity(n, f)) <= 1e-10);
        for i in 0..n {
            let v = matmul(&b.covector(i), &b.vector(i)).unwrap().get(0, 0);
            prop_assert!((v.re - 1.0).abs() <= 1e-10 && v.im.abs() <= 1e-10);
        }
    }

    #[test]
    fn pairing_is_invariant_under_change_of_basis((n, f, bs, x, y) in setup(2)) {
        let sp = space(n, f);
        let (e, e_new) = (Basis::new(&sp, &bs[0]).unwrap(), Basis::new(&sp, &bs[1]).unwrap());
        let (x, y) = (x.column(0), y.row(0));
        let before = pairing(&rep_covector(&y, &e).unwrap(), &rep_vector(&x, &e).unwrap()).unwrap();
        let after = pairing(&rep_covector(&y, &e_new).unwrap(), &rep_vector(&x, &e_new).unwrap()).unwrap();
        let m = change_of_basis(&e, &e_new).unwrap();
        let moved = matmul(&m, &rep_vector(&x, &e).unwrap().components).unwrap();
        prop_assert!(moved.distance(&rep_vector(&x, &e_new).unwrap().components) <= 1e-10 * moved.frobenius_norm().max(1.0));
        prop_assert!((before - after).norm() <= 1e-10 * (x.frobenius_norm() * y.frobenius_norm()).max(1.0));
        let natural = matmul(&y, &x).unwrap().get(0, 0);
        prop_assert!((before - natural).norm() <= 1e-10 * (x.frobenius_norm() * y.frobenius_norm()).max(1.0));
    }

    #[test]
    fn representation_is_functorial((n, f, bs, a, g) in setup(3)) {
        let sp = space(n, f);
        let e: Vec<Basis> = bs.iter().map(|b| Basis::new(&sp, b).unwrap()).collect();
        let whole = represent_map(&matmul(&a, &g).unwrap(), &e[0], &e[2]).unwrap();
        let parts = represent_map(&a, &e[1], &e[2]).unwrap().compose(&represent_map(&g, &e[0], &e[1]).unwrap()).unwrap();
        prop_assert!(whole.matrix.distance(&parts.matrix) <= 1e-10 * whole.matrix.frobenius_norm().max(1.0));
        prop_assert!(whole.to_natural().distance(&matmul(&a, &g).unwrap()) <= 1e-10 * whole.matrix.frobenius_norm().max(1.0));
    }

    #[test]
    fn representation_of_inverse((n, f, bs, _, _) in setup(3)) {
        let sp = space(n, f);
        let (e1, e2) = (Basis::new(&sp, &bs[0]).unwrap(), Basis::new(&sp, &bs[1]).unwrap());
        let m = &bs[2];
        let inv = represent_map(&m.inverse().unwrap(), &e2, &e1).unwrap().matrix;
        let expected = represent_map(m, &e1, &e2).unwrap().matrix.inverse().unwrap();
        prop_assert!(inv.distance(&expected) <= 1e-9 * expected.frobenius_norm().max(1.0));
    }

    #[test]
    fn conjugation_and_determinant_invariance((n, f, bs, a, _) in setup(2)) {
        let sp = space(n, f);
        let (e, e_new) = (Basis::new(&sp, &bs[0]).unwrap(), Basis::new(&sp, &bs[1]).unwrap());
        let moved = conjugate_representation(&represent_map(&a, &e, &e).unwrap(), &e_new).unwrap();
        let direct = represent_map(&a, &e_new, &e_new).unwrap();
        prop_assert!(moved.matrix.distance(&direct.matrix) <= 1e-10 * direct.matrix.frobenius_norm().max(1.0));
        let d = determinant(&a).unwrap();
        let dr = operator_determinant(&moved).unwrap();
        prop_assert!((d - dr).norm() <= 1e-9 * d.norm().max(1e-6));
    }

    #[test]
    fn rank_plus_nullity(
        (n, r, f) in (1..=7usize, field_strategy()).prop_flat_map(|(n, f)| (Just(n), 0..=n, Just(f))),
        seed in any::<u64>()
    ) {
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let f_map = if r == 0 {
            DenseMatrix::zeros(n, n, f)
        } else {
            let x = DenseMatrix::from_fn(n, r, f, |_, _| indefinite_linalg::matrix::real(next()));
            let y = DenseMatrix::from_fn(r, n, f, |_, _| indefinite_linalg::matrix::real(next()));
            matmul(&x, &y).unwrap()
        };
        let rn = rank_nullity(&f_map);
        prop_assert_eq!(rn.rank + rn.nullity, n);
        prop_assert_eq!(rn.rank, r);
    }
}

#[test]
fn singular_basis_is_rejected() {
    let sp = space(2, Field::Real);
    let b = DenseMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
    assert!(matches!(Basis::new(&sp, &b), Err(Error::SingularBasis { .. })));
}

#[test]
fn dual_basis_example() {
    let sp = space(2, Field::Real);
    let b = Basis::new(&sp, &DenseMatrix::from_real_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap()).unwrap();
    let expected = DenseMatrix::from_real_rows(&[vec![1.0, -1.0], vec![0.0, 1.0]]).unwrap();
    assert!(dual_basis(&b).distance(&expected) < 1e-15);
}
