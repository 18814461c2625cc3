mod common;

use common::*;
use indefinite_linalg::matrix::kronecker_product;
use indefinite_linalg::tensor::{contract, full_trace, kron_flatten, kron_unflatten, tensor_product, transform_tensor, Tensor, Variance};
use indefinite_linalg::{DenseMatrix, Field, Scalar};
use proptest::prelude::*;

fn slots(rank: usize) -> impl Strategy<Value = Vec<Variance>> {
    prop::collection::vec(prop_oneof![Just(Variance::Up), Just(Variance::Down)], rank)
}

fn tensor(n: usize, field: Field, slots: Vec<Variance>, dyadic: bool) -> impl Strategy<Value = Tensor> {
    let count = n.pow(slots.len() as u32);
    prop::collection::vec((-8i32..=8, -8i32..=8, -1.0f64..1.0, -1.0f64..1.0), count).prop_map(move |parts| {
        let comps: Vec<Scalar> = parts
            .iter()
            .map(|&(a, b, x, y)| {
                let (re, im) = if dyadic { (f64::from(a) / 8.0, f64::from(b) / 8.0) } else { (x, y) };
                Scalar::new(re, if field == Field::Complex { im } else { 0.0 })
            })
            .collect();
        Tensor::new(&space(n, field), slots.clone(), comps).unwrap()
    })
}

fn any_tensor(n: usize, field: Field, max_rank: usize, dyadic: bool) -> impl Strategy<Value = Tensor> {
    (0..=max_rank).prop_flat_map(slots).prop_flat_map(move |s| tensor(n, field, s, dyadic))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn tensor_product_is_multilinear(
        (x, x2, y, a, b) in (1..=5usize, field_strategy()).prop_flat_map(|(n, f)| (
            matrix(n, 1, f), matrix(n, 1, f), matrix(n, 1, f),
            (-1.0f64..1.0, -1.0f64..1.0), (-1.0f64..1.0, -1.0f64..1.0),
        ))
    ) {
        let f = x.field();
        let sp = space(x.rows(), f);
        let pick = |(re, im): (f64, f64)| Scalar::new(re, if f == Field::Complex { im } else { 0.0 });
        let (a, b) = (pick(a), pick(b));
        let t = |m: &DenseMatrix| Tensor::from_ket(&sp, m).unwrap();
        let combo = x.scale(a).add(&x2.scale(b)).unwrap();
        let lhs = tensor_product(&t(&combo), &t(&y)).unwrap();
        let rhs = tensor_product(&t(&x), &t(&y)).unwrap().scale(a).unwrap()
            .add(&tensor_product(&t(&x2), &t(&y)).unwrap().scale(b).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn tensor_product_is_associative(
        (a, b, c) in (1..=3usize, field_strategy()).prop_flat_map(|(n, f)| (
            any_tensor(n, f, 2, true), any_tensor(n, f, 2, true), any_tensor(n, f, 2, true)
        ))
    ) {
        let left = tensor_product(&tensor_product(&a, &b).unwrap(), &c).unwrap();
        let right = tensor_product(&a, &tensor_product(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.components().len(), a.dim().pow(a.rank() as u32 + b.rank() as u32 + c.rank() as u32));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn contraction_commutes_with_transformation(
        (t, m) in (1..=4usize, field_strategy()).prop_flat_map(|(n, f)| (
            (0..=1usize).prop_flat_map(slots).prop_flat_map(move |mut s| {
                s.insert(0, Variance::Down);
                s.insert(0, Variance::Up);
                tensor(n, f, s, false)
            }),
            invertible(n, f),
        ))
    ) {
        let a = contract(&transform_tensor(&t, &m).unwrap(), 1, 2).unwrap();
        let b = transform_tensor(&contract(&t, 1, 2).unwrap(), &m).unwrap();
        let scale = b.components().iter().map(|z| z.norm()).fold(1.0, f64::max);
        prop_assert!(a.max_abs_diff(&b) <= 1e-10 * scale);
    }

    #[test]
    fn trace_is_basis_independent(
        (f_op, m) in (1..=5usize, field_strategy()).prop_flat_map(|(n, f)| (matrix(n, n, f), invertible(n, f)))
    ) {
        let sp = space(f_op.rows(), f_op.field());
        let t = Tensor::from_operator(&sp, &f_op).unwrap();
        let a = full_trace(&t).unwrap().components()[0];
        let b = full_trace(&transform_tensor(&t, &m).unwrap()).unwrap().components()[0];
        prop_assert!((a - f_op.trace().unwrap()).norm() <= 1e-12 * f_op.frobenius_norm().max(1.0));
        prop_assert!((a - b).norm() <= 1e-10 * f_op.frobenius_norm().max(1.0));
    }

    #[test]
    fn flatten_of_kets_is_kronecker(
        (x, y) in (1..=6usize, field_strategy()).prop_flat_map(|(n, f)| (matrix(n, 1, f), matrix(n, 1, f)))
    ) {
        let sp = space(x.rows(), x.field());
        let p = tensor_product(&Tensor::from_ket(&sp, &x).unwrap(), &Tensor::from_ket(&sp, &y).unwrap()).unwrap();
        let flat = kron_flatten(&p).unwrap();
        prop_assert_eq!(&flat, &kronecker_product(&x, &y).unwrap());
        prop_assert_eq!(kron_unflatten(&flat, &sp, 2, 0).unwrap(), p);
    }

    #[test]
    fn flatten_round_trip(
        (t, up) in (1..=3usize, field_strategy(), 0..=2usize, 0..=2usize).prop_flat_map(|(n, f, up, down)| {
            let mut s = vec![Variance::Up; up];
            s.extend(vec![Variance::Down; down]);
            (tensor(n, f, s, false), Just(up))
        })
    ) {
        let down = t.rank() - up;
        let flat = kron_flatten(&t).unwrap();
        prop_assert_eq!(flat.shape(), (t.dim().pow(up as u32), t.dim().pow(down as u32)));
        prop_assert_eq!(kron_unflatten(&flat, t.space(), up, down).unwrap(), t);
    }
}

#[test]
fn interleaved_variance_cannot_be_flattened() {
    let sp = space(2, Field::Real);
    let t = Tensor::new(&sp, vec![Variance::Up, Variance::Down, Variance::Up], vec![Scalar::new(0.0, 0.0); 8]).unwrap();
    assert!(matches!(kron_flatten(&t), Err(indefinite_linalg::Error::Variance(_))));
}
