#![allow(dead_code)]

use indefinite_linalg::duality::SpaceHandle;
use indefinite_linalg::matrix::{hermitian_conjugate, matmul};
use indefinite_linalg::{DenseMatrix, Field, Scalar};
use proptest::prelude::*;

pub fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Real), Just(Field::Complex)]
}

fn build(rows: usize, cols: usize, field: Field, parts: &[(f64, f64)]) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, field, |i, j| {
        let (re, im) = parts[i * cols + j];
        Scalar::new(re, if field == Field::Complex { im } else { 0.0 })
    })
}

pub fn matrix(rows: usize, cols: usize, field: Field) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols)
        .prop_map(move |parts| build(rows, cols, field, &parts))
}

/// Multiples of 1/4, so sums and products stay exact.
pub fn dyadic_matrix(rows: usize, cols: usize, field: Field) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec((-4i32..=4, -4i32..=4), rows * cols).prop_map(move |parts| {
        let parts: Vec<(f64, f64)> = parts.iter().map(|&(a, b)| (f64::from(a) / 4.0, f64::from(b) / 4.0)).collect();
        build(rows, cols, field, &parts)
    })
}

/// Square matrix shifted by `(n+1)·𝟙`, hence strictly diagonally dominant.
pub fn invertible(n: usize, field: Field) -> impl Strategy<Value = DenseMatrix> {
    matrix(n, n, field).prop_map(move |a| a.add(&DenseMatrix::identity(n, field).scale(Scalar::new(n as f64 + 1.0, 0.0))).unwrap())
}

pub fn gram(n: usize, field: Field) -> impl Strategy<Value = DenseMatrix> {
    matrix(n, n, field).prop_map(move |a| {
        let g = matmul(&hermitian_conjugate(&a), &a).unwrap();
        g.add(&DenseMatrix::identity(n, field).scale(Scalar::new(0.5, 0.0))).unwrap().hermitian_part().unwrap()
    })
}

pub fn space(n: usize, field: Field) -> SpaceHandle {
    SpaceHandle::new("V", n, field).unwrap()
}

pub fn eta(n_plus: usize, n: usize, field: Field) -> DenseMatrix {
    let d: Vec<f64> = (0..n).map(|i| if i < n_plus { 1.0 } else { -1.0 }).collect();
    DenseMatrix::diag_real(&d).to_field(field).unwrap()
}

/// `(G, K, B)` with `G = B⁻⁺B⁻¹` and `K = B⁻⁺ηB⁻¹`, so `h = BηB⁻¹`.
pub fn metric(n: usize, n_plus: usize, b: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let field = b.field();
    let b_inv = b.inverse().unwrap();
    let b_inv_adj = hermitian_conjugate(&b_inv);
    let g = matmul(&b_inv_adj, &b_inv).unwrap().hermitian_part().unwrap();
    let k = matmul(&matmul(&b_inv_adj, &eta(n_plus, n, field)).unwrap(), &b_inv).unwrap().hermitian_part().unwrap();
    (g, k)
}

pub fn to_oracle(a: &DenseMatrix) -> Vec<Vec<Scalar>> {
    (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get(i, j)).collect()).collect()
}

pub fn rel(err: f64, scale: f64) -> f64 {
    err / scale.max(1.0)
}
