mod common;

use common::*;
use indefinite_linalg::duality::rep_vector;
use indefinite_linalg::indefinite::{
    canonical_projectors, compatible_structure_from_hform, dirac_adjoint_operator, dirac_adjoint_vector,
    dirac_spectral, dual_metric_apply, h_orthonormal_basis, is_dirac_selfadjoint, is_pseudo_unitary,
    metric_structure_from, raise_lower_index, signature, MetricStructure,
};
use indefinite_linalg::matrix::{hermitian_conjugate, matmul};
use indefinite_linalg::tensor::{Tensor, Variance};
use indefinite_linalg::unitary::{adjoint, inner_product, riesz_map, spectral_representation};
use indefinite_linalg::{DenseMatrix, Field};
use proptest::prelude::*;

#[derive(Debug)]
struct Case {
    n_plus: usize,
    b: DenseMatrix,
    ms: MetricStructure,
    f: DenseMatrix,
    g: DenseMatrix,
    x: DenseMatrix,
    y: DenseMatrix,
}

fn case(max: usize) -> impl Strategy<Value = Case> {
    (1..=max, field_strategy())
        .prop_flat_map(|(n, f)| (0..=n, invertible(n, f), matrix(n, n, f), matrix(n, n, f), matrix(n, 1, f), matrix(n, 1, f)))
        .prop_map(|(n_plus, b, f, g, x, y)| {
            let n = b.rows();
            let (gram, k) = metric(n, n_plus, &b);
            let ms = metric_structure_from(&space(n, b.field()), &gram, &k).unwrap();
            Case { n_plus, b, ms, f, g, x, y }
        })
}

fn scale_of(c: &Case) -> f64 {
    (c.x.frobenius_norm() * c.y.frobenius_norm() * c.ms.hform().gram().frobenius_norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn metric_operator_is_a_selfadjoint_involution(c in case(8)) {
        let n = c.b.rows();
        let h = c.ms.metric_operator();
        prop_assert!(matmul(h, h).unwrap().distance(&DenseMatrix::identity(n, c.b.field())) <= 1e-9);
        prop_assert!(adjoint(h, c.ms.inner_product()).unwrap().distance(h) <= 1e-10 * h.frobenius_norm().max(1.0));
        prop_assert_eq!(signature(&c.ms).n_plus, c.n_plus);
        let y = c.x.hermitian_conjugate();
        let expected = matmul(&y, h).unwrap();
        prop_assert!(dual_metric_apply(&y, &c.ms).unwrap().distance(&expected) <= 1e-10 * expected.frobenius_norm().max(1.0));
    }

    #[test]
    fn h_orthonormal_basis_diagonalises(c in case(8)) {
        let n = c.b.rows();
        let field = c.b.field();
        let hb = h_orthonormal_basis(&c.ms).unwrap();
        let b = hb.basis.matrix();
        let k_form = matmul(&matmul(&hermitian_conjugate(b), c.ms.hform().gram()).unwrap(), b).unwrap();
        prop_assert!(k_form.distance(&eta(c.n_plus, n, field)) <= 1e-9);
        let xb = rep_vector(&c.x, &hb.basis).unwrap().components;
        let yb = rep_vector(&c.y, &hb.basis).unwrap().components;
        let v = matmul(&matmul(&hermitian_conjugate(&xb), &eta(c.n_plus, n, field)).unwrap(), &yb).unwrap().get(0, 0);
        prop_assert!((v - c.ms.h_value(&c.x, &c.y).unwrap()).norm() <= 1e-12 * scale_of(&c));
        let rep = |g: &DenseMatrix| matmul(&matmul(hb.basis.inverse(), g).unwrap(), b).unwrap();
        let (pp, pm) = canonical_projectors(&c.ms);
        let upper: Vec<f64> = (0..n).map(|i| if i < c.n_plus { 1.0 } else { 0.0 }).collect();
        prop_assert!(rep(&pp).distance(&DenseMatrix::diag_real(&upper).to_field(field).unwrap()) <= 1e-9);
        prop_assert!(rep(c.ms.metric_operator()).distance(&rep(&pp).sub(&rep(&pm)).unwrap()) <= 1e-9);
    }

    #[test]
    fn h_form_splits_over_projectors(c in case(8)) {
        let (pp, pm) = canonical_projectors(&c.ms);
        let ip = c.ms.inner_product();
        let v = inner_product(&c.x, &matmul(&pp, &c.y).unwrap(), ip).unwrap()
            - inner_product(&c.x, &matmul(&pm, &c.y).unwrap(), ip).unwrap();
        prop_assert!((v - c.ms.h_value(&c.x, &c.y).unwrap()).norm() <= 1e-10 * scale_of(&c));
        let paired = matmul(&dirac_adjoint_vector(&c.x, &c.ms).unwrap(), &c.y).unwrap().get(0, 0);
        prop_assert!((paired - c.ms.h_value(&c.x, &c.y).unwrap()).norm() <= 1e-12 * scale_of(&c));
    }

    #[test]
    fn dirac_conjugation_rules(c in case(6)) {
        let bar = |f: &DenseMatrix| dirac_adjoint_operator(f, &c.ms).unwrap();
        let scale = c.f.frobenius_norm().max(1.0);
        prop_assert!(bar(&bar(&c.f)).distance(&c.f) <= 1e-12 * scale);
        let fg = matmul(&c.f, &c.g).unwrap();
        let rev = matmul(&bar(&c.g), &bar(&c.f)).unwrap();
        prop_assert!(bar(&fg).distance(&rev) <= 1e-10 * rev.frobenius_norm().max(1.0));
        let hb = h_orthonormal_basis(&c.ms).unwrap();
        let rep = |g: &DenseMatrix| matmul(&matmul(hb.basis.inverse(), g).unwrap(), hb.basis.matrix()).unwrap();
        let e = eta(c.n_plus, c.b.rows(), c.b.field());
        let expected = matmul(&matmul(&e, &hermitian_conjugate(&rep(&c.f))).unwrap(), &e).unwrap();
        prop_assert!(rep(&bar(&c.f)).distance(&expected) <= 1e-10 * expected.frobenius_norm().max(1.0));
    }

    #[test]
    fn dirac_spectral_reconstruction(c in case(8)) {
        let a = c.g.add(&hermitian_conjugate(&c.g)).unwrap();
        let e = eta(c.n_plus, c.b.rows(), c.b.field());
        let f = matmul(&matmul(&c.b, &matmul(&e, &a).unwrap()).unwrap(), &c.b.inverse().unwrap()).unwrap();
        prop_assert!(is_dirac_selfadjoint(&f, &c.ms).unwrap());
        let ds = dirac_spectral(&f, &c.ms).unwrap();
        prop_assert!(ds.reconstruct().distance(&f) <= 1e-9 * f.frobenius_norm().max(1.0));
    }

    #[test]
    fn signature_survives_congruence(c in case(8), shift in 0.0f64..1.0) {
        let n = c.b.rows();
        let field = c.b.field();
        let congruence = c.g.add(&DenseMatrix::identity(n, field).scale(indefinite_linalg::matrix::real(n as f64 + 1.0 + shift))).unwrap();
        let k2 = matmul(&matmul(&hermitian_conjugate(&congruence), c.ms.hform().gram()).unwrap(), &congruence).unwrap();
        let ms2 = compatible_structure_from_hform(&space(n, field), &k2.hermitian_part().unwrap()).unwrap();
        prop_assert_eq!(signature(&ms2), signature(&c.ms));
    }

    #[test]
    fn metric_operator_is_pseudo_unitary(c in case(8)) {
        prop_assert!(is_pseudo_unitary(c.ms.metric_operator(), &c.ms).unwrap());
        prop_assert!(is_dirac_selfadjoint(c.ms.metric_operator(), &c.ms).unwrap());
    }

    #[test]
    fn definite_metric_reduces_to_hermitian_case(c in case(6)) {
        let g = c.ms.inner_product().gram().clone();
        let ms = metric_structure_from(c.ms.space(), &g, &g).unwrap();
        let ip = c.ms.inner_product();
        let scale = (c.f.frobenius_norm() * g.frobenius_norm()).max(1.0);
        prop_assert!(dirac_adjoint_operator(&c.f, &ms).unwrap().distance(&adjoint(&c.f, ip).unwrap()) <= 1e-12 * scale);
        prop_assert!(dirac_adjoint_vector(&c.x, &ms).unwrap().distance(&riesz_map(&c.x, ip).unwrap()) <= 1e-12 * scale);
        let s = matmul(&matmul(&c.b, &c.g.add(&hermitian_conjugate(&c.g)).unwrap()).unwrap(), &c.b.inverse().unwrap()).unwrap();
        let ds = dirac_spectral(&s, &ms).unwrap();
        let sd = spectral_representation(&s, ip).unwrap();
        prop_assert_eq!(&ds.decomposition.multiplicities, &sd.multiplicities);
        prop_assert!(ds.reconstruct().distance(&sd.reconstruct()) <= 1e-12 * s.frobenius_norm().max(1.0) * 10.0);
    }

    #[test]
    fn lowering_then_raising_is_identity(c in case(6)) {
        let t = Tensor::from_ket(c.ms.space(), &c.x.to_field(c.ms.space().field()).unwrap()).unwrap();
        let low = raise_lower_index(&t, 1, &c.ms).unwrap();
        prop_assert_eq!(low.slots(), &[Variance::Down]);
        prop_assert_eq!(raise_lower_index(&low, 1, &c.ms).unwrap(), t);
    }
}

#[test]
fn real_field_structures_stay_real() {
    let sp = space(2, Field::Real);
    let k = DenseMatrix::from_real_rows(&[vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
    let ms = compatible_structure_from_hform(&sp, &k).unwrap();
    assert_eq!(ms.metric_operator().field(), Field::Real);
    assert_eq!(signature(&ms).n_plus, 1);
}
