//! Seeded random instances.
//!
//! Every instance draws from its own ChaCha8 stream whose seed is derived
//! with [`mix`], so results do not depend on evaluation order. Entries are
//! uniform on `[-1, 1]` (real and imaginary parts independently).

use indefinite_linalg::matrix::{hermitian_conjugate, matmul, real};
use indefinite_linalg::{DenseMatrix, Field, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xCBF2_9CE4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01B3))
}

/// Sub-seed for instance `k` of lemma `id`.
pub fn mix(seed: u64, id: &str, k: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ fnv1a(id)) ^ k)
}

pub struct Gen {
    rng: ChaCha8Rng,
}

/// A compatible pair `G = B⁻⁺B⁻¹`, `K = B⁻⁺ηB⁻¹` together with the basis
/// `B` that is orthonormal for `G` and h-orthonormal for `K`.
pub struct MetricInstance {
    pub gram: DenseMatrix,
    pub hform: DenseMatrix,
    pub basis: DenseMatrix,
    pub n_plus: usize,
}

impl MetricInstance {
    pub fn eta(&self) -> Vec<f64> {
        let n = self.basis.rows();
        (0..n).map(|i| if i < self.n_plus { 1.0 } else { -1.0 }).collect()
    }
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn for_instance(seed: u64, id: &str, k: u64) -> Self {
        Self::new(mix(seed, id, k))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    pub fn field(&mut self) -> Field {
        if self.coin() {
            Field::Complex
        } else {
            Field::Real
        }
    }

    pub fn scalar(&mut self, field: Field) -> Scalar {
        let re = self.uniform(-1.0, 1.0);
        let im = if field == Field::Complex { self.uniform(-1.0, 1.0) } else { 0.0 };
        Scalar::new(re, im)
    }

    /// Multiples of 1/8 in `[-1, 1]`; sums and products of these are exact.
    pub fn dyadic(&mut self, field: Field) -> Scalar {
        let mut part = || f64::from(self.rng.gen_range(-8i32..=8)) / 8.0;
        let re = part();
        let im = if field == Field::Complex { part() } else { 0.0 };
        Scalar::new(re, im)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, field: Field) -> DenseMatrix {
        DenseMatrix::from_fn(rows, cols, field, |_, _| self.scalar(field))
    }

    pub fn dyadic_matrix(&mut self, rows: usize, cols: usize, field: Field) -> DenseMatrix {
        DenseMatrix::from_fn(rows, cols, field, |_, _| self.dyadic(field))
    }

    pub fn ket(&mut self, n: usize, field: Field) -> DenseMatrix {
        self.matrix(n, 1, field)
    }

    pub fn bra(&mut self, n: usize, field: Field) -> DenseMatrix {
        self.matrix(1, n, field)
    }

    /// Unitary (orthogonal for the real field) matrix from Gram–Schmidt on a random matrix.
    pub fn unitary(&mut self, n: usize, field: Field) -> DenseMatrix {
        loop {
            let a = self.matrix(n, n, field);
            let mut cols: Vec<DenseMatrix> = Vec::with_capacity(n);
            let mut ok = true;
            for j in 0..n {
                let mut v = a.column(j);
                for _ in 0..2 {
                    for q in &cols {
                        let c = matmul(&hermitian_conjugate(q), &v).unwrap().get(0, 0);
                        v = v.sub(&q.scale(c)).unwrap();
                    }
                }
                let norm = v.frobenius_norm();
                if norm < 1e-6 {
                    ok = false;
                    break;
                }
                cols.push(v.scale(real(1.0 / norm)));
            }
            if ok {
                return DenseMatrix::from_columns(&cols).unwrap();
            }
        }
    }

    /// `Q₁·diag(d)·Q₂` with `d ∈ [0.5, 2]`, so the condition number is at most 4.
    pub fn invertible(&mut self, n: usize, field: Field) -> DenseMatrix {
        let q1 = self.unitary(n, field);
        let q2 = self.unitary(n, field);
        let d: Vec<f64> = (0..n).map(|_| self.uniform(0.5, 2.0)).collect();
        let d = DenseMatrix::diag_real(&d).to_field(field).unwrap();
        matmul(&matmul(&q1, &d).unwrap(), &q2).unwrap()
    }

    /// `A + A⁺`.
    pub fn hermitian(&mut self, n: usize, field: Field) -> DenseMatrix {
        let a = self.matrix(n, n, field);
        a.add(&hermitian_conjugate(&a)).unwrap()
    }

    /// Hermitian matrix whose eigenvalues repeat: drawn from a small integer set.
    pub fn degenerate_hermitian(&mut self, n: usize, field: Field) -> DenseMatrix {
        let u = self.unitary(n, field);
        let k = 1 + self.index(n.min(3));
        let levels: Vec<f64> = (0..k).map(|_| f64::from(self.rng.gen_range(-3i32..=3))).collect();
        let d: Vec<f64> = (0..n).map(|_| levels[self.index(k)]).collect();
        let d = DenseMatrix::diag_real(&d).to_field(field).unwrap();
        matmul(&matmul(&u, &d).unwrap(), &hermitian_conjugate(&u)).unwrap().hermitian_part().unwrap()
    }

    /// Positive-definite Gram matrix `B⁻⁺B⁻¹`.
    pub fn gram(&mut self, n: usize, field: Field) -> DenseMatrix {
        let b_inv = self.invertible(n, field).inverse().unwrap();
        matmul(&hermitian_conjugate(&b_inv), &b_inv).unwrap().hermitian_part().unwrap()
    }

    pub fn metric(&mut self, n: usize, field: Field) -> MetricInstance {
        let n_plus = self.index(n + 1);
        self.metric_with(n, n_plus, field)
    }

    pub fn metric_with(&mut self, n: usize, n_plus: usize, field: Field) -> MetricInstance {
        let b = self.invertible(n, field);
        let b_inv = b.inverse().unwrap();
        let b_inv_adj = hermitian_conjugate(&b_inv);
        let eta: Vec<f64> = (0..n).map(|i| if i < n_plus { 1.0 } else { -1.0 }).collect();
        let eta = DenseMatrix::diag_real(&eta).to_field(field).unwrap();
        let gram = matmul(&b_inv_adj, &b_inv).unwrap().hermitian_part().unwrap();
        let hform = matmul(&matmul(&b_inv_adj, &eta).unwrap(), &b_inv).unwrap().hermitian_part().unwrap();
        MetricInstance { gram, hform, basis: b, n_plus }
    }

    /// Member of `U(n₊, n₋)` (or `O(n₊, n₋)`) in the canonical frame: a
    /// block-diagonal unitary followed by hyperbolic rotations mixing the
    /// two blocks with rapidity at most `max_rapidity`.
    pub fn canonical_pseudo_unitary(&mut self, n: usize, n_plus: usize, field: Field, max_rapidity: f64) -> DenseMatrix {
        let n_minus = n - n_plus;
        let mut lambda = DenseMatrix::zeros(n, n, field);
        let mut blocks = Vec::new();
        if n_plus > 0 {
            blocks.push((0, self.unitary(n_plus, field)));
        }
        if n_minus > 0 {
            blocks.push((n_plus, self.unitary(n_minus, field)));
        }
        for (offset, u) in blocks {
            let k = u.rows();
            lambda = lambda
                .add(&DenseMatrix::from_fn(n, n, field, |i, j| {
                    if (offset..offset + k).contains(&i) && (offset..offset + k).contains(&j) {
                        u.get(i - offset, j - offset)
                    } else {
                        Scalar::new(0.0, 0.0)
                    }
                }))
                .unwrap();
        }
        if n_plus > 0 && n_minus > 0 {
            for _ in 0..n_plus.min(n_minus) {
                let p = self.index(n_plus);
                let q = n_plus + self.index(n_minus);
                let t = self.uniform(-max_rapidity, max_rapidity);
                let phase = if field == Field::Complex {
                    Scalar::from_polar(1.0, self.uniform(0.0, std::f64::consts::TAU))
                } else {
                    real(1.0)
                };
                let (c, s) = (t.cosh(), t.sinh());
                let boost = DenseMatrix::from_fn(n, n, field, |i, j| match (i, j) {
                    _ if (i, j) == (p, p) || (i, j) == (q, q) => real(c),
                    _ if (i, j) == (p, q) => phase * s,
                    _ if (i, j) == (q, p) => phase.conj() * s,
                    _ if i == j => real(1.0),
                    _ => Scalar::new(0.0, 0.0),
                });
                lambda = matmul(&boost, &lambda).unwrap();
            }
        }
        lambda
    }

    /// Pseudo-unitary operator `B·Λ·B⁻¹` for the metric instance.
    pub fn pseudo_unitary(&mut self, m: &MetricInstance, max_rapidity: f64) -> DenseMatrix {
        let n = m.basis.rows();
        let lambda = self.canonical_pseudo_unitary(n, m.n_plus, m.basis.field(), max_rapidity);
        conjugate_by(&m.basis, &lambda)
    }

    /// Operator selfadjoint for the metric's inner product: `B·(A+A⁺)·B⁻¹`.
    pub fn selfadjoint(&mut self, m: &MetricInstance) -> DenseMatrix {
        let n = m.basis.rows();
        let h = self.hermitian(n, m.basis.field());
        conjugate_by(&m.basis, &h)
    }

    /// Dirac-selfadjoint operator `h·B·(A+A⁺)·B⁻¹ = B·η·(A+A⁺)·B⁻¹`.
    pub fn dirac_selfadjoint(&mut self, m: &MetricInstance) -> DenseMatrix {
        let n = m.basis.rows();
        let field = m.basis.field();
        let eta = DenseMatrix::diag_real(&m.eta()).to_field(field).unwrap();
        let a = matmul(&eta, &self.hermitian(n, field)).unwrap();
        conjugate_by(&m.basis, &a)
    }
}

/// `B·A·B⁻¹`.
pub fn conjugate_by(b: &DenseMatrix, a: &DenseMatrix) -> DenseMatrix {
    matmul(&matmul(b, a).unwrap(), &b.inverse().unwrap()).unwrap()
}
