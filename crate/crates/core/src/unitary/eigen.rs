//! Cyclic complex Jacobi eigensolver and spectral decompositions.

use crate::error::{shape_err, Error, Result};
use crate::matrix::{hermitian_conjugate, matmul, real, DenseMatrix, Scalar, ZERO};

/// Relative tolerance for the Hermitian precondition of the eigensolver.
pub const HERMITIAN_TOLERANCE: f64 = 1e-9;
/// Convergence threshold on the off-diagonal Frobenius mass, relative to `‖A‖_F`.
pub const JACOBI_TOLERANCE: f64 = 1e-13;
pub const MAX_SWEEPS: usize = 100;
/// Relative eigenvalue clustering tolerance, scaled by `max(1, ‖A‖_F)`.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;

/// Eigenvalues in descending order with orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

/// `f = Σ λ p_λ` over distinct eigenvalues in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub projectors: Vec<DenseMatrix>,
    /// Eigenvector columns grouped by eigenvalue, in the order above.
    pub eigenbasis: DenseMatrix,
    /// Absolute tolerance used to cluster eigenvalues.
    pub cluster_tolerance: f64,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenbasis.rows()
    }

    /// `Σ λ p_λ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let n = self.dim();
        let field = self.eigenbasis.field();
        self.eigenvalues
            .iter()
            .zip(&self.projectors)
            .fold(DenseMatrix::zeros(n, n, field), |acc, (&lambda, p)| {
                acc.add(&p.scale(real(lambda))).expect("projectors share one shape")
            })
    }

    /// Multiplicity of the eigenvalue zero (within the clustering tolerance).
    pub fn kernel_dimension(&self) -> usize {
        self.eigenvalues
            .iter()
            .zip(&self.multiplicities)
            .filter(|(lambda, _)| lambda.abs() <= self.cluster_tolerance)
            .map(|(_, &m)| m)
            .sum()
    }

    /// Diagonal `diag(λ₁·𝟙_{n₁}, …)` expected in the eigenbasis.
    pub fn canonical_form(&self) -> DenseMatrix {
        let diag: Vec<Scalar> = self
            .eigenvalues
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(&lambda, &m)| std::iter::repeat_n(real(lambda), m))
            .collect();
        DenseMatrix::diag(&diag, self.eigenbasis.field())
    }
}

pub(crate) fn check_hermitian(a: &DenseMatrix, rel_tol: f64, what: &str) -> Result<()> {
    if !a.is_square() {
        return shape_err(format!("{what} must be square, got {}x{}", a.rows(), a.cols()));
    }
    let defect = hermitian_conjugate(a).distance(a);
    if defect > rel_tol * a.frobenius_norm() {
        return Err(Error::Symmetry(format!(
            "{what} is not Hermitian: ||A+ - A||_F = {defect:e}"
        )));
    }
    Ok(())
}

fn off_diagonal_mass(a: &[Scalar], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Diagonalises a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of `a_pq` with a diagonal unitary
/// and then applies a real Givens rotation, so real symmetric input never
/// leaves the real numbers.
pub fn jacobi_eigen(a: &DenseMatrix) -> Result<HermitianEigen> {
    check_hermitian(a, HERMITIAN_TOLERANCE, "eigensolver input")?;
    let n = a.rows();
    let field = a.field();
    let herm = a.hermitian_part()?;
    let mut m: Vec<Scalar> = herm.data().to_vec();
    let mut v: Vec<Scalar> = DenseMatrix::identity(n, field).data().to_vec();
    let norm = herm.frobenius_norm();
    let target = JACOBI_TOLERANCE * norm;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(&m, n) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                let b = apq.norm();
                if b == 0.0 {
                    continue;
                }
                let phase = apq / b;
                let alpha = m[p * n + p].re;
                let gamma = m[q * n + q].re;
                let tau = (gamma - alpha) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let (jpp, jpq) = (real(c), real(s));
                let (jqp, jqq) = (-phase.conj() * s, phase.conj() * c);

                // A ← A·J
                for i in 0..n {
                    let (aip, aiq) = (m[i * n + p], m[i * n + q]);
                    m[i * n + p] = aip * jpp + aiq * jqp;
                    m[i * n + q] = aip * jpq + aiq * jqq;
                }
                // A ← J⁺·A
                for j in 0..n {
                    let (apj, aqj) = (m[p * n + j], m[q * n + j]);
                    m[p * n + j] = jpp.conj() * apj + jqp.conj() * aqj;
                    m[q * n + j] = jpq.conj() * apj + jqq.conj() * aqj;
                }
                m[p * n + q] = ZERO;
                m[q * n + p] = ZERO;
                m[p * n + p] = real(m[p * n + p].re);
                m[q * n + q] = real(m[q * n + q].re);
                // V ← V·J
                for i in 0..n {
                    let (vip, viq) = (v[i * n + p], v[i * n + q]);
                    v[i * n + p] = vip * jpp + viq * jqp;
                    v[i * n + q] = vip * jpq + viq * jqq;
                }
            }
        }
    }
    if !converged {
        let off = off_diagonal_mass(&m, n);
        if off > target {
            return Err(Error::Convergence { sweeps: MAX_SWEEPS, off_diagonal: off });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j * n + j].re.total_cmp(&m[i * n + i].re));
    let values = order.iter().map(|&i| m[i * n + i].re).collect();
    let vectors = DenseMatrix::from_fn(n, n, field, |r, c| v[r * n + order[c]]);
    Ok(HermitianEigen { values, vectors })
}

/// Groups descending eigenvalues whose neighbours differ by at most `tol`.
pub(crate) fn cluster(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i - 1] - values[i] > tol {
            groups.push(start..i);
            start = i;
        }
    }
    groups
}

/// Builds the projector system from eigenvectors. `dual` maps an eigenvector
/// column to the bra that completes its projector (`v⁺` for the standard
/// inner product, `v⁺G` in general).
pub(crate) fn assemble(
    values: &[f64],
    vectors: &DenseMatrix,
    duals: &DenseMatrix,
    scale: f64,
) -> SpectralDecomposition {
    let n = vectors.rows();
    let field = vectors.field();
    let tol = CLUSTER_TOLERANCE * scale.max(1.0);
    let mut eigenvalues = Vec::new();
    let mut multiplicities = Vec::new();
    let mut projectors = Vec::new();
    for range in cluster(values, tol) {
        let len = range.len();
        eigenvalues.push(values[range.clone()].iter().sum::<f64>() / len as f64);
        multiplicities.push(len);
        projectors.push(DenseMatrix::from_fn(n, n, field, |i, j| {
            range.clone().map(|k| vectors.get(i, k) * duals.get(k, j)).sum()
        }));
    }
    SpectralDecomposition {
        eigenvalues,
        multiplicities,
        projectors,
        eigenbasis: vectors.clone(),
        cluster_tolerance: tol,
    }
}

/// Spectral decomposition of a Hermitian matrix in the standard inner product.
pub fn eigen_hermitian(a: &DenseMatrix) -> Result<SpectralDecomposition> {
    let eig = jacobi_eigen(a)?;
    let duals = hermitian_conjugate(&eig.vectors);
    Ok(assemble(&eig.values, &eig.vectors, &duals, a.frobenius_norm()))
}

/// Unit vector check used by tests and callers: `V⁺V = 𝟙`.
pub fn orthonormality_defect(vectors: &DenseMatrix) -> f64 {
    let n = vectors.cols();
    matmul(&hermitian_conjugate(vectors), vectors)
        .expect("shapes agree")
        .distance(&DenseMatrix::identity(n, vectors.field()))
}
