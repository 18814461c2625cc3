//! Definite inner products and the unitary calculus built on them.
//!
//! An [`InnerProduct`] is a Hermitian positive definite Gram matrix `G` in
//! the natural frame, so `(x, y) = x⁺·G·y`. Adjoints, the Riesz map and the
//! spectral representation of selfadjoint operators are all computed in
//! that frame; the usual conjugate-transpose formulas only appear once an
//! orthonormal basis is chosen.

mod eigen;

pub use eigen::{
    eigen_hermitian, jacobi_eigen, orthonormality_defect, HermitianEigen, SpectralDecomposition,
    CLUSTER_TOLERANCE, HERMITIAN_TOLERANCE, JACOBI_TOLERANCE, MAX_SWEEPS,
};

use crate::duality::{Basis, SpaceHandle};
use crate::error::{shape_err, Error, Result};
use crate::matrix::{cholesky, hermitian_conjugate, matmul, DenseMatrix, Scalar};

/// Relative tolerance on the Hermitian symmetry of Gram matrices.
pub const GRAM_SYMMETRY_TOLERANCE: f64 = 1e-10;
/// Eigenvalues of a Gram matrix must exceed this times `‖G‖_F`.
pub const POSITIVITY_TOLERANCE: f64 = 1e-10;
/// Selfadjointness and unitarity checks.
pub const OPERATOR_TOLERANCE: f64 = 1e-9;
/// Relative breakdown threshold of Gram–Schmidt.
pub const BREAKDOWN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct InnerProduct {
    space: SpaceHandle,
    gram: DenseMatrix,
    gram_inv: DenseMatrix,
    /// Lower Cholesky factor, `G = L·L⁺`.
    chol: DenseMatrix,
    chol_inv: DenseMatrix,
}

impl InnerProduct {
    pub fn new(space: &SpaceHandle, gram: &DenseMatrix) -> Result<Self> {
        let g = space.admit_operator(gram)?;
        let norm = g.frobenius_norm();
        let defect = hermitian_conjugate(&g).distance(&g);
        if defect > GRAM_SYMMETRY_TOLERANCE * norm {
            return Err(Error::Symmetry(format!("Gram matrix is not Hermitian: defect {defect:e}")));
        }
        let g = g.hermitian_part()?;
        let threshold = POSITIVITY_TOLERANCE * norm;
        let min = jacobi_eigen(&g)?.values.last().copied().unwrap_or(0.0);
        if min <= threshold {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: min, threshold });
        }
        let chol = cholesky(&g)?;
        let chol_inv = chol.inverse()?;
        let gram_inv = matmul(&hermitian_conjugate(&chol_inv), &chol_inv)?;
        Ok(Self { space: space.clone(), gram: g, gram_inv, chol, chol_inv })
    }

    /// The standard inner product, `G = 𝟙`.
    pub fn standard(space: &SpaceHandle) -> Self {
        let id = DenseMatrix::identity(space.dim(), space.field());
        Self {
            space: space.clone(),
            gram: id.clone(),
            gram_inv: id.clone(),
            chol: id.clone(),
            chol_inv: id,
        }
    }

    pub fn space(&self) -> &SpaceHandle {
        &self.space
    }

    pub fn gram(&self) -> &DenseMatrix {
        &self.gram
    }

    pub fn gram_inverse(&self) -> &DenseMatrix {
        &self.gram_inv
    }

    pub fn cholesky_factor(&self) -> &DenseMatrix {
        &self.chol
    }

    pub fn eval(&self, x: &DenseMatrix, y: &DenseMatrix) -> Result<Scalar> {
        inner_product(x, y, self)
    }

    /// Gram matrix `B⁺GB` of a set of columns.
    pub fn gram_of(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let b = self.space.admit(b, self.space.dim(), b.cols(), "columns")?;
        matmul(&matmul(&hermitian_conjugate(&b), &self.gram)?, &b)
    }
}

/// `(x, y) = x⁺·G·y`, anti-linear in `x` and linear in `y`.
pub fn inner_product(x: &DenseMatrix, y: &DenseMatrix, ip: &InnerProduct) -> Result<Scalar> {
    let x = ip.space.admit_ket(x)?;
    let y = ip.space.admit_ket(y)?;
    Ok(matmul(&matmul(&hermitian_conjugate(&x), &ip.gram)?, &y)?.get(0, 0))
}

pub fn norm(x: &DenseMatrix, ip: &InnerProduct) -> Result<f64> {
    Ok(inner_product(x, x, ip)?.re.max(0.0).sqrt())
}

/// Riesz map `φ_R(x) = x⁺·G`, so that `⟨φ_R(x), y⟩ = (x, y)`.
pub fn riesz_map(x: &DenseMatrix, ip: &InnerProduct) -> Result<DenseMatrix> {
    let x = ip.space.admit_ket(x)?;
    matmul(&hermitian_conjugate(&x), &ip.gram)
}

/// `φ_R⁻¹(ŷ) = G⁻¹·ŷ⁺`.
pub fn riesz_inverse(y: &DenseMatrix, ip: &InnerProduct) -> Result<DenseMatrix> {
    let y = ip.space.admit_bra(y)?;
    matmul(&ip.gram_inv, &hermitian_conjugate(&y))
}

/// Modified Gram–Schmidt with one reorthogonalisation pass.
pub fn orthonormalize(vectors: &[DenseMatrix], ip: &InnerProduct) -> Result<Basis> {
    let n = ip.space.dim();
    if vectors.len() != n {
        return shape_err(format!("need {n} vectors to build a basis, got {}", vectors.len()));
    }
    let mut out: Vec<DenseMatrix> = Vec::with_capacity(n);
    for (index, v) in vectors.iter().enumerate() {
        let mut w = ip.space.admit_ket(v)?;
        let original = norm(&w, ip)?;
        for _pass in 0..2 {
            for e in &out {
                let coeff = inner_product(e, &w, ip)?;
                w = w.sub(&e.scale(coeff))?;
            }
        }
        let residual = norm(&w, ip)?;
        if original == 0.0 || residual <= BREAKDOWN_TOLERANCE * original {
            return Err(Error::DependentSet { index, residual });
        }
        out.push(w.scale(crate::matrix::real(1.0 / residual)));
    }
    Basis::certified(&ip.space, &DenseMatrix::from_columns(&out)?)
}

/// `f† = G⁻¹·f⁺·G`, the operator with `(f†x, y) = (x, f y)`.
pub fn adjoint(f: &DenseMatrix, ip: &InnerProduct) -> Result<DenseMatrix> {
    let f = ip.space.admit_operator(f)?;
    matmul(&matmul(&ip.gram_inv, &hermitian_conjugate(&f))?, &ip.gram)
}

pub fn is_selfadjoint(f: &DenseMatrix, ip: &InnerProduct) -> Result<bool> {
    let defect = adjoint(f, ip)?.distance(f);
    Ok(defect <= OPERATOR_TOLERANCE * f.frobenius_norm().max(1.0))
}

/// Spectral representation `f = Σ λ p_λ` of a selfadjoint operator.
///
/// With `G = L·L⁺`, the matrix `L⁺·f·L⁻⁺` is Hermitian; its projectors are
/// carried back to the natural frame, where they are G-selfadjoint.
pub fn spectral_representation(f: &DenseMatrix, ip: &InnerProduct) -> Result<SpectralDecomposition> {
    let f = ip.space.admit_operator(f)?;
    let defect = adjoint(&f, ip)?.distance(&f);
    if defect > OPERATOR_TOLERANCE * f.frobenius_norm().max(1.0) {
        return Err(Error::Symmetry(format!(
            "operator is not selfadjoint: ||f' - f||_F = {defect:e}"
        )));
    }
    let chol_inv_adj = hermitian_conjugate(&ip.chol_inv);
    let a_hat = matmul(&matmul(&hermitian_conjugate(&ip.chol), &f)?, &chol_inv_adj)?.hermitian_part()?;
    let eig = jacobi_eigen(&a_hat)?;
    let vectors = matmul(&chol_inv_adj, &eig.vectors)?;
    let duals = matmul(&hermitian_conjugate(&vectors), &ip.gram)?;
    Ok(eigen::assemble(&eig.values, &vectors, &duals, a_hat.frobenius_norm()))
}

/// `f†·f = 𝟙` within [`OPERATOR_TOLERANCE`].
pub fn is_unitary_wrt(f: &DenseMatrix, ip: &InnerProduct) -> Result<bool> {
    Ok(unitarity_defect(f, ip)? <= OPERATOR_TOLERANCE)
}

pub fn unitarity_defect(f: &DenseMatrix, ip: &InnerProduct) -> Result<f64> {
    let f = ip.space.admit_operator(f)?;
    let n = ip.space.dim();
    Ok(matmul(&adjoint(&f, ip)?, &f)?.distance(&DenseMatrix::identity(n, f.field())))
}
