//! Indefinite inner products and Dirac conjugation.
//!
//! A [`MetricStructure`] pairs a definite inner product `G` with a
//! non-degenerate H-form `K`. The metric operator `h = G⁻¹K` satisfies
//! `(x, h y) = H(x, y)`, and compatibility means `h·h = 𝟙`. Everything
//! here lives in the natural frame; the canonical diagonal picture is
//! obtained through [`h_orthonormal_basis`].

use crate::duality::{Basis, SpaceHandle};
use crate::error::{shape_err, Error, Result};
use crate::matrix::{hermitian_conjugate, matmul, real, DenseMatrix, Field, Scalar, ZERO};
use crate::tensor::Tensor;
use crate::unitary::{
    adjoint, jacobi_eigen, spectral_representation, InnerProduct, SpectralDecomposition,
};

/// Relative tolerance on the Hermitian symmetry of `K`.
pub const FORM_SYMMETRY_TOLERANCE: f64 = 1e-10;
/// `K` is rejected when some eigenvalue has modulus at most this times `‖K‖_F`.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;
/// Bound on `‖h·h − 𝟙‖_F`.
pub const COMPATIBILITY_TOLERANCE: f64 = 1e-9;
/// Dirac-selfadjointness, pseudo-unitarity and pseudo-orthogonality checks.
pub const DIRAC_TOLERANCE: f64 = 1e-9;

/// Hermitian sesquilinear form `H(x, y) = x⁺·K·y`.
#[derive(Debug, Clone, PartialEq)]
pub struct HForm {
    space: SpaceHandle,
    gram: DenseMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: DenseMatrix,
}

impl HForm {
    pub fn new(space: &SpaceHandle, k: &DenseMatrix) -> Result<Self> {
        let k = space.admit_operator(k)?;
        let norm = k.frobenius_norm();
        let defect = hermitian_conjugate(&k).distance(&k);
        if defect > FORM_SYMMETRY_TOLERANCE * norm {
            return Err(Error::Symmetry(format!("H-form is not Hermitian: defect {defect:e}")));
        }
        let k = k.hermitian_part()?;
        let eig = jacobi_eigen(&k)?;
        let threshold = DEGENERACY_TOLERANCE * norm;
        let min_abs = eig.values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
        if min_abs <= threshold {
            return Err(Error::DegenerateForm { min_abs, threshold });
        }
        Ok(Self { space: space.clone(), gram: k, eigenvalues: eig.values, eigenvectors: eig.vectors })
    }

    pub fn space(&self) -> &SpaceHandle {
        &self.space
    }

    /// Gram matrix `K_ij = H(e_i, e_j)` in the natural frame.
    pub fn gram(&self) -> &DenseMatrix {
        &self.gram
    }

    pub fn eval(&self, x: &DenseMatrix, y: &DenseMatrix) -> Result<Scalar> {
        let x = self.space.admit_ket(x)?;
        let y = self.space.admit_ket(y)?;
        Ok(matmul(&matmul(&hermitian_conjugate(&x), &self.gram)?, &y)?.get(0, 0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricStructure {
    ip: InnerProduct,
    hform: HForm,
    h: DenseMatrix,
    k_inv: DenseMatrix,
    signature: Signature,
}

impl MetricStructure {
    pub fn inner_product(&self) -> &InnerProduct {
        &self.ip
    }

    pub fn hform(&self) -> &HForm {
        &self.hform
    }

    pub fn space(&self) -> &SpaceHandle {
        self.ip.space()
    }

    pub fn dim(&self) -> usize {
        self.space().dim()
    }

    /// Metric operator `h = G⁻¹K` in the natural frame.
    pub fn metric_operator(&self) -> &DenseMatrix {
        &self.h
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// Canonical `η = diag(+1…, −1…)`, the matrix of `h` in an h-orthonormal basis.
    pub fn eta(&self) -> Vec<f64> {
        let Signature { n_plus, n_minus } = self.signature;
        std::iter::repeat_n(1.0, n_plus).chain(std::iter::repeat_n(-1.0, n_minus)).collect()
    }

    pub fn h_value(&self, x: &DenseMatrix, y: &DenseMatrix) -> Result<Scalar> {
        self.hform.eval(x, y)
    }

    pub fn compatibility_defect(&self) -> f64 {
        compatibility_defect(&self.h)
    }

    fn assemble(ip: InnerProduct, hform: HForm) -> Result<Self> {
        let h = matmul(ip.gram_inverse(), hform.gram())?;
        let residual = compatibility_defect(&h);
        if residual > COMPATIBILITY_TOLERANCE {
            return Err(Error::Compatibility { residual });
        }
        let k_inv = hform.gram().inverse()?;
        let signature = metric_signature(&ip, &hform)?;
        Ok(Self { ip, hform, h, k_inv, signature })
    }
}

fn compatibility_defect(h: &DenseMatrix) -> f64 {
    let n = h.rows();
    matmul(h, h).expect("square").distance(&DenseMatrix::identity(n, h.field()))
}

/// `L⁻¹·K·L⁻⁺` with `G = L·L⁺`; Hermitian and similar to `h`.
fn whitened_form(ip: &InnerProduct, hform: &HForm) -> Result<DenseMatrix> {
    let l_inv = ip.cholesky_factor().inverse()?;
    matmul(&matmul(&l_inv, hform.gram())?, &hermitian_conjugate(&l_inv))?.hermitian_part()
}

fn metric_signature(ip: &InnerProduct, hform: &HForm) -> Result<Signature> {
    let eig = jacobi_eigen(&whitened_form(ip, hform)?)?;
    let n_plus = eig.values.iter().filter(|&&v| v > 0.0).count();
    Ok(Signature { n_plus, n_minus: eig.values.len() - n_plus })
}

/// Structure from a Gram matrix `G` and an H-form `K`, checking `h·h = 𝟙`.
pub fn metric_structure_from(space: &SpaceHandle, g: &DenseMatrix, k: &DenseMatrix) -> Result<MetricStructure> {
    let hform = HForm::new(space, k)?;
    let ip = InnerProduct::new(space, g)?;
    MetricStructure::assemble(ip, hform)
}

/// Structure from `K` alone: with `K = UΛU⁺`, the compatible inner product
/// is `G = U|Λ|U⁺` and `h = U·sign(Λ)·U⁺`.
pub fn compatible_structure_from_hform(space: &SpaceHandle, k: &DenseMatrix) -> Result<MetricStructure> {
    let hform = HForm::new(space, k)?;
    let n = space.dim();
    let u = &hform.eigenvectors;
    let u_adj = hermitian_conjugate(u);
    let abs: Vec<Scalar> = hform.eigenvalues.iter().map(|v| real(v.abs())).collect();
    let g = matmul(&matmul(u, &DenseMatrix::diag(&abs, space.field()))?, &u_adj)?;
    let ip = InnerProduct::new(space, &g.hermitian_part()?)?;
    let s = metric_signature(&ip, &hform)?;
    debug_assert_eq!(s.n_plus + s.n_minus, n);
    MetricStructure::assemble(ip, hform)
}

pub fn signature(ms: &MetricStructure) -> Signature {
    ms.signature
}

/// `p± = (𝟙 ± h)/2`.
pub fn canonical_projectors(ms: &MetricStructure) -> (DenseMatrix, DenseMatrix) {
    let id = DenseMatrix::identity(ms.dim(), ms.h.field());
    let p_plus = id.add(&ms.h).expect("square").scale(real(0.5));
    let p_minus = id.sub(&ms.h).expect("square").scale(real(0.5));
    (p_plus, p_minus)
}

/// Basis with `B⁺KB = diag(η)` and `B⁺GB = 𝟙`, the +1 block first.
#[derive(Debug, Clone, PartialEq)]
pub struct HOrthonormalBasis {
    pub basis: Basis,
    pub eta: Vec<i8>,
}

/// h-orthonormal basis that is also orthonormal for `G`.
///
/// The ±1 eigenspaces of `h` are found from the whitened form `L⁻¹KL⁻⁺`.
/// Inside each eigenspace the columns are rotated to diagonalise the
/// compression of `K²`, which orders them by descending `|λ|` of `K` when
/// `G` is the compatible product synthesised from `K`. Each column is then
/// phase-fixed so that its first largest entry is real and positive.
pub fn h_orthonormal_basis(ms: &MetricStructure) -> Result<HOrthonormalBasis> {
    let n = ms.dim();
    let field = ms.space().field();
    let l_inv = ms.ip.cholesky_factor().inverse()?;
    let l_inv_adj = hermitian_conjugate(&l_inv);
    let eig = jacobi_eigen(&whitened_form(&ms.ip, &ms.hform)?)?;
    let b0 = matmul(&l_inv_adj, &eig.vectors)?;
    let k2 = matmul(ms.hform.gram(), ms.hform.gram())?;

    let n_plus = ms.signature.n_plus;
    let mut columns: Vec<DenseMatrix> = Vec::with_capacity(n);
    for range in [0..n_plus, n_plus..n] {
        if range.is_empty() {
            continue;
        }
        let block = DenseMatrix::from_columns(&range.clone().map(|j| b0.column(j)).collect::<Vec<_>>())?;
        let s = matmul(&matmul(&hermitian_conjugate(&block), &k2)?, &block)?.hermitian_part()?;
        let q = jacobi_eigen(&s)?.vectors;
        let rotated = matmul(&block, &q)?;
        columns.extend((0..rotated.cols()).map(|j| fix_phase(&rotated.column(j))));
    }
    let b = DenseMatrix::from_columns(&columns)?.to_field(field)?;
    let eta = (0..n).map(|i| if i < n_plus { 1 } else { -1 }).collect();
    Ok(HOrthonormalBasis { basis: Basis::certified(ms.space(), &b)?, eta })
}

fn fix_phase(v: &DenseMatrix) -> DenseMatrix {
    let max = v.max_abs();
    if max == 0.0 {
        return v.clone();
    }
    let pivot = v.data().iter().find(|z| z.norm() >= max * (1.0 - 1e-9)).copied().unwrap_or(ZERO);
    v.scale(pivot.conj() / pivot.norm())
}

/// Dirac adjoint of a vector, `x̄ = φ_D(x) = x⁺·K`, with `⟨x̄, y⟩ = H(x, y)`.
pub fn dirac_adjoint_vector(x: &DenseMatrix, ms: &MetricStructure) -> Result<DenseMatrix> {
    let x = ms.space().admit_ket(x)?;
    matmul(&hermitian_conjugate(&x), ms.hform.gram())
}

/// Dirac adjoint of a covector, `φ_D⁻¹(ŷ) = K⁻¹·ŷ⁺`.
pub fn dirac_adjoint_covector(y: &DenseMatrix, ms: &MetricStructure) -> Result<DenseMatrix> {
    let y = ms.space().admit_bra(y)?;
    matmul(&ms.k_inv, &hermitian_conjugate(&y))
}

/// `f̄ = h·f†·h`, so that `H(x, f y) = H(f̄ x, y)`.
pub fn dirac_adjoint_operator(f: &DenseMatrix, ms: &MetricStructure) -> Result<DenseMatrix> {
    let f_dag = adjoint(f, &ms.ip)?;
    matmul(&matmul(&ms.h, &f_dag)?, &ms.h)
}

pub fn dirac_selfadjointness_defect(f: &DenseMatrix, ms: &MetricStructure) -> Result<f64> {
    Ok(dirac_adjoint_operator(f, ms)?.distance(&ms.space().admit_operator(f)?))
}

pub fn is_dirac_selfadjoint(f: &DenseMatrix, ms: &MetricStructure) -> Result<bool> {
    Ok(dirac_selfadjointness_defect(f, ms)? <= DIRAC_TOLERANCE * f.frobenius_norm().max(1.0))
}

/// `‖f̄·f − 𝟙‖_F`.
pub fn pseudo_unitarity_defect(f: &DenseMatrix, ms: &MetricStructure) -> Result<f64> {
    let f = ms.space().admit_operator(f)?;
    let prod = matmul(&dirac_adjoint_operator(&f, ms)?, &f)?;
    Ok(prod.distance(&DenseMatrix::identity(ms.dim(), f.field())))
}

pub fn is_pseudo_unitary(f: &DenseMatrix, ms: &MetricStructure) -> Result<bool> {
    Ok(pseudo_unitarity_defect(f, ms)? <= DIRAC_TOLERANCE)
}

/// `f = Σ_{λ ∈ Sp(f∘h)} λ·p_λ∘h` for a Dirac-selfadjoint operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracSpectral {
    /// Spectral decomposition of the G-selfadjoint operator `f∘h`.
    pub decomposition: SpectralDecomposition,
    pub metric_operator: DenseMatrix,
}

impl DiracSpectral {
    pub fn reconstruct(&self) -> DenseMatrix {
        matmul(&self.decomposition.reconstruct(), &self.metric_operator).expect("square")
    }
}

pub fn dirac_spectral(f: &DenseMatrix, ms: &MetricStructure) -> Result<DiracSpectral> {
    let f = ms.space().admit_operator(f)?;
    let defect = dirac_selfadjointness_defect(&f, ms)?;
    if defect > DIRAC_TOLERANCE * f.frobenius_norm().max(1.0) {
        return Err(Error::Symmetry(format!(
            "operator is not Dirac-selfadjoint: defect {defect:e}"
        )));
    }
    let g = matmul(&f, &ms.h)?;
    let decomposition = spectral_representation(&g, &ms.ip)?;
    Ok(DiracSpectral { decomposition, metric_operator: ms.h.clone() })
}

/// Action of the dual metric `h* = φ_R∘h∘φ_R⁻¹` on a bra.
pub fn dual_metric_apply(y: &DenseMatrix, ms: &MetricStructure) -> Result<DenseMatrix> {
    let x = crate::unitary::riesz_inverse(y, &ms.ip)?;
    crate::unitary::riesz_map(&matmul(&ms.h, &x)?, &ms.ip)
}

/// Lowers an UP slot or raises a DOWN slot (1-based) with `h_ij = h^ij = ±δ_ij`.
/// Components are taken to be h-orthonormal-basis components.
pub fn raise_lower_index(t: &Tensor, slot: usize, ms: &MetricStructure) -> Result<Tensor> {
    t.space().check_same(ms.space())?;
    if slot == 0 || slot > t.rank() {
        return shape_err(format!("slot {slot} out of range 1..={}", t.rank()));
    }
    let eta = DenseMatrix::diag_real(&ms.eta()).to_field(t.space().field())?;
    let flipped = t.slots()[slot - 1].flipped();
    Ok(t.apply_along(slot - 1, &eta, flipped))
}

/// Membership test in a real matrix group with the reported determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealGroupCheck {
    pub member: bool,
    pub det: f64,
}

fn require_real(f: &DenseMatrix) -> Result<()> {
    if f.field() != Field::Real {
        return Err(Error::Field("orthogonality checks need real matrices".into()));
    }
    Ok(())
}

/// `fᵀ·f = 𝟙`.
pub fn is_orthogonal(f: &DenseMatrix) -> Result<RealGroupCheck> {
    require_real(f)?;
    if !f.is_square() {
        return shape_err("orthogonality of a non-square matrix");
    }
    let n = f.rows();
    let defect = matmul(&f.transpose(), f)?.distance(&DenseMatrix::identity(n, Field::Real));
    Ok(RealGroupCheck { member: defect <= DIRAC_TOLERANCE, det: f.determinant()?.re })
}

/// `fᵀ·η·f = η` with `η` the real symmetric form of `ms`.
pub fn is_pseudo_orthogonal(f: &DenseMatrix, ms: &MetricStructure) -> Result<RealGroupCheck> {
    require_real(f)?;
    if ms.space().field() != Field::Real {
        return Err(Error::Field("pseudo-orthogonality needs a real metric".into()));
    }
    let f = ms.space().admit_operator(f)?;
    let eta = ms.hform.gram();
    let defect = matmul(&matmul(&f.transpose(), eta)?, &f)?.distance(eta);
    Ok(RealGroupCheck {
        member: defect <= DIRAC_TOLERANCE * eta.frobenius_norm().max(1.0),
        det: f.determinant()?.re,
    })
}
