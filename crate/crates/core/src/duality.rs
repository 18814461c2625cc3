//! Spaces with explicit bases, dual bases and matrix representations.
//!
//! Every space carries a natural reference frame; a [`Basis`] is an
//! invertible matrix whose columns are the basis vectors in that frame.
//! Rows of its inverse are the dual covectors, so `⟨ê^i, e_j⟩ = δ^i_j`
//! holds by construction. Vectors are kets and covectors are bras, which
//! keeps the left action of covectors on vectors a plain matrix product.

use std::fmt;

use crate::error::{shape_err, Error, Result};
use crate::matrix::{kernel_basis, matmul, rank, DenseMatrix, Field, Lu, Scalar, RANK_TOLERANCE};

/// Relative singularity threshold for basis matrices, scaled by `‖B‖_Fⁿ`.
pub const SINGULAR_BASIS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpaceHandle {
    label: String,
    dim: usize,
    field: Field,
}

impl SpaceHandle {
    pub fn new(label: impl Into<String>, dim: usize, field: Field) -> Result<Self> {
        if dim == 0 {
            return shape_err("space dimension must be at least 1");
        }
        Ok(Self { label: label.into(), dim, field })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Checks that `m` has the given shape and lifts it into this space's field.
    pub(crate) fn admit(&self, m: &DenseMatrix, rows: usize, cols: usize, what: &str) -> Result<DenseMatrix> {
        if m.shape() != (rows, cols) {
            return shape_err(format!(
                "{what}: expected {rows}x{cols}, got {}x{}",
                m.rows(),
                m.cols()
            ));
        }
        m.to_field(self.field)
    }

    pub(crate) fn admit_ket(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        self.admit(x, self.dim, 1, "vector")
    }

    pub(crate) fn admit_bra(&self, y: &DenseMatrix) -> Result<DenseMatrix> {
        self.admit(y, 1, self.dim, "covector")
    }

    pub(crate) fn admit_operator(&self, f: &DenseMatrix) -> Result<DenseMatrix> {
        self.admit(f, self.dim, self.dim, "operator")
    }

    pub(crate) fn check_same(&self, other: &SpaceHandle) -> Result<()> {
        if self != other {
            return Err(Error::Space(format!("{self} vs {other}")));
        }
        Ok(())
    }
}

impl fmt::Display for SpaceHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, dim {})", self.label, self.field, self.dim)
    }
}

/// Basis of a space, with its dual basis cached as the inverse matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    space: SpaceHandle,
    matrix: DenseMatrix,
    inverse: DenseMatrix,
}

impl Basis {
    pub fn new(space: &SpaceHandle, matrix: &DenseMatrix) -> Result<Self> {
        let n = space.dim;
        let matrix = space.admit(matrix, n, n, "basis matrix")?;
        let lu = Lu::factor(&matrix)?;
        let det = lu.determinant().norm();
        let threshold = SINGULAR_BASIS_TOLERANCE * matrix.frobenius_norm().powi(n as i32);
        if det <= threshold {
            return Err(Error::SingularBasis { det, threshold });
        }
        let inverse = lu.inverse()?;
        Ok(Self { space: space.clone(), matrix, inverse })
    }

    /// For matrices invertible by construction (orthonormal for some inner
    /// product), where the determinant heuristic in [`Basis::new`] would
    /// reject columns of very different lengths.
    pub(crate) fn certified(space: &SpaceHandle, matrix: &DenseMatrix) -> Result<Self> {
        let n = space.dim;
        let matrix = space.admit(matrix, n, n, "basis matrix")?;
        let inverse = Lu::factor(&matrix)?.inverse()?;
        Ok(Self { space: space.clone(), matrix, inverse })
    }

    pub fn natural(space: &SpaceHandle) -> Self {
        let id = DenseMatrix::identity(space.dim, space.field);
        Self { space: space.clone(), matrix: id.clone(), inverse: id }
    }

    pub fn space(&self) -> &SpaceHandle {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    /// Column j holds the natural-frame coordinates of e_j.
    pub fn matrix(&self) -> &DenseMatrix {
        &self.matrix
    }

    /// Row i realises the dual covector ê^i.
    pub fn inverse(&self) -> &DenseMatrix {
        &self.inverse
    }

    pub fn vector(&self, j: usize) -> DenseMatrix {
        self.matrix.column(j)
    }

    pub fn covector(&self, i: usize) -> DenseMatrix {
        self.inverse.row(i)
    }
}

/// Components `x^i` of a vector in a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorInBasis {
    pub basis: Basis,
    pub components: DenseMatrix,
}

impl VectorInBasis {
    pub fn to_natural(&self) -> DenseMatrix {
        matmul(self.basis.matrix(), &self.components).expect("basis and components agree in shape")
    }
}

/// Components `ŷ_i` of a covector in a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CovectorInBasis {
    pub basis: Basis,
    pub components: DenseMatrix,
}

impl CovectorInBasis {
    pub fn to_natural(&self) -> DenseMatrix {
        matmul(&self.components, self.basis.inverse()).expect("basis and components agree in shape")
    }
}

/// Dual pairing `⟨ŷ, x⟩ = ŷ_i x^i` of components taken in the same basis.
pub fn pairing(y: &CovectorInBasis, x: &VectorInBasis) -> Result<Scalar> {
    y.basis.space.check_same(&x.basis.space)?;
    if y.basis.matrix.distance(&x.basis.matrix) != 0.0 {
        return Err(Error::Space("pairing components taken in different bases".into()));
    }
    Ok(matmul(&y.components, &x.components)?.get(0, 0))
}

/// Matrix of a linear map between two bases.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMapRep {
    pub domain: Basis,
    pub codomain: Basis,
    pub matrix: DenseMatrix,
}

impl LinearMapRep {
    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }

    /// Natural-frame matrix of the represented map.
    pub fn to_natural(&self) -> DenseMatrix {
        matmul(&matmul(self.codomain.matrix(), &self.matrix).expect("shapes"), self.domain.inverse())
            .expect("shapes")
    }

    /// Representation of `self ∘ inner` (requires matching middle bases).
    pub fn compose(&self, inner: &LinearMapRep) -> Result<LinearMapRep> {
        if self.domain != inner.codomain {
            return Err(Error::Space("composition through different bases".into()));
        }
        Ok(LinearMapRep {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: matmul(&self.matrix, &inner.matrix)?,
        })
    }
}

/// Dual basis as the rows of `B⁻¹`.
pub fn dual_basis(b: &Basis) -> DenseMatrix {
    b.inverse.clone()
}

/// `x^i = ⟨ê^i, x⟩`, i.e. `B⁻¹·x`.
pub fn rep_vector(x_nat: &DenseMatrix, b: &Basis) -> Result<VectorInBasis> {
    let x = b.space.admit_ket(x_nat)?;
    Ok(VectorInBasis { basis: b.clone(), components: matmul(&b.inverse, &x)? })
}

/// `ŷ_i = ⟨ŷ, e_i⟩`, i.e. `y·B`.
pub fn rep_covector(y_nat: &DenseMatrix, b: &Basis) -> Result<CovectorInBasis> {
    let y = b.space.admit_bra(y_nat)?;
    Ok(CovectorInBasis { basis: b.clone(), components: matmul(&y, &b.matrix)? })
}

/// Change-of-basis matrix `M = B_new⁻¹·B`, with `M^i_j = ⟨ê'^i, e_j⟩`.
///
/// Vector components transform as `|x'⟩ = M|x⟩`, covector components as
/// `⟨ŷ'| = ⟨ŷ|M⁻¹`.
pub fn change_of_basis(e: &Basis, e_new: &Basis) -> Result<DenseMatrix> {
    e.space.check_same(&e_new.space)?;
    matmul(&e_new.inverse, &e.matrix)
}

/// Matrix of `f` between `e_dom` and `e_cod`: `B_cod⁻¹·f·B_dom`.
pub fn represent_map(f_nat: &DenseMatrix, e_dom: &Basis, e_cod: &Basis) -> Result<LinearMapRep> {
    let field = e_dom.space.field.join(e_cod.space.field);
    let f = e_dom.space.admit(f_nat, e_cod.dim(), e_dom.dim(), "map")?.to_field(field)?;
    let matrix = matmul(&matmul(&e_cod.inverse, &f)?, &e_dom.matrix)?;
    Ok(LinearMapRep { domain: e_dom.clone(), codomain: e_cod.clone(), matrix })
}

/// `|f'| = M|f|M⁻¹` for an endomorphism moved to `e_new`.
pub fn conjugate_representation(rep: &LinearMapRep, e_new: &Basis) -> Result<LinearMapRep> {
    if !rep.is_endomorphism() {
        return shape_err("conjugate_representation needs an endomorphism in a single basis");
    }
    let m = change_of_basis(&rep.domain, e_new)?;
    let m_inv = change_of_basis(e_new, &rep.domain)?;
    let matrix = matmul(&matmul(&m, &rep.matrix)?, &m_inv)?;
    Ok(LinearMapRep { domain: e_new.clone(), codomain: e_new.clone(), matrix })
}

pub fn operator_determinant(rep: &LinearMapRep) -> Result<Scalar> {
    if !rep.is_endomorphism() {
        return shape_err("determinant of a map that is not an endomorphism");
    }
    rep.matrix.determinant()
}

/// Dimensions of image and kernel of a map `f: K^n → K^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankNullity {
    pub rank: usize,
    pub nullity: usize,
}

/// Rank from the echelon pivots and nullity from an explicit kernel basis.
pub fn rank_nullity(f: &DenseMatrix) -> RankNullity {
    RankNullity {
        rank: rank(f, RANK_TOLERANCE),
        nullity: kernel_basis(f, RANK_TOLERANCE).map_or(0, |k| k.cols()),
    }
}

/// Domain and codomain bases in which `f` takes the form `diag(𝟙_r, 0)`.
///
/// The domain basis is a complement of the kernel followed by a kernel
/// basis; the codomain basis starts with the images of the complement and
/// is completed with natural basis vectors.
pub fn rank_normal_form(
    f_nat: &DenseMatrix,
    domain: &SpaceHandle,
    codomain: &SpaceHandle,
) -> Result<(Basis, Basis)> {
    let (m, n) = (codomain.dim, domain.dim);
    let field = domain.field.join(codomain.field);
    let f = domain.admit(f_nat, m, n, "map")?.to_field(field)?;
    let kernel = kernel_basis(&f, RANK_TOLERANCE);
    let nullity = kernel.as_ref().map_or(0, DenseMatrix::cols);
    let r = n - nullity;

    // Complement of the kernel: natural vectors at the pivot columns of f.
    let mut complement = Vec::new();
    let mut acc: Vec<DenseMatrix> = kernel.iter().flat_map(|k| (0..k.cols()).map(|j| k.column(j))).collect();
    for j in 0..n {
        if complement.len() == r {
            break;
        }
        let candidate = DenseMatrix::basis_ket(n, j, field);
        let mut trial = acc.clone();
        trial.push(candidate.clone());
        if rank(&DenseMatrix::from_columns(&trial)?, RANK_TOLERANCE) == trial.len() {
            acc = trial;
            complement.push(candidate);
        }
    }
    let mut dom_cols = complement.clone();
    if let Some(k) = &kernel {
        dom_cols.extend((0..k.cols()).map(|j| k.column(j)));
    }

    let mut cod_cols = complement.iter().map(|c| matmul(&f, c)).collect::<Result<Vec<_>>>()?;
    for i in 0..m {
        if cod_cols.len() == m {
            break;
        }
        let mut trial = cod_cols.clone();
        trial.push(DenseMatrix::basis_ket(m, i, field));
        if rank(&DenseMatrix::from_columns(&trial)?, RANK_TOLERANCE) == trial.len() {
            cod_cols = trial;
        }
    }
    let dom = Basis::new(domain, &DenseMatrix::from_columns(&dom_cols)?)?;
    let cod = Basis::new(codomain, &DenseMatrix::from_columns(&cod_cols)?)?;
    Ok((dom, cod))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::real;

    fn space(n: usize) -> SpaceHandle {
        SpaceHandle::new("V", n, Field::Real).unwrap()
    }

    fn ket(v: &[f64]) -> DenseMatrix {
        DenseMatrix::ket(Field::Real, &v.iter().map(|&x| real(x)).collect::<Vec<_>>()).unwrap()
    }

    fn bra(v: &[f64]) -> DenseMatrix {
        DenseMatrix::bra(Field::Real, &v.iter().map(|&x| real(x)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn natural_dual_basis_is_identity() {
        let v = space(3);
        assert_eq!(dual_basis(&Basis::natural(&v)), DenseMatrix::identity(3, Field::Real));
    }

    #[test]
    fn diagonal_basis_duals_and_components() {
        let v = space(2);
        let b = Basis::new(&v, &DenseMatrix::diag_real(&[2.0, 4.0])).unwrap();
        assert_eq!(dual_basis(&b), DenseMatrix::diag_real(&[0.5, 0.25]));
        let x = rep_vector(&ket(&[2.0, 4.0]), &b).unwrap();
        assert_eq!(x.components, ket(&[1.0, 1.0]));
        assert_eq!(x.to_natural(), ket(&[2.0, 4.0]));
        let y = rep_covector(&bra(&[1.0, 0.0]), &b).unwrap();
        assert_eq!(y.components, bra(&[2.0, 0.0]));
    }

    #[test]
    fn change_of_basis_to_diagonal() {
        let v = space(2);
        let e = Basis::natural(&v);
        let e_new = Basis::new(&v, &DenseMatrix::diag_real(&[2.0, 4.0])).unwrap();
        assert_eq!(change_of_basis(&e, &e_new).unwrap(), DenseMatrix::diag_real(&[0.5, 0.25]));
        assert_eq!(change_of_basis(&e, &e).unwrap(), DenseMatrix::identity(2, Field::Real));
    }

    #[test]
    fn space_mismatch_is_reported() {
        let e = Basis::natural(&space(2));
        let w = Basis::natural(&SpaceHandle::new("W", 2, Field::Real).unwrap());
        assert!(matches!(change_of_basis(&e, &w), Err(Error::Space(_))));
    }

    #[test]
    fn singular_basis_rejected() {
        let v = space(2);
        let b = DenseMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(Basis::new(&v, &b), Err(Error::SingularBasis { .. })));
    }

    #[test]
    fn length_mismatch_is_shape_error() {
        let b = Basis::natural(&space(3));
        assert!(matches!(rep_vector(&ket(&[1.0, 2.0]), &b), Err(Error::Shape(_))));
        assert!(matches!(rep_covector(&bra(&[1.0]), &b), Err(Error::Shape(_))));
    }

    #[test]
    fn projector_determinant_is_zero() {
        let v = space(2);
        let rep = represent_map(&DenseMatrix::diag_real(&[1.0, 0.0]), &Basis::natural(&v), &Basis::natural(&v)).unwrap();
        assert_eq!(operator_determinant(&rep).unwrap(), real(0.0));
        let id = represent_map(&DenseMatrix::identity(2, Field::Real), &Basis::natural(&v), &Basis::natural(&v)).unwrap();
        assert_eq!(operator_determinant(&id).unwrap(), real(1.0));
    }

    #[test]
    fn non_endomorphism_rejected() {
        let v = space(2);
        let b = Basis::new(&v, &DenseMatrix::diag_real(&[1.0, 2.0])).unwrap();
        let rep = represent_map(&DenseMatrix::identity(2, Field::Real), &Basis::natural(&v), &b).unwrap();
        assert!(matches!(conjugate_representation(&rep, &b), Err(Error::Shape(_))));
        assert!(matches!(operator_determinant(&rep), Err(Error::Shape(_))));
    }

    #[test]
    fn rank_normal_form_of_rank_one_map() {
        let v = space(3);
        let w = SpaceHandle::new("W", 2, Field::Real).unwrap();
        let f = DenseMatrix::from_real_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap();
        let (dom, cod) = rank_normal_form(&f, &v, &w).unwrap();
        let rep = represent_map(&f, &dom, &cod).unwrap();
        let expected = DenseMatrix::from_real_rows(&[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 0.0]]).unwrap();
        assert!(rep.matrix.distance(&expected) < 1e-12);
        assert_eq!(rank_nullity(&f), RankNullity { rank: 1, nullity: 2 });
    }
}
