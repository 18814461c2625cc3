//! Dense matrices over the real or complex field.
//!
//! A [`DenseMatrix`] is an immutable row-major array of [`Scalar`] values
//! tagged with the [`Field`] it lives over. Real matrices store complex
//! numbers with zero imaginary part, so conjugation reduces to the identity
//! and every algorithm below serves both fields.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{shape_err, Error, Result};

/// Element of the real or complex field.
pub type Scalar = Complex64;

/// Default relative tolerance of the classification predicates.
pub const CLASSIFY_TOLERANCE: f64 = 1e-9;

pub(crate) const ZERO: Scalar = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Scalar = Complex64::new(1.0, 0.0);

/// Real scalar lifted into the complex carrier.
pub fn real(x: f64) -> Scalar {
    Complex64::new(x, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Smallest field containing both operands.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Structural classes reported by [`classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatrixClass {
    Hermitian,
    Unitary,
    Symmetric,
    Orthogonal,
    Singular,
}

impl MatrixClass {
    pub fn as_str(self) -> &'static str {
        match self {
            MatrixClass::Hermitian => "hermitian",
            MatrixClass::Unitary => "unitary",
            MatrixClass::Symmetric => "symmetric",
            MatrixClass::Orthogonal => "orthogonal",
            MatrixClass::Singular => "singular",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major entries, validating shape and field.
    pub fn new(rows: usize, cols: usize, field: Field, data: Vec<Scalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return shape_err(format!("matrix dimensions must be positive, got {rows}x{cols}"));
        }
        if data.len() != rows * cols {
            return shape_err(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            ));
        }
        if field == Field::Real {
            if let Some(z) = data.iter().find(|z| z.im != 0.0) {
                return Err(Error::Field(format!("real matrix holds complex entry {z}")));
            }
        }
        Ok(Self { rows, cols, field, data })
    }

    /// Internal constructor; real matrices get their imaginary parts cleared.
    pub(crate) fn from_parts(rows: usize, cols: usize, field: Field, mut data: Vec<Scalar>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        if field == Field::Real {
            for z in &mut data {
                z.im = 0.0;
            }
        }
        Self { rows, cols, field, data }
    }

    pub fn from_fn(rows: usize, cols: usize, field: Field, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_parts(rows, cols, field, data)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return shape_err("ragged rows");
        }
        let data = rows.iter().flatten().map(|&x| real(x)).collect();
        Self::new(nrows, ncols, Field::Real, data)
    }

    pub fn from_complex_rows(rows: &[Vec<Scalar>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return shape_err("ragged rows");
        }
        let data = rows.iter().flatten().copied().collect();
        Self::new(nrows, ncols, Field::Complex, data)
    }

    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Self::from_fn(rows, cols, field, |_, _| ZERO)
    }

    pub fn identity(n: usize, field: Field) -> Self {
        Self::from_fn(n, n, field, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag(values: &[Scalar], field: Field) -> Self {
        let n = values.len();
        Self::from_fn(n, n, field, |i, j| if i == j { values[i] } else { ZERO })
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, Field::Real, |i, j| if i == j { real(values[i]) } else { ZERO })
    }

    /// Column matrix |x⟩.
    pub fn ket(field: Field, entries: &[Scalar]) -> Result<Self> {
        Self::new(entries.len(), 1, field, entries.to_vec())
    }

    /// Row matrix ⟨x|.
    pub fn bra(field: Field, entries: &[Scalar]) -> Result<Self> {
        Self::new(1, entries.len(), field, entries.to_vec())
    }

    /// Natural basis ket |i⟩ (0-based index).
    pub fn basis_ket(n: usize, i: usize, field: Field) -> Self {
        Self::from_fn(n, 1, field, |r, _| if r == i { ONE } else { ZERO })
    }

    /// Natural basis bra ⟨i| (0-based index).
    pub fn basis_bra(n: usize, i: usize, field: Field) -> Self {
        Self::from_fn(1, n, field, |_, c| if c == i { ONE } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_ket(&self) -> bool {
        self.cols == 1
    }

    pub fn is_bra(&self) -> bool {
        self.rows == 1
    }

    pub fn column(&self, j: usize) -> DenseMatrix {
        Self::from_fn(self.rows, 1, self.field, |i, _| self.get(i, j))
    }

    pub fn row(&self, i: usize) -> DenseMatrix {
        Self::from_fn(1, self.cols, self.field, |_, j| self.get(i, j))
    }

    /// Assembles a matrix from equally long kets placed side by side.
    pub fn from_columns(columns: &[DenseMatrix]) -> Result<Self> {
        let first = columns.first().ok_or_else(|| Error::Shape("no columns given".into()))?;
        let n = first.rows;
        let field = columns.iter().fold(Field::Real, |f, c| f.join(c.field));
        if columns.iter().any(|c| c.cols != 1 || c.rows != n) {
            return shape_err(format!("columns must all be kets of length {n}"));
        }
        Ok(Self::from_fn(n, columns.len(), field, |i, j| columns[j].get(i, 0)))
    }

    /// Re-tags the matrix over `field`. Real to complex always succeeds.
    pub fn to_field(&self, field: Field) -> Result<Self> {
        match (self.field, field) {
            (a, b) if a == b => Ok(self.clone()),
            (Field::Real, Field::Complex) => Ok(Self { field, ..self.clone() }),
            _ => Err(Error::Field("cannot narrow a complex matrix to the real field".into())),
        }
    }

    fn same_field(&self, other: &Self, op: &str) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Field(format!("{op}: {} vs {}", self.field, other.field)));
        }
        Ok(())
    }

    fn same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.shape() != other.shape() {
            return shape_err(format!(
                "{op}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        matmul(self, other)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        self.same_field(other, "add")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts(self.rows, self.cols, self.field, data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "sub")?;
        self.same_field(other, "sub")?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self::from_parts(self.rows, self.cols, self.field, data))
    }

    /// αA. A complex α promotes a real matrix to the complex field.
    pub fn scale(&self, alpha: Scalar) -> Self {
        let field = if alpha.im != 0.0 { Field::Complex } else { self.field };
        let data = self.data.iter().map(|z| alpha * z).collect();
        Self::from_parts(self.rows, self.cols, field, data)
    }

    pub fn hermitian_conjugate(&self) -> Self {
        hermitian_conjugate(self)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.field, |i, j| self.get(j, i))
    }

    pub fn conjugate(&self) -> Self {
        let data = self.data.iter().map(|z| z.conj()).collect();
        Self::from_parts(self.rows, self.cols, self.field, data)
    }

    pub fn trace(&self) -> Result<Scalar> {
        if !self.is_square() {
            return shape_err("trace of a non-square matrix");
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm of `self - other`; infinite when the shapes differ.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Hermitian part (A + A⁺)/2; leaves exactly Hermitian input unchanged.
    pub fn hermitian_part(&self) -> Result<Self> {
        if !self.is_square() {
            return shape_err("Hermitian part of a non-square matrix");
        }
        Ok(Self::from_fn(self.rows, self.cols, self.field, |i, j| {
            (self.get(i, j) + self.get(j, i).conj()) * 0.5
        }))
    }

    pub fn determinant(&self) -> Result<Scalar> {
        determinant(self)
    }

    pub fn inverse(&self) -> Result<Self> {
        Lu::factor(self)?.inverse()
    }

    /// Solves `self · X = rhs`.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        Lu::factor(self)?.solve(rhs)
    }

    pub fn kronecker(&self, other: &Self) -> Result<Self> {
        kronecker_product(self, other)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

pub fn matmul(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    if a.cols != b.rows {
        return shape_err(format!(
            "matmul: ({}x{})·({}x{})",
            a.rows, a.cols, b.rows, b.cols
        ));
    }
    a.same_field(b, "matmul")?;
    let mut data = vec![ZERO; a.rows * b.cols];
    for i in 0..a.rows {
        let out = &mut data[i * b.cols..(i + 1) * b.cols];
        for k in 0..a.cols {
            let aik = a.data[i * a.cols + k];
            if aik == ZERO {
                continue;
            }
            let brow = &b.data[k * b.cols..(k + 1) * b.cols];
            for (o, bkj) in out.iter_mut().zip(brow) {
                *o += aik * bkj;
            }
        }
    }
    Ok(DenseMatrix::from_parts(a.rows, b.cols, a.field, data))
}

/// (A⁺)^i_j = conj(A^j_i); the transpose for real matrices.
pub fn hermitian_conjugate(a: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(a.cols, a.rows, a.field, |i, j| a.get(j, i).conj())
}

/// Determinant via LU with partial pivoting.
pub fn determinant(a: &DenseMatrix) -> Result<Scalar> {
    if !a.is_square() {
        return shape_err(format!("determinant of a {}x{} matrix", a.rows, a.cols));
    }
    Ok(Lu::factor(a)?.determinant())
}

/// Block matrix with block (i,j) equal to A^i_j·B.
pub fn kronecker_product(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    a.same_field(b, "kronecker product")?;
    let (m1, n1) = a.shape();
    let (m2, n2) = b.shape();
    Ok(DenseMatrix::from_fn(m1 * m2, n1 * n2, a.field, |r, c| {
        a.get(r / m2, c / n2) * b.get(r % m2, c % n2)
    }))
}

/// Evaluates the structural predicates at [`CLASSIFY_TOLERANCE`].
pub fn classify(a: &DenseMatrix) -> Result<BTreeSet<MatrixClass>> {
    classify_with(a, CLASSIFY_TOLERANCE)
}

pub fn classify_with(a: &DenseMatrix, tol: f64) -> Result<BTreeSet<MatrixClass>> {
    if !a.is_square() {
        return shape_err(format!("classify needs a square matrix, got {}x{}", a.rows, a.cols));
    }
    let n = a.rows;
    let norm = a.frobenius_norm();
    let scale = norm.max(1.0);
    let id = DenseMatrix::identity(n, a.field);
    let adj = a.hermitian_conjugate();
    let real_valued = a.data.iter().all(|z| z.im.abs() <= tol * scale);

    let mut classes = BTreeSet::new();
    if adj.distance(a) <= tol * scale {
        classes.insert(MatrixClass::Hermitian);
    }
    if matmul(&adj, a)?.distance(&id) <= tol {
        classes.insert(MatrixClass::Unitary);
    }
    if real_valued {
        let t = a.transpose();
        if t.distance(a) <= tol * scale {
            classes.insert(MatrixClass::Symmetric);
        }
        if matmul(&t, a)?.distance(&id) <= tol {
            classes.insert(MatrixClass::Orthogonal);
        }
    }
    if determinant(a)?.norm() <= tol {
        classes.insert(MatrixClass::Singular);
    }
    Ok(classes)
}

/// LU factorisation with partial pivoting, `P·A = L·U`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    field: Field,
    lu: Vec<Scalar>,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

impl Lu {
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return shape_err(format!("LU of a {}x{} matrix", a.rows, a.cols));
        }
        let n = a.rows;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let mut singular = false;
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                if factor == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let ukj = lu[k * n + j];
                    lu[i * n + j] -= factor * ukj;
                }
            }
        }
        Ok(Self { n, field: a.field, lu, perm, sign, singular })
    }

    pub fn determinant(&self) -> Scalar {
        if self.singular {
            return ZERO;
        }
        (0..self.n).fold(real(self.sign), |acc, i| acc * self.lu[i * self.n + i])
    }

    pub fn solve(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.n;
        if rhs.rows != n {
            return shape_err(format!("solve: system of order {n}, right-hand side has {} rows", rhs.rows));
        }
        if self.singular {
            return Err(Error::SingularBasis { det: 0.0, threshold: 0.0 });
        }
        let field = self.field.join(rhs.field);
        let m = rhs.cols;
        let mut x = vec![ZERO; n * m];
        for (i, &p) in self.perm.iter().enumerate() {
            x[i * m..(i + 1) * m].copy_from_slice(&rhs.data[p * m..(p + 1) * m]);
        }
        for i in 0..n {
            for k in 0..i {
                let lik = self.lu[i * n + k];
                if lik == ZERO {
                    continue;
                }
                for j in 0..m {
                    let xkj = x[k * m + j];
                    x[i * m + j] -= lik * xkj;
                }
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let uik = self.lu[i * n + k];
                if uik == ZERO {
                    continue;
                }
                for j in 0..m {
                    let xkj = x[k * m + j];
                    x[i * m + j] -= uik * xkj;
                }
            }
            let d = self.lu[i * n + i];
            for j in 0..m {
                x[i * m + j] /= d;
            }
        }
        Ok(DenseMatrix::from_parts(n, m, field, x))
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        self.solve(&DenseMatrix::identity(self.n, self.field))
    }
}

/// Cholesky factor `L` with `A = L·L⁺` for a Hermitian positive definite `A`.
pub fn cholesky(a: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_square() {
        return shape_err("Cholesky of a non-square matrix");
    }
    let n = a.rows;
    let mut l = vec![ZERO; n * n];
    for j in 0..n {
        let mut d = a.get(j, j).re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { min_eigenvalue: d, threshold: 0.0 });
        }
        let d = d.sqrt();
        l[j * n + j] = real(d);
        for i in j + 1..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / d;
        }
    }
    Ok(DenseMatrix::from_parts(n, n, a.field, l))
}

/// Reduced row echelon form with partial pivoting; returns the pivot columns.
fn row_reduce(a: &DenseMatrix, tol: f64) -> (Vec<Scalar>, Vec<usize>) {
    let (m, n) = a.shape();
    let mut r = a.data.clone();
    let threshold = tol * a.max_abs().max(1.0);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        let (p, pmax) = (row..m)
            .map(|i| (i, r[i * n + col].norm()))
            .fold((row, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax <= threshold {
            for i in row..m {
                r[i * n + col] = ZERO;
            }
            continue;
        }
        for j in 0..n {
            r.swap(row * n + j, p * n + j);
        }
        let pivot = r[row * n + col];
        for j in 0..n {
            r[row * n + j] /= pivot;
        }
        for i in 0..m {
            if i == row {
                continue;
            }
            let factor = r[i * n + col];
            if factor == ZERO {
                continue;
            }
            for j in 0..n {
                let v = r[row * n + j];
                r[i * n + j] -= factor * v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (r, pivots)
}

/// Default pivot tolerance for rank decisions.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Numerical rank by row reduction with relative pivot tolerance `tol`.
pub fn rank(a: &DenseMatrix, tol: f64) -> usize {
    row_reduce(a, tol).1.len()
}

/// Columns spanning the kernel, one per free variable of the echelon form.
/// Returns `None` for an injective map.
pub fn kernel_basis(a: &DenseMatrix, tol: f64) -> Option<DenseMatrix> {
    let n = a.cols;
    let (r, pivots) = row_reduce(a, tol);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return None;
    }
    Some(DenseMatrix::from_fn(n, free.len(), a.field, |i, k| {
        let f = free[k];
        if i == f {
            ONE
        } else if let Some(prow) = pivots.iter().position(|&p| p == i) {
            -r[prow * n + f]
        } else {
            ZERO
        }
    }))
}
