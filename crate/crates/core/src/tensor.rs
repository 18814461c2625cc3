//! Variance-tagged tensors over a single pair `(V, V*)`.
//!
//! Components are stored row-major over slot order, leftmost slot slowest.
//! Slot indices in the public API are 1-based.

use std::fmt;

use crate::duality::SpaceHandle;
use crate::error::{shape_err, Error, Result};
use crate::matrix::{DenseMatrix, Field, Lu, Scalar, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    /// Contravariant slot, a factor of V.
    Up,
    /// Covariant slot, a factor of V*.
    Down,
}

impl Variance {
    pub fn flipped(self) -> Self {
        match self {
            Variance::Up => Variance::Down,
            Variance::Down => Variance::Up,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variance::Up => "up",
            Variance::Down => "down",
        }
    }
}

impl fmt::Display for Variance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    space: SpaceHandle,
    slots: Vec<Variance>,
    components: Vec<Scalar>,
}

impl Tensor {
    pub fn new(space: &SpaceHandle, slots: Vec<Variance>, components: Vec<Scalar>) -> Result<Self> {
        let expected = space.dim().pow(slots.len() as u32);
        if components.len() != expected {
            return shape_err(format!(
                "tensor with {} slots over dim {} needs {expected} components, got {}",
                slots.len(),
                space.dim(),
                components.len()
            ));
        }
        if space.field() == Field::Real && components.iter().any(|z| z.im != 0.0) {
            return Err(Error::Field("real tensor holds complex components".into()));
        }
        Ok(Self { space: space.clone(), slots, components })
    }

    fn from_parts(space: &SpaceHandle, slots: Vec<Variance>, mut components: Vec<Scalar>) -> Self {
        if space.field() == Field::Real {
            for z in &mut components {
                z.im = 0.0;
            }
        }
        Self { space: space.clone(), slots, components }
    }

    pub fn scalar(space: &SpaceHandle, value: Scalar) -> Result<Self> {
        Self::new(space, Vec::new(), vec![value])
    }

    /// Rank-(1,0) tensor from a ket.
    pub fn from_ket(space: &SpaceHandle, x: &DenseMatrix) -> Result<Self> {
        let x = space.admit_ket(x)?;
        Ok(Self::from_parts(space, vec![Variance::Up], x.data().to_vec()))
    }

    /// Rank-(0,1) tensor from a bra.
    pub fn from_bra(space: &SpaceHandle, y: &DenseMatrix) -> Result<Self> {
        let y = space.admit_bra(y)?;
        Ok(Self::from_parts(space, vec![Variance::Down], y.data().to_vec()))
    }

    /// Operator `f^i_j` as a tensor with slots (up, down).
    pub fn from_operator(space: &SpaceHandle, f: &DenseMatrix) -> Result<Self> {
        let f = space.admit_operator(f)?;
        Ok(Self::from_parts(space, vec![Variance::Up, Variance::Down], f.data().to_vec()))
    }

    pub fn space(&self) -> &SpaceHandle {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn slots(&self) -> &[Variance] {
        &self.slots
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn components(&self) -> &[Scalar] {
        &self.components
    }

    /// Component at 0-based multi-index.
    pub fn get(&self, index: &[usize]) -> Scalar {
        self.components[self.flat_index(index)]
    }

    fn flat_index(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.slots.len());
        index.iter().fold(0, |acc, &i| acc * self.dim() + i)
    }

    fn stride(&self, slot: usize) -> usize {
        self.dim().pow((self.slots.len() - 1 - slot) as u32)
    }

    pub fn scale(&self, alpha: Scalar) -> Result<Self> {
        let components = self.components.iter().map(|z| alpha * z).collect();
        Self::new(&self.space, self.slots.clone(), components)
    }

    pub fn add(&self, other: &Tensor) -> Result<Self> {
        self.space.check_same(&other.space)?;
        if self.slots != other.slots {
            return Err(Error::Variance("sum of tensors with different slot signatures".into()));
        }
        let components = self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts(&self.space, self.slots.clone(), components))
    }

    /// Largest componentwise modulus of `self - other`; infinite for mismatched tensors.
    pub fn max_abs_diff(&self, other: &Tensor) -> f64 {
        if self.slots != other.slots || self.space != other.space {
            return f64::INFINITY;
        }
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Applies `w` along one 0-based slot: `τ'[…a…] = Σ_b w[a][b] τ[…b…]`.
    pub(crate) fn apply_along(&self, slot: usize, w: &DenseMatrix, variance: Variance) -> Tensor {
        let n = self.dim();
        let stride = self.stride(slot);
        let mut out = vec![ZERO; self.components.len()];
        for (flat, value) in out.iter_mut().enumerate() {
            let a = (flat / stride) % n;
            let base = flat - a * stride;
            *value = (0..n).map(|b| w.get(a, b) * self.components[base + b * stride]).sum();
        }
        let mut slots = self.slots.clone();
        slots[slot] = variance;
        Tensor::from_parts(&self.space, slots, out)
    }

    fn check_slot(&self, slot: usize) -> Result<usize> {
        if slot == 0 || slot > self.slots.len() {
            return shape_err(format!("slot {slot} out of range 1..={}", self.slots.len()));
        }
        Ok(slot - 1)
    }

    /// Reorders slots so that position `k` takes old slot `perm[k]` (0-based).
    pub fn permute_slots(&self, perm: &[usize]) -> Result<Tensor> {
        let r = self.rank();
        let mut seen = vec![false; r];
        if perm.len() != r || perm.iter().any(|&p| p >= r || std::mem::replace(&mut seen[p], true)) {
            return shape_err(format!("{perm:?} is not a permutation of {r} slots"));
        }
        let n = self.dim();
        let slots = perm.iter().map(|&p| self.slots[p]).collect();
        let mut out = vec![ZERO; self.components.len()];
        let mut old_index = vec![0; r];
        for (flat, value) in out.iter_mut().enumerate() {
            let mut rest = flat;
            for k in (0..r).rev() {
                old_index[perm[k]] = rest % n;
                rest /= n;
            }
            *value = self.components[self.flat_index(&old_index)];
        }
        Ok(Tensor::from_parts(&self.space, slots, out))
    }

    /// Stable sort putting UP slots before DOWN slots; returns the applied
    /// permutation alongside the sorted tensor.
    pub fn sort_slots(&self) -> (Tensor, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.rank()).collect();
        perm.sort_by_key(|&k| self.slots[k] == Variance::Down);
        let sorted = self.permute_slots(&perm).expect("sort order is a permutation");
        (sorted, perm)
    }
}

/// Outer product; slot signature is the concatenation.
pub fn tensor_product(t1: &Tensor, t2: &Tensor) -> Result<Tensor> {
    t1.space.check_same(&t2.space)?;
    let mut components = Vec::with_capacity(t1.components.len() * t2.components.len());
    for a in &t1.components {
        components.extend(t2.components.iter().map(|b| a * b));
    }
    let slots = t1.slots.iter().chain(&t2.slots).copied().collect();
    Ok(Tensor::from_parts(&t1.space, slots, components))
}

/// Contraction of slots `k` and `l` (1-based), which must differ in variance.
pub fn contract(t: &Tensor, k: usize, l: usize) -> Result<Tensor> {
    let k0 = t.check_slot(k)?;
    let l0 = t.check_slot(l)?;
    if k0 == l0 {
        return shape_err("cannot contract a slot with itself");
    }
    if t.slots[k0] == t.slots[l0] {
        return Err(Error::Variance(format!(
            "slots {k} and {l} are both {}",
            t.slots[k0]
        )));
    }
    let n = t.dim();
    let kept: Vec<usize> = (0..t.rank()).filter(|&s| s != k0 && s != l0).collect();
    let slots: Vec<Variance> = kept.iter().map(|&s| t.slots[s]).collect();
    let count = n.pow(kept.len() as u32);
    let mut components = Vec::with_capacity(count);
    let mut index = vec![0; t.rank()];
    for flat in 0..count {
        let mut rest = flat;
        for &s in kept.iter().rev() {
            index[s] = rest % n;
            rest /= n;
        }
        let mut sum = ZERO;
        for d in 0..n {
            index[k0] = d;
            index[l0] = d;
            sum += t.get(&index);
        }
        components.push(sum);
    }
    Ok(Tensor::from_parts(&t.space, slots, components))
}

/// Contracts the first UP slot with the first DOWN slot until none of one
/// kind remain. A tensor in `T^n_n` reduces to a scalar.
pub fn full_trace(t: &Tensor) -> Result<Tensor> {
    let mut current = t.clone();
    loop {
        let up = current.slots.iter().position(|&v| v == Variance::Up);
        let down = current.slots.iter().position(|&v| v == Variance::Down);
        match (up, down) {
            (Some(u), Some(d)) => current = contract(&current, u + 1, d + 1)?,
            _ => return Ok(current),
        }
    }
}

/// Components after a change of basis with matrix `m`: UP slots pick up
/// `M`, DOWN slots pick up `M⁻¹`.
pub fn transform_tensor(t: &Tensor, m: &DenseMatrix) -> Result<Tensor> {
    let n = t.dim();
    let m = t.space.admit(m, n, n, "transformation matrix")?;
    let lu = Lu::factor(&m)?;
    if lu.determinant().norm() == 0.0 {
        return Err(Error::SingularBasis { det: 0.0, threshold: 0.0 });
    }
    // ŷ'_j = ŷ_i (M⁻¹)^i_j, i.e. the transpose of M⁻¹ acting along the slot.
    let m_inv_t = lu.inverse()?.transpose();
    let mut out = t.clone();
    for s in 0..t.rank() {
        out = match t.slots[s] {
            Variance::Up => out.apply_along(s, &m, Variance::Up),
            Variance::Down => out.apply_along(s, &m_inv_t, Variance::Down),
        };
    }
    Ok(out)
}

/// κ-flattening into a `dim^k × dim^l` matrix for a signature of `k` UP
/// slots followed by `l` DOWN slots. All-UP tensors become kets and
/// all-DOWN tensors bras. The flat index of `(i_1,…,i_k)` is row-major.
pub fn kron_flatten(t: &Tensor) -> Result<DenseMatrix> {
    let k = t.slots.iter().take_while(|&&v| v == Variance::Up).count();
    if t.slots[k..].contains(&Variance::Up) {
        return Err(Error::Variance(
            "interleaved variance; sort slots explicitly before flattening".into(),
        ));
    }
    let l = t.rank() - k;
    let n = t.dim();
    // Row-major storage over (up…, down…) is exactly the row-major matrix layout.
    DenseMatrix::new(n.pow(k as u32), n.pow(l as u32), t.space.field(), t.components.clone())
}

/// Inverse of [`kron_flatten`] for `up` leading UP slots and `down` DOWN slots.
pub fn kron_unflatten(flat: &DenseMatrix, space: &SpaceHandle, up: usize, down: usize) -> Result<Tensor> {
    let n = space.dim();
    let flat = space.admit(flat, n.pow(up as u32), n.pow(down as u32), "flattened tensor")?;
    let slots = std::iter::repeat_n(Variance::Up, up)
        .chain(std::iter::repeat_n(Variance::Down, down))
        .collect();
    Tensor::new(space, slots, flat.data().to_vec())
}
