//! Brute-force reference computations for tests.
//!
//! Everything here works on plain nested `Vec`s and shares no code with the
//! library under test. The algorithms are chosen to be different from the
//! library's: permutation sums instead of LU, characteristic polynomials
//! instead of Jacobi rotations, index arithmetic instead of block copies.

use num_complex::Complex64;

pub type C = Complex64;
pub type Mat = Vec<Vec<C>>;

fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    // Heap's algorithm, tracking the sign of each permutation.
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1;
    out.push((p.clone(), sign));
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            sign = -sign;
            out.push((p.clone(), sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// `det A = Σ_σ sgn(σ) Π_i a_{i,σ(i)}`. Factorial cost; intended for n ≤ 6.
pub fn levi_civita_det(a: &Mat) -> C {
    let n = a.len();
    if n == 0 {
        return C::new(1.0, 0.0);
    }
    permutations(n)
        .into_iter()
        .map(|(p, s)| (0..n).map(|i| a[i][p[i]]).product::<C>() * f64::from(s))
        .sum()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect())
        .collect()
}

/// `(A ⊗ B)[i·p + k][j·q + l] = A[i][j]·B[k][l]`, filled entry by entry.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (n, m, p, q) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut out = vec![vec![C::new(0.0, 0.0); m * q]; n * p];
    for (r, row) in out.iter_mut().enumerate() {
        for (s, v) in row.iter_mut().enumerate() {
            *v = a[r / p][s / q] * b[r % p][s % q];
        }
    }
    out
}

/// Coefficients `c_0..c_n` of `det(λ𝟙 − A) = Σ c_k λ^k` by Faddeev–LeVerrier.
pub fn char_poly(a: &Mat) -> Vec<C> {
    let n = a.len();
    let mut coeffs = vec![C::new(0.0, 0.0); n + 1];
    coeffs[n] = C::new(1.0, 0.0);
    let identity: Mat = (0..n)
        .map(|i| (0..n).map(|j| C::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
        .collect();
    let mut m = vec![vec![C::new(0.0, 0.0); n]; n];
    for k in 1..=n {
        let prev = coeffs[n - k + 1];
        let mut next = matmul(a, &m);
        for i in 0..n {
            next[i][i] += prev * identity[i][i];
        }
        m = next;
        let am = matmul(a, &m);
        let trace: C = (0..n).map(|i| am[i][i]).sum();
        coeffs[n - k] = -trace / k as f64;
    }
    coeffs
}

fn eval_poly(coeffs: &[C], z: C) -> C {
    coeffs.iter().rev().fold(C::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn derivative(coeffs: &[C]) -> Vec<C> {
    coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect()
}

/// Roots of a monic polynomial by Durand–Kerner followed by Newton polishing.
pub fn poly_roots(coeffs: &[C]) -> Vec<C> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<C> = coeffs.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = C::new(0.4, 0.9);
    let mut z: Vec<C> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let denom: C = (0..n).filter(|&j| j != i).map(|j| z[i] - z[j]).product();
            if denom.norm() == 0.0 {
                continue;
            }
            let step = eval_poly(&monic, z[i]) / denom;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    let d = derivative(&monic);
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let dp = eval_poly(&d, *zi);
            if dp.norm() < 1e-300 {
                break;
            }
            let step = eval_poly(&monic, *zi) / dp;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *zi -= step;
        }
    }
    z
}

/// Eigenvalues as roots of the characteristic polynomial, sorted by real part descending.
pub fn eigenvalues(a: &Mat) -> Vec<C> {
    let mut roots = poly_roots(&char_poly(a));
    roots.sort_by(|x, y| y.re.partial_cmp(&x.re).unwrap());
    roots
}

pub fn from_real(rows: &[Vec<f64>]) -> Mat {
    rows.iter().map(|r| r.iter().map(|&x| C::new(x, 0.0)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_count_and_signs() {
        let perms = permutations(4);
        assert_eq!(perms.len(), 24);
        assert_eq!(perms.iter().map(|(_, s)| s).sum::<i32>(), 0);
    }

    #[test]
    fn small_determinants() {
        assert_eq!(levi_civita_det(&from_real(&[vec![1.0, 2.0], vec![3.0, 4.0]])).re, -2.0);
        let a = from_real(&[vec![2.0, 0.0, 1.0], vec![1.0, 3.0, 2.0], vec![1.0, 1.0, 1.0]]);
        let b = from_real(&[vec![2.0, 0.0, 1.0], vec![1.0, 3.0, 2.0], vec![1.0, 1.0, 4.0]]);
        assert!((levi_civita_det(&b).re - 18.0).abs() < 1e-13);
        assert!(levi_civita_det(&a).norm() < 1e-14);
    }

    #[test]
    fn char_poly_of_diagonal() {
        let a = from_real(&[vec![2.0, 0.0], vec![0.0, -3.0]]);
        let c = char_poly(&a);
        assert_eq!(c, vec![C::new(-6.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 0.0)]);
        let ev = eigenvalues(&a);
        assert!((ev[0] - C::new(2.0, 0.0)).norm() < 1e-12);
        assert!((ev[1] - C::new(-3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn kron_block() {
        let a = from_real(&[vec![1.0, 2.0]]);
        let b = from_real(&[vec![1.0], vec![3.0]]);
        assert_eq!(kron(&a, &b), from_real(&[vec![1.0, 2.0], vec![3.0, 6.0]]));
    }
}
