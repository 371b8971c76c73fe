//! Dense Hermitian helpers on top of nalgebra.
//!
//! Real-valued inputs are routed through the `f64` eigensolver; it is both
//! faster and gives identical results to the complex path on real data.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

fn as_real(m: &DMatrix<C64>) -> Option<DMatrix<f64>> {
    if m.iter().all(|z| z.im == 0.0) {
        Some(m.map(|z| z.re))
    } else {
        None
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut ev: Vec<f64> = match as_real(m) {
        Some(r) => r.symmetric_eigenvalues().iter().copied().collect(),
        None => m.clone().symmetric_eigenvalues().iter().copied().collect(),
    };
    ev.sort_by(f64::total_cmp);
    ev
}

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending; column `k` of the
/// returned matrix is the eigenvector of eigenvalue `k`.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), DMatrix::zeros(0, 0));
    }
    let (vals, vecs): (Vec<f64>, DMatrix<C64>) = match as_real(m) {
        Some(r) => {
            let e = r.symmetric_eigen();
            (e.eigenvalues.iter().copied().collect(), e.eigenvectors.map(|v| C64::new(v, 0.0)))
        }
        None => {
            let e = m.clone().symmetric_eigen();
            (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let sorted_vals = order.iter().map(|&k| vals[k]).collect();
    let sorted_vecs = DMatrix::from_fn(n, n, |i, j| vecs[(i, order[j])]);
    (sorted_vals, sorted_vecs)
}

pub fn min_eigenvalue(m: &DMatrix<C64>) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(0.0)
}

/// `‖m‖ = sqrt(λ_max(m* m))`.
pub fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    hermitian_eigenvalues(&gram).last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Largest singular value and a matching unit right-singular vector.
pub fn top_right_singular(m: &DMatrix<C64>) -> (f64, DVector<C64>) {
    let gram = m.adjoint() * m;
    let (vals, vecs) = hermitian_eigen(&gram);
    let k = vals.len() - 1;
    let v = vecs.column(k).into_owned();
    let norm = v.norm();
    (vals[k].max(0.0).sqrt(), v / C64::new(norm, 0.0))
}

/// Top singular triple `(σ, u, v)` with `m v = σ u`.
pub fn top_singular_triple(m: &DMatrix<C64>) -> (f64, DVector<C64>, DVector<C64>) {
    let (sigma, v) = top_right_singular(m);
    let mv = m * &v;
    let norm = mv.norm();
    let u = if norm > 0.0 {
        mv / C64::new(norm, 0.0)
    } else {
        let mut e = DVector::zeros(m.nrows());
        if m.nrows() > 0 {
            e[0] = ONE;
        }
        e
    };
    (sigma, u, v)
}

/// Square root of a Hermitian PSD matrix via eigendecomposition; negative
/// eigenvalues are clipped to zero. Returns the root and the smallest
/// eigenvalue seen before clipping.
pub fn psd_sqrt(m: &DMatrix<C64>) -> (DMatrix<C64>, f64) {
    let (vals, vecs) = hermitian_eigen(m);
    let min = vals.first().copied().unwrap_or(0.0);
    let roots: Vec<C64> = vals.iter().map(|&l| C64::new(l.max(0.0).sqrt(), 0.0)).collect();
    let scaled = DMatrix::from_fn(vecs.nrows(), vecs.ncols(), |i, j| vecs[(i, j)] * roots[j]);
    (scaled * vecs.adjoint(), min)
}

/// `Σ_i conj(a_i) b_i`, i.e. `⟨b, a⟩` in the convention linear in the first slot.
pub(crate) fn dot_conj(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
