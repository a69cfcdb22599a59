//! Shared helpers for unit tests: independent oracles and random inputs.
//!
//! `expm_oracle` deliberately avoids the spectral path used by the library
//! so the two can check each other.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Matrix exponential by scaling-and-squaring with a 20-term Taylor series.
/// Independent of `matfun`'s spectral evaluation.
pub fn expm_oracle(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / 2f64.powi(squarings as i32);
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=20u32 {
        term = &term * &scaled / k as f64;
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Largest entrywise error of `got` against `want`, relative to the scale
/// of `want`.
pub fn max_rel_err(got: &DMatrix<f64>, want: &DMatrix<f64>) -> f64 {
    let scale = want.norm().max(1e-300);
    (got - want).norm() / scale
}

pub fn max_rel_err_vec(got: &DVector<f64>, want: &DVector<f64>) -> f64 {
    let scale = want.norm().max(1e-300);
    (got - want).norm() / scale
}

/// Random symmetric matrix with entries of order `scale`.
pub fn random_symmetric(rng: &mut impl Rng, dim: usize, scale: f64) -> DMatrix<f64> {
    let raw = DMatrix::from_fn(dim, dim, |_, _| (rng.gen::<f64>() - 0.5) * 2.0 * scale);
    (&raw + raw.transpose()) * 0.5
}

/// Random symmetric matrix with eigenvalues drawn uniformly from
/// `[-spread, spread]`, built as Q·diag(λ)·Qᵀ from a random rotation.
pub fn random_symmetric_with_spread(rng: &mut impl Rng, dim: usize, spread: f64) -> DMatrix<f64> {
    let eigs = DVector::from_fn(dim, |_, _| (rng.gen::<f64>() - 0.5) * 2.0 * spread);
    let raw = DMatrix::from_fn(dim, dim, |_, _| rng.gen::<f64>() - 0.5);
    // QR of a random matrix gives a random orthogonal Q
    let q = raw.qr().q();
    &q * DMatrix::from_diagonal(&eigs) * q.transpose()
}

/// Central finite difference of a scalar function, with relative step
/// scaling.
pub fn fd_gradient(f: impl Fn(&DVector<f64>) -> f64, x: &DVector<f64>) -> DVector<f64> {
    let dim = x.len();
    DVector::from_fn(dim, |i, _| {
        let h = 1e-5 * x[i].abs().max(1.0);
        let mut up = x.clone();
        up[i] += h;
        let mut dn = x.clone();
        dn[i] -= h;
        (f(&up) - f(&dn)) / (2.0 * h)
    })
}

/// Central finite difference of a vector-valued function (e.g. a gradient),
/// symmetrized.
pub fn fd_jacobian_sym(
    g: impl Fn(&DVector<f64>) -> DVector<f64>,
    x: &DVector<f64>,
) -> DMatrix<f64> {
    let dim = x.len();
    let mut jac = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        let h = 1e-5 * x[j].abs().max(1.0);
        let mut up = x.clone();
        up[j] += h;
        let mut dn = x.clone();
        dn[j] -= h;
        let col = (g(&up) - g(&dn)) / (2.0 * h);
        jac.set_column(j, &col);
    }
    (&jac + jac.transpose()) * 0.5
}
