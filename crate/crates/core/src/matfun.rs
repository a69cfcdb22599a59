//! Dense symmetric matrix functions: spectral decomposition, the φ₁
//! function, and Cholesky factorization.
//!
//! `φ₁(M) = (e^M − I)M⁻¹ = Σ_{a≥0} M^a/(a+1)!` is evaluated through the
//! spectral decomposition of the symmetric argument, which stays defined for
//! singular and indefinite `M` and maps every real eigenvalue to a strictly
//! positive one, so `φ₁` of a symmetric matrix is always positive definite.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

/// Absolute tolerance beyond which an input matrix is considered
/// asymmetric rather than merely rounded.
const SYM_TOL: f64 = 1e-12;

/// Below this magnitude the scalar φ₁ switches from the closed form
/// `(e^x − 1)/x` to a 12-term power series; at the threshold the series
/// truncation error is below 1e-16.
const PHI1_SERIES_THRESHOLD: f64 = 1e-2;

const PHI1_SERIES_TERMS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    /// The iterative eigensolver failed; signals pathological input.
    #[error("symmetric eigensolver did not converge")]
    NonConvergence,
    /// A Cholesky pivot was not strictly positive.
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    /// An entry was NaN or infinite.
    #[error("matrix entries must be finite")]
    NonFinite,
    /// The input was not symmetric within tolerance (or not square).
    #[error("matrix is not symmetric")]
    NotSymmetric,
}

/// A finite symmetric matrix. Construction symmetrizes as `(M + Mᵀ)/2` to
/// absorb floating-point asymmetry in analytic Hessians.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    entries: DMatrix<f64>,
}

impl SymMatrix {
    /// Builds from a square matrix that is symmetric to within `1e-12`.
    pub fn new(m: DMatrix<f64>) -> Result<Self, MatError> {
        if !m.is_square() {
            return Err(MatError::NotSymmetric);
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(MatError::NonFinite);
        }
        let n = m.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                if (m[(i, j)] - m[(j, i)]).abs() > SYM_TOL {
                    return Err(MatError::NotSymmetric);
                }
            }
        }
        Ok(Self::symmetrize(m))
    }

    /// Symmetrizes `(M + Mᵀ)/2` without an asymmetry check. Used internally
    /// where the input is symmetric by construction.
    fn symmetrize(m: DMatrix<f64>) -> Self {
        let sym = (&m + m.transpose()) * 0.5;
        SymMatrix { entries: sym }
    }

    pub fn identity(dim: usize) -> Self {
        SymMatrix {
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            entries: DMatrix::zeros(dim, dim),
        }
    }

    /// `s · I`.
    pub fn scaled_identity(dim: usize, s: f64) -> Self {
        SymMatrix {
            entries: DMatrix::identity(dim, dim) * s,
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.entries
    }

    /// Scales every entry, preserving symmetry.
    pub fn scale(&self, s: f64) -> SymMatrix {
        SymMatrix {
            entries: &self.entries * s,
        }
    }
}

/// Full real spectral decomposition `M = Q·diag(λ)·Qᵀ`.
///
/// Eigenvalues come back in ascending order and each eigenvector's first
/// component of visible magnitude is positive, so repeated runs produce
/// bit-identical output.
#[derive(Debug, Clone)]
pub struct SpectralDecomp {
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SpectralDecomp {
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// Reassembles `Q·diag(f(λ))·Qᵀ` for a scalar function applied to the
    /// spectrum.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> Result<SymMatrix, MatError> {
        let mapped: DVector<f64> = self.eigenvalues.map(&f);
        if mapped.iter().any(|x| !x.is_finite()) {
            return Err(MatError::NonFinite);
        }
        let q = &self.eigenvectors;
        let scaled = q * DMatrix::from_diagonal(&mapped);
        Ok(SymMatrix::symmetrize(scaled * q.transpose()))
    }
}

const EIG_MAX_ITER: usize = 10_000;

/// Spectral decomposition of a symmetric matrix.
pub fn sym_eig(m: &SymMatrix) -> Result<SpectralDecomp, MatError> {
    let eig = nalgebra::SymmetricEigen::try_new(m.entries.clone(), f64::EPSILON, EIG_MAX_ITER)
        .ok_or(MatError::NonConvergence)?;

    let n = m.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut values = DVector::zeros(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = eig.eigenvalues[src];
        let mut col = eig.eigenvectors.column(src).clone_owned();
        let lead = col.iter().find(|x| x.abs() > 1e-9).copied().unwrap_or(0.0);
        if lead < 0.0 {
            col.neg_mut();
        }
        vectors.set_column(dst, &col);
    }

    Ok(SpectralDecomp {
        eigenvalues: values,
        eigenvectors: vectors,
    })
}

/// Scalar φ₁: `(e^x − 1)/x`, with the removable singularity at zero filled
/// by the power series `Σ x^a/(a+1)!`. Strictly positive for every finite
/// argument.
pub fn phi1_scalar(x: f64) -> f64 {
    if x.abs() < PHI1_SERIES_THRESHOLD {
        // Horner evaluation of Σ_{a=0}^{11} x^a/(a+1)!
        let mut acc = 1.0;
        for k in (2..=PHI1_SERIES_TERMS).rev() {
            acc = 1.0 + x * acc / k as f64;
        }
        acc
    } else {
        x.exp_m1() / x
    }
}

/// Matrix φ₁ of a symmetric matrix via its spectral decomposition:
/// `Q·diag(φ₁(λ))·Qᵀ`. The result is symmetric positive definite because
/// `φ₁(λ) > 0` for every real λ.
pub fn phi1_sym(m: &SymMatrix) -> Result<SymMatrix, MatError> {
    sym_eig(m)?.map_eigenvalues(phi1_scalar)
}

/// Lower-triangular Cholesky factor of a symmetric positive definite
/// matrix, with its log-determinant.
#[derive(Debug, Clone)]
pub struct CholFactor {
    lower: DMatrix<f64>,
    log_det: f64,
}

impl CholFactor {
    pub fn lower(&self) -> &DMatrix<f64> {
        &self.lower
    }

    /// `ln det S = 2 Σ ln Lᵢᵢ`.
    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    /// `L·x`, used to color standard normal draws.
    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.lower * x
    }

    /// Solves `L·w = r` by forward substitution, so `‖w‖² = rᵀS⁻¹r`.
    pub fn forward_solve(&self, r: &DVector<f64>) -> Option<DVector<f64>> {
        self.lower.solve_lower_triangular(r)
    }
}

/// Cholesky factorization `S = L·Lᵀ` of a symmetric positive definite
/// matrix. Fails with `NotPositiveDefinite` when a pivot is not strictly
/// positive, which callers treat as an invalid proposal.
pub fn spd_factor(s: &SymMatrix) -> Result<CholFactor, MatError> {
    let chol =
        nalgebra::Cholesky::new(s.entries.clone()).ok_or(MatError::NotPositiveDefinite)?;
    let lower = chol.unpack();
    let log_det = 2.0 * lower.diagonal().iter().map(|d| d.ln()).sum::<f64>();
    if !log_det.is_finite() {
        return Err(MatError::NotPositiveDefinite);
    }
    Ok(CholFactor { lower, log_det })
}
