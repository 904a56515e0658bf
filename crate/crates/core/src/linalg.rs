//! Dense complex linear algebra helpers and the Hermitian eigensolver.
//!
//! Hermitian eigendecomposition goes through nalgebra's `SymmetricEigen`
//! (Householder tridiagonalization + symmetric QR), which guarantees a real
//! spectrum. General nonsymmetric solvers are deliberately not used:
//! entropy computations near rank deficiency need the stability of the
//! symmetric path.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances;

/// Dense complex matrix used for states, channels, and Fock operators.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector (kets).
pub type CVector = DVector<Complex64>;

/// n-th standard basis ket of a `dim`-dimensional space.
pub fn basis_ket(dim: usize, n: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[n] = Complex64::new(1.0, 0.0);
    v
}

/// Max entry magnitude of `A - A^H`.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    let mut defect = 0.0_f64;
    for i in 0..a.nrows() {
        for j in i..a.ncols() {
            let d = (a[(i, j)] - a[(j, i)].conj()).norm();
            defect = defect.max(d);
        }
    }
    defect
}

/// (A + A^H)/2.
pub fn hermitize(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Max entry magnitude of `A - B`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Real part of the trace.
pub fn trace_re(a: &CMatrix) -> f64 {
    (0..a.nrows().min(a.ncols())).map(|i| a[(i, i)].re).sum()
}

/// Re Tr(A B), accumulated without forming the product.
pub fn trace_product_re(a: &CMatrix, b: &CMatrix) -> f64 {
    let mut t = 0.0;
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            t += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    t
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Real eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, ordered like `eigenvalues`.
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    /// Σ λ_n |n⟩⟨n|.
    pub fn reconstruct(&self) -> CMatrix {
        let dim = self.eigenvectors.nrows();
        let mut m = CMatrix::zeros(dim, dim);
        for (n, &lam) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvectors.column(n);
            for i in 0..dim {
                for j in 0..dim {
                    m[(i, j)] += v[i] * v[j].conj() * Complex64::new(lam, 0.0);
                }
            }
        }
        m
    }

    /// Index of the first eigenvalue at or below the relative support cut;
    /// eigenvalues `[0, idx)` form the support.
    pub fn support_len(&self) -> usize {
        let cut = self.support_cut();
        self.eigenvalues.iter().take_while(|&&p| p > cut).count()
    }

    /// Absolute eigenvalue threshold below which the spectrum is treated
    /// as zero.
    pub fn support_cut(&self) -> f64 {
        let largest = self.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
        tolerances::SUPPORT_EIGEN_REL * largest
    }
}

/// Eigendecompose a Hermitian matrix. Fails if the input is not Hermitian
/// within the validation tolerance.
pub fn spectral_decompose(h: &CMatrix) -> Result<SpectralDecomposition> {
    if h.nrows() != h.ncols() {
        return Err(Error::NotSquare {
            rows: h.nrows(),
            cols: h.ncols(),
        });
    }
    let defect = hermiticity_defect(h);
    if defect > tolerances::VALIDATION {
        return Err(Error::NotHermitian { defect });
    }
    Ok(spectral_decompose_hermitized(h))
}

/// Eigendecompose, symmetrizing first. For internal callers that already
/// hold matrices Hermitian up to roundoff.
pub(crate) fn spectral_decompose_hermitized(h: &CMatrix) -> SpectralDecomposition {
    let sym = hermitize(h);
    let eig = nalgebra::linalg::SymmetricEigen::new(sym);
    let dim = h.nrows();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("real eigenvalues")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = CMatrix::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// exp(G) for skew-Hermitian G, via the eigendecomposition of the Hermitian
/// matrix iG. Exactly unitary up to spectral accuracy.
pub fn exp_skew_hermitian(g: &CMatrix) -> Result<CMatrix> {
    let i = Complex64::new(0.0, 1.0);
    let h = g.map(|z| z * i);
    let defect = hermiticity_defect(&h);
    if defect > tolerances::VALIDATION {
        return Err(Error::NotHermitian { defect });
    }
    let dec = spectral_decompose_hermitized(&h);
    let dim = g.nrows();
    // exp(G) = V diag(e^{-i theta}) V^H with iG = V diag(theta) V^H
    let mut scaled = dec.eigenvectors.clone();
    for (n, &theta) in dec.eigenvalues.iter().enumerate() {
        let phase = Complex64::new(0.0, -theta).exp();
        for r in 0..dim {
            scaled[(r, n)] *= phase;
        }
    }
    Ok(&scaled * dec.eigenvectors.adjoint())
}
