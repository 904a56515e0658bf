//! Density matrices, von Neumann entropy, and quantum relative entropy.
//!
//! Relative entropy follows the support convention: D(ρ‖σ) = +∞ whenever
//! ρ has weight on the kernel of σ beyond tolerance. All entropies are in
//! nats and use the continuous extension 0·ln 0 = 0.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::linalg::{
    self, hermiticity_defect, hermitize, max_abs_diff, spectral_decompose_hermitized, CMatrix,
    CVector, SpectralDecomposition,
};
use crate::tolerances;

/// A valid quantum state: Hermitian, positive semidefinite, unit trace.
///
/// Constructors symmetrize via (A+A^H)/2 before validating, so roundoff
/// from upstream channel application does not trip the checks.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validate and wrap a matrix as a quantum state.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        let defect = hermiticity_defect(&mat);
        if defect > tolerances::VALIDATION {
            return Err(Error::NotHermitian { defect });
        }
        let mat = hermitize(&mat);
        let trace = linalg::trace_re(&mat);
        if (trace - 1.0).abs() > tolerances::VALIDATION {
            return Err(Error::TraceNotOne { trace });
        }
        let dec = spectral_decompose_hermitized(&mat);
        let min_eigenvalue = dec.eigenvalues.last().copied().unwrap_or(0.0);
        if min_eigenvalue < -tolerances::VALIDATION {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        Ok(Self {
            dim: mat.nrows(),
            mat,
        })
    }

    /// |ψ⟩⟨ψ| from a ket, normalizing it first.
    pub fn pure(ket: &CVector) -> Result<Self> {
        let norm = ket.norm();
        if norm <= 0.0 {
            return Err(Error::Domain("zero ket".into()));
        }
        let psi = ket / Complex64::new(norm, 0.0);
        let dim = psi.len();
        let mat = CMatrix::from_fn(dim, dim, |i, j| psi[i] * psi[j].conj());
        Self::new(mat)
    }

    /// |n⟩⟨n| in the standard basis.
    pub fn basis_state(dim: usize, n: usize) -> Self {
        let mut mat = CMatrix::zeros(dim, dim);
        mat[(n, n)] = Complex64::new(1.0, 0.0);
        Self { dim, mat }
    }

    /// I/dim.
    pub fn maximally_mixed(dim: usize) -> Self {
        let mat = CMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
        Self { dim, mat }
    }

    /// Diagonal state from a probability vector (renormalized).
    pub fn from_probabilities(probs: &[f64]) -> Result<Self> {
        if probs.iter().any(|&p| p < -tolerances::VALIDATION) {
            return Err(Error::InvalidProbabilities(
                "negative diagonal entry".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidProbabilities("all-zero diagonal".into()));
        }
        let dim = probs.len();
        let mut mat = CMatrix::zeros(dim, dim);
        for (i, &p) in probs.iter().enumerate() {
            mat[(i, i)] = Complex64::new(p.max(0.0) / total, 0.0);
        }
        Ok(Self { dim, mat })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Spectral decomposition (eigenvalues descending).
    pub fn eigen(&self) -> SpectralDecomposition {
        spectral_decompose_hermitized(&self.mat)
    }

    /// Convex combination Σ w_i ρ_i. Weights are renormalized.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let dim = parts
            .first()
            .ok_or_else(|| Error::Domain("empty mixture".into()))?
            .1
            .dim;
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if total <= 0.0 {
            return Err(Error::InvalidProbabilities("non-positive weights".into()));
        }
        let mut mat = CMatrix::zeros(dim, dim);
        for (w, rho) in parts {
            if rho.dim != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: rho.dim,
                });
            }
            mat += rho.matrix() * Complex64::new(w / total, 0.0);
        }
        Ok(Self { dim, mat })
    }
}

/// S(ρ) = −Σ p_n ln p_n over eigenvalues above the support cut, in nats.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigen())
}

pub(crate) fn entropy_of_spectrum(dec: &SpectralDecomposition) -> f64 {
    let cut = dec.support_cut();
    let s: f64 = dec
        .eigenvalues
        .iter()
        .filter(|&&p| p > cut)
        .map(|&p| -p * p.ln())
        .sum();
    s.max(0.0)
}

/// Kernel weight Tr(P_ker(σ) ρ): the probability mass ρ places on the
/// eigenvectors of σ with eigenvalue below the support cut.
pub fn kernel_weight(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            got: rho.dim(),
        });
    }
    Ok(kernel_weight_dec(rho, &sigma.eigen()))
}

fn kernel_weight_dec(rho: &DensityMatrix, sigma_dec: &SpectralDecomposition) -> f64 {
    let cut = sigma_dec.support_cut();
    let mut w = 0.0;
    for (m, &q) in sigma_dec.eigenvalues.iter().enumerate() {
        if q <= cut {
            let v = sigma_dec.eigenvectors.column(m);
            let mut overlap = Complex64::new(0.0, 0.0);
            for i in 0..rho.dim() {
                for j in 0..rho.dim() {
                    overlap += v[i].conj() * rho.matrix()[(i, j)] * v[j];
                }
            }
            w += overlap.re.max(0.0);
        }
    }
    w
}

/// True iff supp(ρ) ⊆ supp(σ): Tr(P_ker(σ) ρ) ≤ tol.
pub fn support_contained(rho: &DensityMatrix, sigma: &DensityMatrix, tol: f64) -> Result<bool> {
    Ok(kernel_weight(rho, sigma)? <= tol)
}

/// D(ρ‖σ) = Tr(ρ ln ρ − ρ ln σ) in nats, computed in σ's eigenbasis.
///
/// Returns +∞ when supp(ρ) ⊄ supp(σ); exactly 0 when ρ = σ within
/// tolerance.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<ExtendedReal> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            got: rho.dim(),
        });
    }
    if max_abs_diff(rho.matrix(), sigma.matrix()) <= tolerances::STATE_EQ {
        return Ok(ExtendedReal::Finite(0.0));
    }
    let sigma_dec = sigma.eigen();
    if kernel_weight_dec(rho, &sigma_dec) > tolerances::SUPPORT_LEAK {
        return Ok(ExtendedReal::Infinite);
    }
    let cut = sigma_dec.support_cut();
    // -Tr(rho ln sigma) accumulated over sigma's supported eigenvectors
    let mut cross = 0.0;
    for (m, &q) in sigma_dec.eigenvalues.iter().enumerate() {
        if q > cut {
            let v = sigma_dec.eigenvectors.column(m);
            let mut overlap = Complex64::new(0.0, 0.0);
            for i in 0..rho.dim() {
                for j in 0..rho.dim() {
                    overlap += v[i].conj() * rho.matrix()[(i, j)] * v[j];
                }
            }
            cross -= overlap.re.max(0.0) * q.ln();
        }
    }
    let d = cross - von_neumann_entropy(rho);
    // Klein inequality guarantees d >= 0; clamp roundoff.
    Ok(ExtendedReal::Finite(d.max(0.0)))
}
