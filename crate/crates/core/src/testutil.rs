//! Shared helpers for unit tests.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::Rng;

use crate::density::DensityMatrix;
use crate::linalg::{self, hermitize, CMatrix};

/// Random full-rank state from a Wishart construction G G^H / Tr.
pub(crate) fn random_density(dim: usize, rng: &mut StdRng) -> DensityMatrix {
    random_density_rank(dim, dim, rng)
}

/// Random state of the given rank.
pub(crate) fn random_density_rank(dim: usize, rank: usize, rng: &mut StdRng) -> DensityMatrix {
    let g = CMatrix::from_fn(dim, rank, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let m = &g * g.adjoint();
    let t = linalg::trace_re(&m);
    DensityMatrix::new(m * Complex64::new(1.0 / t, 0.0)).unwrap()
}

/// Haar-ish random unitary via exp of a random skew-Hermitian matrix.
pub(crate) fn random_unitary(dim: usize, rng: &mut StdRng) -> CMatrix {
    let h = hermitize(&CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    }));
    linalg::exp_skew_hermitian(&h.map(|z| z * Complex64::new(0.0, 1.0))).unwrap()
}
