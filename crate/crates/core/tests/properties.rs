//! Property tests over randomized states, channels, and Gaussian
//! parameters.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use cpuc_core::capacity::{holevo_chi_entropy_form, holevo_chi_relent_form, Ensemble};
use cpuc_core::channel::KrausChannel;
use cpuc_core::density::{relative_entropy, support_contained, DensityMatrix};
use cpuc_core::gaussian::{
    apply_fiducial, from_params, gaussian_relative_entropy, pie_curve, relent_vs_vacuum_output,
    FiducialChannel, GaussianParams, GaussianState,
};
use cpuc_core::linalg::{trace_re, CMatrix};
use cpuc_core::{tolerances, ExtendedReal};

fn density_from_seed(dim: usize, rank: usize, seed: u64) -> DensityMatrix {
    use rand::Rng;
    let mut rng = StdRng::seed_from_u64(seed);
    let g = CMatrix::from_fn(dim, rank, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let m = &g * g.adjoint();
    let t = trace_re(&m);
    DensityMatrix::new(m * Complex64::new(1.0 / t, 0.0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn channel_application_preserves_validity(
        seed in any::<u64>(),
        dim in 2usize..=4,
        n_kraus in 1usize..=6,
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let ch = KrausChannel::random(dim, dim, n_kraus, &mut rng);
        let rho = density_from_seed(dim, dim, seed.wrapping_add(1));
        let out = ch.apply(&rho).unwrap();
        prop_assert!((trace_re(out.matrix()) - 1.0).abs() <= 1e-9);
        let min_eig = out.eigen().eigenvalues.last().copied().unwrap();
        prop_assert!(min_eig >= -1e-9);
    }

    #[test]
    fn relative_entropy_nonnegative_and_support_consistent(
        seed in any::<u64>(),
        dim in 2usize..=4,
        rank_r in 1usize..=4,
        rank_s in 1usize..=4,
    ) {
        let rank_r = rank_r.min(dim);
        let rank_s = rank_s.min(dim);
        let rho = density_from_seed(dim, rank_r, seed);
        let sigma = density_from_seed(dim, rank_s, seed.wrapping_add(7));
        let d = relative_entropy(&rho, &sigma).unwrap();
        let contained = support_contained(&rho, &sigma, tolerances::SUPPORT_LEAK).unwrap();
        prop_assert_eq!(d.is_finite(), contained);
        if let ExtendedReal::Finite(v) = d {
            prop_assert!(v >= 0.0);
        }
    }

    #[test]
    fn holevo_forms_agree(
        seed in any::<u64>(),
        dim in 2usize..=4,
        n_sym in 2usize..=6,
    ) {
        use rand::Rng;
        let mut rng = StdRng::seed_from_u64(seed);
        let mut priors: Vec<f64> = (0..n_sym).map(|_| rng.random::<f64>() + 0.05).collect();
        let z: f64 = priors.iter().sum();
        priors.iter_mut().for_each(|p| *p /= z);
        let symbols: Vec<(f64, DensityMatrix, f64)> = priors
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, density_from_seed(dim, dim, seed.wrapping_add(i as u64)), 1.0))
            .collect();
        let ens = Ensemble::new(symbols).unwrap();
        let ch = KrausChannel::random(dim, dim, 3, &mut rng);
        let a = holevo_chi_entropy_form(&ens, &ch).unwrap();
        let b = holevo_chi_relent_form(&ens, &ch).unwrap();
        prop_assert!((a - b).abs() <= 1e-9, "chi forms {} vs {}", a, b);
        prop_assert!(a >= 0.0);
    }

    #[test]
    fn gaussian_closed_form_equals_moment_route(
        eta in prop_oneof![(-2.0..-0.05f64), (0.05..2.0f64)],
        n_tilde in 0.0..2.0f64,
        omega_tilde in 0.4..2.5f64,
        n_in in 0.0..2.0f64,
        omega_in in 0.5..2.0f64,
        re in -1.2..1.2f64,
        im in -1.2..1.2f64,
    ) {
        let ch = FiducialChannel::new(eta, n_tilde, omega_tilde).unwrap();
        let p = GaussianParams::new(n_in, omega_in, Complex64::new(re, im)).unwrap();
        let closed = relent_vs_vacuum_output(&ch, &p);
        let out = apply_fiducial(&ch, &from_params(&p));
        let vac_out = apply_fiducial(&ch, &GaussianState::vacuum());
        let general = gaussian_relative_entropy(&out, &vac_out);
        match (closed, general) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => {
                prop_assert!((a - b).abs() <= 1e-10, "closed {} vs general {}", a, b);
            }
            (a, b) => prop_assert_eq!(a.is_infinite(), b.is_infinite()),
        }
    }

    #[test]
    fn pie_monotone_and_capacity_nondecreasing(
        eta in prop_oneof![(-1.8..-0.05f64), (0.05..1.8f64)],
        n_tilde in 0.0..2.0f64,
        log_lo in -6.0..-1.0f64,
        span in 1.0..5.0f64,
    ) {
        let ch = FiducialChannel::new(eta, n_tilde, 1.0).unwrap();
        let grid: Vec<f64> = (0..12)
            .map(|i| 10f64.powf(log_lo + span * i as f64 / 11.0))
            .collect();
        let pts = pie_curve(&ch, &grid).unwrap();
        for w in pts.windows(2) {
            prop_assert!(w[1].pie <= w[0].pie + 1e-12);
            prop_assert!(w[1].capacity >= w[0].capacity - 1e-12);
            // nbar * PIE reproduces the capacity column
            prop_assert!((w[0].nbar * w[0].pie - w[0].capacity).abs() <= 1e-12 * (1.0 + w[0].capacity));
        }
    }
}
