//! Cross-check suite behind the `validate` CLI subcommand: the Gaussian
//! closed forms against the Fock oracle, the two Holevo forms against each
//! other, and REQFI against its finite-difference definition.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::capacity::{holevo_chi_entropy_form, holevo_chi_relent_form, reqfi, Ensemble};
use crate::channel::{KrausChannel, ParamStateFamily};
use crate::density::{relative_entropy, DensityMatrix};
use crate::fock::TruncationConfig;
use crate::gaussian::{
    apply_fiducial, from_params, output_params, relent_vs_vacuum_output, FiducialChannel,
    GaussianParams, GaussianState,
};
use crate::linalg::CMatrix;

/// One cross-check: pass/fail, the worst deviation seen, and the bound it
/// was held to.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub max_err: f64,
    pub tolerance: f64,
    pub cases: usize,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Run the suite. `quick` trims the case counts to finish within seconds;
/// `perturbation` is added to the Gaussian closed form before comparison
/// (a nonzero value is the negative control and must fail the run).
pub fn run_validation(quick: bool, seed: u64, perturbation: f64) -> ValidationReport {
    let checks = vec![
        check_gaussian_vs_fock(quick, seed, perturbation),
        check_holevo_two_forms(quick, seed),
        check_reqfi_finite_difference(seed),
    ];
    ValidationReport { checks }
}

/// Draw fiducial-channel and input parameters mild enough for the default
/// cutoff, mirroring the published randomization ranges.
pub fn draw_mild_gaussian_case(rng: &mut StdRng) -> (FiducialChannel, GaussianParams) {
    loop {
        let eta = loop {
            let e: f64 = rng.random_range(-2.0..2.0);
            if e.abs() > 1e-3 {
                break e;
            }
        };
        let n_tilde = rng.random_range(0.0..1.5);
        let omega_tilde = rng.random_range(0.5..2.0);
        let n_in = rng.random_range(0.0..1.0);
        let omega_in = rng.random_range(0.6..1.6);
        let amp = rng.random_range(0.0..1.0);
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        let alpha = Complex64::from_polar(amp, phase);
        let ch = FiducialChannel::new(eta, n_tilde, omega_tilde).expect("ranges are valid");
        let p = GaussianParams::new(n_in, omega_in, alpha).expect("ranges are valid");
        // keep the outputs representable at the default cutoff
        let out = apply_fiducial(&ch, &from_params(&p));
        let Ok(op) = output_params(out.sigma()) else {
            continue;
        };
        let alpha_out = eta.abs().sqrt() * amp;
        if op.n_out <= 2.0 && alpha_out <= 1.5 {
            return (ch, p);
        }
    }
}

fn check_gaussian_vs_fock(quick: bool, seed: u64, perturbation: f64) -> CheckOutcome {
    let cases = if quick { 10 } else { 50 };
    let tolerance = 1e-5;
    let mut rng = StdRng::seed_from_u64(seed);
    let cfg = TruncationConfig::default();
    let mut max_err = 0.0_f64;
    let mut compared = 0usize;
    let mut detail = String::new();
    while compared < cases {
        let (ch, p) = draw_mild_gaussian_case(&mut rng);
        let closed = relent_vs_vacuum_output(&ch, &p);

        let out = apply_fiducial(&ch, &from_params(&p));
        let vac_out = apply_fiducial(&ch, &GaussianState::vacuum());
        let (Ok(p_out), Ok(p_vac)) = (
            GaussianParams::from_covariance(out.xbar(), out.sigma()),
            GaussianParams::from_covariance(vac_out.xbar(), vac_out.sigma()),
        ) else {
            continue;
        };
        let (Ok(rho_out), Ok(rho_vac)) = (
            crate::fock::gaussian_state_fock(&p_out, &cfg),
            crate::fock::gaussian_state_fock(&p_vac, &cfg),
        ) else {
            continue; // tail tolerance not met at this cutoff
        };
        if !crate::fock::oracle_resolvable(&rho_out, &rho_vac) {
            continue; // outside the dense oracle's envelope
        }
        let oracle = relative_entropy(&rho_out, &rho_vac).expect("same dim");
        compared += 1;
        match (closed, oracle) {
            (crate::ExtendedReal::Finite(a), crate::ExtendedReal::Finite(b)) => {
                max_err = max_err.max((a + perturbation - b).abs());
            }
            (a, b) => {
                if a.is_infinite() != b.is_infinite() {
                    max_err = f64::INFINITY;
                    detail = "finite/infinite disagreement".to_string();
                }
            }
        }
    }
    CheckOutcome {
        name: "gaussian-vs-fock-oracle",
        passed: max_err <= tolerance,
        max_err,
        tolerance,
        cases: compared,
        detail,
    }
}

fn check_holevo_two_forms(quick: bool, seed: u64) -> CheckOutcome {
    let cases = if quick { 25 } else { 200 };
    let tolerance = 1e-9;
    let mut rng = StdRng::seed_from_u64(seed.wrapping_add(1));
    let mut max_err = 0.0_f64;
    for _ in 0..cases {
        let dim = 2 + (rng.random::<u32>() % 3) as usize; // 2..=4
        let n_sym = 2 + (rng.random::<u32>() % 5) as usize; // 2..=6
        let mut priors: Vec<f64> = (0..n_sym).map(|_| rng.random::<f64>() + 0.02).collect();
        let z: f64 = priors.iter().sum();
        priors.iter_mut().for_each(|p| *p /= z);
        let symbols: Vec<(f64, DensityMatrix, f64)> = priors
            .iter()
            .map(|&p| (p, random_state(dim, &mut rng), 1.0))
            .collect();
        let ensemble = Ensemble::new(symbols).expect("normalized priors");
        let channel = KrausChannel::random(dim, dim, 3, &mut rng);
        let a = holevo_chi_entropy_form(&ensemble, &channel).expect("valid ensemble");
        let b = holevo_chi_relent_form(&ensemble, &channel).expect("valid ensemble");
        max_err = max_err.max((a - b).abs());
    }
    CheckOutcome {
        name: "holevo-two-forms",
        passed: max_err <= tolerance,
        max_err,
        tolerance,
        cases,
        detail: String::new(),
    }
}

fn check_reqfi_finite_difference(seed: u64) -> CheckOutcome {
    // |J - 2 D(rho_{t+d} || rho_t)/d^2| must shrink consistently with O(d)
    let cases = 8;
    let mut rng = StdRng::seed_from_u64(seed.wrapping_add(2));
    let mut worst_ratio = 0.0_f64;
    let mut passed = true;
    for _ in 0..cases {
        let r0 = random_state(2, &mut rng);
        let r1 = random_state(2, &mut rng);
        let family = ParamStateFamily::binary_mixture(&r0, &r1).expect("same dim");
        let t0 = rng.random_range(0.2..0.8);
        let Some(j) = reqfi(&family, t0).ok().and_then(|j| j.finite()) else {
            passed = false;
            continue;
        };
        let err_at = |delta: f64| -> f64 {
            let a = family.state_at(&[t0 + delta]).expect("interior point");
            let b = family.state_at(&[t0]).expect("interior point");
            let d = relative_entropy(&a, &b)
                .expect("same dim")
                .finite()
                .expect("full rank");
            (j - 2.0 * d / (delta * delta)).abs()
        };
        let coarse = err_at(1e-2);
        let fine = err_at(1e-3);
        if fine > 0.25 * coarse + 1e-8 {
            passed = false;
        }
        if coarse > 1e-12 {
            worst_ratio = worst_ratio.max(fine / coarse);
        }
    }
    CheckOutcome {
        name: "reqfi-finite-difference",
        passed,
        max_err: worst_ratio,
        tolerance: 0.25,
        cases,
        detail: "max err(1e-3)/err(1e-2); O(delta) predicts 0.1".to_string(),
    }
}

fn random_state(dim: usize, rng: &mut StdRng) -> DensityMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let m = &g * g.adjoint();
    let t = crate::linalg::trace_re(&m);
    DensityMatrix::new(m * Complex64::new(1.0 / t, 0.0)).expect("Wishart state")
}
