//! One-mode Gaussian phase-space calculus: states, fiducial channels,
//! entropies, closed-form relative entropies against the vacuum output,
//! capacities per unit cost, and photon-information-efficiency curves.
//!
//! Conventions: vacuum quadrature variances are 1/2 (σ_vac = I/2) and the
//! displacement vector is x̄ = (√2 Re α, √2 Im α). Input states are
//! parametrized by σ_in = (N̄_in + 1/2) diag(1/ω_in, ω_in). Output "squeezing"
//! parameters follow the quotient form ω_out = √(σ₁₁/σ₂₂), so an output
//! covariance reconstructs as σ_out = (N̄_out + 1/2) diag(ω_out, 1/ω_out);
//! the two conventions coincide at ω = 1 and are reciprocal otherwise.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::optimize::nelder_mead;
use crate::tolerances;

/// One-mode Gaussian state as first and second moments.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    xbar: Vector2<f64>,
    sigma: Matrix2<f64>,
}

impl GaussianState {
    /// Validate symmetry, positivity, and the uncertainty relation
    /// det σ ≥ 1/4.
    pub fn new(xbar: Vector2<f64>, sigma: Matrix2<f64>) -> Result<Self> {
        if (sigma[(0, 1)] - sigma[(1, 0)]).abs() > 1e-12 {
            return Err(Error::Domain("covariance must be symmetric".into()));
        }
        let det = sigma.determinant();
        if sigma[(0, 0)] <= 0.0 || det <= 0.0 {
            return Err(Error::Domain("covariance must be positive definite".into()));
        }
        if det < 0.25 - 1e-12 {
            return Err(Error::Domain(format!(
                "uncertainty relation violated: det sigma = {det} < 1/4"
            )));
        }
        Ok(Self { xbar, sigma })
    }

    pub fn vacuum() -> Self {
        Self {
            xbar: Vector2::zeros(),
            sigma: Matrix2::identity() * 0.5,
        }
    }

    pub fn xbar(&self) -> &Vector2<f64> {
        &self.xbar
    }

    pub fn sigma(&self) -> &Matrix2<f64> {
        &self.sigma
    }

    fn approx_eq(&self, other: &GaussianState, tol: f64) -> bool {
        (self.xbar - other.xbar).amax() <= tol && (self.sigma - other.sigma).amax() <= tol
    }
}

/// Thermal-photon / squeezing / displacement parametrization of a one-mode
/// Gaussian state (ω_in = e^{−2r}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    pub n_in: f64,
    pub omega_in: f64,
    pub alpha: Complex64,
}

impl GaussianParams {
    pub fn new(n_in: f64, omega_in: f64, alpha: Complex64) -> Result<Self> {
        if n_in < 0.0 {
            return Err(Error::Domain(format!("thermal photons {n_in} < 0")));
        }
        if omega_in <= 0.0 {
            return Err(Error::Domain(format!("squeezing parameter {omega_in} <= 0")));
        }
        Ok(Self {
            n_in,
            omega_in,
            alpha,
        })
    }

    pub fn vacuum() -> Self {
        Self {
            n_in: 0.0,
            omega_in: 1.0,
            alpha: Complex64::new(0.0, 0.0),
        }
    }

    pub fn coherent(alpha: Complex64) -> Self {
        Self {
            n_in: 0.0,
            omega_in: 1.0,
            alpha,
        }
    }

    /// Recover parameters from moments with a diagonal covariance
    /// (input-convention ω = √(σ₂₂/σ₁₁)).
    pub fn from_covariance(xbar: &Vector2<f64>, sigma: &Matrix2<f64>) -> Result<Self> {
        if sigma[(0, 1)].abs() > 1e-10 || sigma[(1, 0)].abs() > 1e-10 {
            return Err(Error::Precondition(
                "covariance must be diagonal in the fiducial basis".into(),
            ));
        }
        let gamma = symplectic_eigenvalue(sigma)?;
        let omega = (sigma[(1, 1)] / sigma[(0, 0)]).sqrt();
        let alpha = Complex64::new(
            xbar[0] / std::f64::consts::SQRT_2,
            xbar[1] / std::f64::consts::SQRT_2,
        );
        GaussianParams::new((gamma - 0.5).max(0.0), omega, alpha)
    }
}

/// Moments of the parametrized state: x̄ = (√2 Re α, √2 Im α),
/// σ = (N̄_in + 1/2) diag(1/ω_in, ω_in).
pub fn from_params(p: &GaussianParams) -> GaussianState {
    let half = p.n_in + 0.5;
    GaussianState {
        xbar: Vector2::new(
            std::f64::consts::SQRT_2 * p.alpha.re,
            std::f64::consts::SQRT_2 * p.alpha.im,
        ),
        sigma: Matrix2::new(half / p.omega_in, 0.0, 0.0, half * p.omega_in),
    }
}

/// n̄ = |α|² + (N̄_in + 1/2)(ω_in + 1/ω_in)/2 − 1/2.
pub fn mean_photon_number(p: &GaussianParams) -> f64 {
    let spread = (p.n_in + 0.5) * (p.omega_in + 1.0 / p.omega_in) / 2.0 - 0.5;
    (p.alpha.norm_sqr() + spread).max(0.0)
}

/// γ = √det σ, the symplectic eigenvalue of a one-mode covariance.
pub fn symplectic_eigenvalue(sigma: &Matrix2<f64>) -> Result<f64> {
    let det = sigma.determinant();
    if det < 0.25 - 1e-12 {
        return Err(Error::Domain(format!(
            "det sigma = {det} below the uncertainty bound 1/4"
        )));
    }
    Ok(det.max(0.25).sqrt())
}

/// g(x) = (x + 1/2) ln(x + 1/2) − (x − 1/2) ln(x − 1/2), the entropy of a
/// mode with symplectic eigenvalue x; g(1/2) = 0 by continuous extension.
pub fn g_function(x: f64) -> Result<f64> {
    if x < 0.5 - 1e-12 {
        return Err(Error::Domain(format!("g(x) needs x >= 1/2, got {x}")));
    }
    let plus = x + 0.5;
    let minus = (x - 0.5).max(0.0);
    let tail = if minus > 0.0 { minus * minus.ln() } else { 0.0 };
    Ok((plus * plus.ln() - tail).max(0.0))
}

/// g in photon-number form: g(n + 1/2) = (n+1) ln(n+1) − n ln n.
fn g_photon(n: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    (n + 1.0) * (n + 1.0).ln() - n * n.ln()
}

/// Fiducial one-mode Gaussian channel: transmission/gain η, environment
/// thermal photons Ñ, environment squeezing ω̃. Environment displacement is
/// fixed to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiducialChannel {
    pub eta: f64,
    pub n_tilde: f64,
    pub omega_tilde: f64,
}

impl FiducialChannel {
    pub fn new(eta: f64, n_tilde: f64, omega_tilde: f64) -> Result<Self> {
        if n_tilde < 0.0 {
            return Err(Error::Domain(format!("environment photons {n_tilde} < 0")));
        }
        if omega_tilde <= 0.0 {
            return Err(Error::Domain(format!(
                "environment squeezing {omega_tilde} <= 0"
            )));
        }
        let ch = Self {
            eta,
            n_tilde,
            omega_tilde,
        };
        // channel validity via the vacuum input
        let out = apply_fiducial(&ch, &GaussianState::vacuum());
        symplectic_eigenvalue(out.sigma())?;
        Ok(ch)
    }
}

/// Channel action on moments: x̄ → √|η| (x̄₁, sgn(η) x̄₂),
/// σ → X σ Xᵀ + |1−η| (Ñ + 1/2) diag(1/ω̃, ω̃) with X = √|η| diag(1, sgn η).
pub fn apply_fiducial(ch: &FiducialChannel, s: &GaussianState) -> GaussianState {
    let root = ch.eta.abs().sqrt();
    let sign = if ch.eta < 0.0 { -1.0 } else { 1.0 };
    let xbar = Vector2::new(root * s.xbar[0], root * sign * s.xbar[1]);
    let noise = (ch.n_tilde + 0.5) * (1.0 - ch.eta).abs();
    let e = ch.eta.abs();
    let sigma = Matrix2::new(
        e * s.sigma[(0, 0)] + noise / ch.omega_tilde,
        e * sign * s.sigma[(0, 1)],
        e * sign * s.sigma[(1, 0)],
        e * s.sigma[(1, 1)] + noise * ch.omega_tilde,
    );
    GaussianState { xbar, sigma }
}

/// Thermal photons and quotient-form squeezing of a diagonal output
/// covariance: ω_out = √(σ₁₁/σ₂₂), N̄_out + 1/2 = √(σ₁₁ σ₂₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputParams {
    pub n_out: f64,
    pub omega_out: f64,
}

pub fn output_params(sigma: &Matrix2<f64>) -> Result<OutputParams> {
    if sigma[(0, 1)].abs() > 1e-10 || sigma[(1, 0)].abs() > 1e-10 {
        return Err(Error::Precondition(
            "output covariance must be diagonal in the fiducial basis".into(),
        ));
    }
    let gamma = symplectic_eigenvalue(sigma)?;
    Ok(OutputParams {
        n_out: (gamma - 0.5).max(0.0),
        omega_out: (sigma[(0, 0)] / sigma[(1, 1)]).sqrt(),
    })
}

/// Closed-form output parameters for the vacuum input:
/// ω⁰ = √[(|η|/2 + |1−η|(Ñ+1/2)/ω̃) / (|η|/2 + |1−η|(Ñ+1/2) ω̃)] and
/// N̄⁰ + 1/2 the geometric mean of the two brackets.
pub fn vacuum_output_params(ch: &FiducialChannel) -> OutputParams {
    let e = ch.eta.abs() / 2.0;
    let noise = (1.0 - ch.eta).abs() * (ch.n_tilde + 0.5);
    let a = e + noise / ch.omega_tilde; // sigma_11
    let b = e + noise * ch.omega_tilde; // sigma_22
    OutputParams {
        n_out: ((a * b).sqrt() - 0.5).max(0.0),
        omega_out: (a / b).sqrt(),
    }
}

/// D(s₁‖s₂) for one-mode Gaussian states:
/// D = −g(γ₁) + ln Z + Tr(σ₁ M)/2 + x̃ᵀ M x̃/2 with M = ln((2γ₂+1)/(2γ₂−1)) γ₂ σ₂⁻¹
/// and Z = √(γ₂² − 1/4). Infinite for a pure second argument unless the
/// states coincide.
pub fn gaussian_relative_entropy(s1: &GaussianState, s2: &GaussianState) -> ExtendedReal {
    if s1.approx_eq(s2, tolerances::STATE_EQ) {
        return ExtendedReal::Finite(0.0);
    }
    let gamma2 = match symplectic_eigenvalue(s2.sigma()) {
        Ok(g) => g,
        Err(_) => return ExtendedReal::Infinite,
    };
    if gamma2 <= 0.5 + tolerances::GAUSSIAN_PURITY {
        return ExtendedReal::Infinite;
    }
    let gamma1 = match symplectic_eigenvalue(s1.sigma()) {
        Ok(g) => g,
        Err(_) => return ExtendedReal::Infinite,
    };
    let coeff = ((2.0 * gamma2 + 1.0) / (2.0 * gamma2 - 1.0)).ln();
    let m = s2
        .sigma()
        .try_inverse()
        .expect("validated covariance is invertible")
        * (coeff * gamma2);
    let ln_z = 0.5 * (gamma2 * gamma2 - 0.25).ln();
    let xdiff = s1.xbar() - s2.xbar();
    let d = -g_function(gamma1).unwrap_or(0.0)
        + ln_z
        + 0.5 * (s1.sigma() * m).trace()
        + 0.5 * (xdiff.transpose() * m * xdiff)[(0, 0)];
    ExtendedReal::Finite(d.max(0.0))
}

/// Closed-form D(Λ[ρ_p] ‖ Λ[vacuum]) for the fiducial channel:
///
///   N̄ ln N̄ − (N̄+1) ln(N̄+1) + ln(N̄⁰(N̄⁰+1))/2
///   + (N̄ + 1/2) (ω⁰² + ω²)/(2 ω⁰ ω) L
///   + |η| ((Re α)²/ω⁰ + (Im α)² ω⁰) L,       L = ln((N̄⁰+1)/N̄⁰),
///
/// with (N̄, ω) and (N̄⁰, ω⁰) the quotient-form output parameters of the
/// signal and vacuum inputs. Infinite whenever the vacuum output is pure
/// and the input is not the vacuum.
pub fn relent_vs_vacuum_output(ch: &FiducialChannel, p: &GaussianParams) -> ExtendedReal {
    let vac = vacuum_output_params(ch);
    let out = apply_fiducial(ch, &from_params(p));
    if vac.n_out <= tolerances::GAUSSIAN_PURITY {
        let vac_state = apply_fiducial(ch, &GaussianState::vacuum());
        return if out.approx_eq(&vac_state, tolerances::STATE_EQ) {
            ExtendedReal::Finite(0.0)
        } else {
            ExtendedReal::Infinite
        };
    }
    let op = match output_params(out.sigma()) {
        Ok(op) => op,
        Err(_) => return ExtendedReal::Infinite,
    };
    let n = op.n_out;
    let (w, w0) = (op.omega_out, vac.omega_out);
    let l = ((vac.n_out + 1.0) / vac.n_out).ln();
    let entropy_term = -g_photon(n); // N ln N − (N+1) ln(N+1)
    let d = entropy_term
        + 0.5 * (vac.n_out * (vac.n_out + 1.0)).ln()
        + (n + 0.5) * (w0 * w0 + w * w) / (2.0 * w0 * w) * l
        + ch.eta.abs() * (p.alpha.re * p.alpha.re / w0 + p.alpha.im * p.alpha.im * w0) * l;
    ExtendedReal::Finite(d.max(0.0))
}

/// Channel classification used for reporting and for the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelClass {
    /// Vacuum output is pure (pure loss, or the identity).
    Lossy,
    /// ω⁰ = 1: thermal-type noise only.
    PhaseInsensitive,
    /// ω⁰ ≠ 1: squeezed environment.
    Squeezing,
}

impl std::fmt::Display for ChannelClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChannelClass::Lossy => write!(f, "lossy"),
            ChannelClass::PhaseInsensitive => write!(f, "phase-insensitive"),
            ChannelClass::Squeezing => write!(f, "squeezing"),
        }
    }
}

/// Classify by the vacuum output: pure → lossy; ω⁰ = 1 → phase-insensitive;
/// otherwise squeezing. The decision is numerical, not symbolic.
pub fn classify(ch: &FiducialChannel) -> ChannelClass {
    let vac = vacuum_output_params(ch);
    if vac.n_out <= tolerances::GAUSSIAN_PURITY {
        ChannelClass::Lossy
    } else if (vac.omega_out - 1.0).abs() <= 1e-9 {
        ChannelClass::PhaseInsensitive
    } else {
        ChannelClass::Squeezing
    }
}

/// Capacity per unit cost (nats per photon) with the mean photon number as
/// the cost:
///
/// - vacuum output pure and channel nontrivial → +∞,
/// - otherwise 𝐂 = |η| ω_max ln((N̄⁰+1)/N̄⁰), ω_max = max(ω⁰, 1/ω⁰),
///   which reduces to |η| ln((N̄⁰+1)/N̄⁰) for phase-insensitive channels.
pub fn cpuc_gaussian(ch: &FiducialChannel) -> ExtendedReal {
    let vac = vacuum_output_params(ch);
    if vac.n_out <= tolerances::GAUSSIAN_PURITY {
        // eta = 0 with a pure environment maps everything to the same
        // state: the channel is trivial and carries nothing
        return if ch.eta.abs() <= 1e-12 {
            ExtendedReal::Finite(0.0)
        } else {
            ExtendedReal::Infinite
        };
    }
    let omega_max = vac.omega_out.max(1.0 / vac.omega_out);
    let l = ((vac.n_out + 1.0) / vac.n_out).ln();
    ExtendedReal::Finite(ch.eta.abs() * omega_max * l)
}

/// One row of a photon-information-efficiency sweep.
#[derive(Debug, Clone, Copy)]
pub struct PiePoint {
    pub nbar: f64,
    /// Π(n̄) = C(n̄)/n̄, nats per photon.
    pub pie: f64,
    /// C(n̄), nats per channel use.
    pub capacity: f64,
}

/// PIE of a phase-insensitive channel under coherent encoding:
/// C(n̄) = g(|η| n̄ + N̄⁰ + 1/2) − g(N̄⁰ + 1/2), Π = C/n̄. The n̄ → 0 slope is
/// the closed-form capacity per unit cost.
pub fn pie_curve(ch: &FiducialChannel, nbar_grid: &[f64]) -> Result<Vec<PiePoint>> {
    if (ch.omega_tilde - 1.0).abs() > 1e-12 {
        return Err(Error::Precondition(
            "PIE curve requires a phase-insensitive channel (omega_tilde = 1)".into(),
        ));
    }
    if nbar_grid.is_empty() || nbar_grid.iter().any(|&n| n <= 0.0) {
        return Err(Error::Domain("photon-number grid must be positive".into()));
    }
    let vac = vacuum_output_params(ch);
    let base = g_photon(vac.n_out);
    Ok(nbar_grid
        .iter()
        .map(|&nbar| {
            let capacity = (g_photon(ch.eta.abs() * nbar + vac.n_out) - base).max(0.0);
            PiePoint {
                nbar,
                pie: capacity / nbar,
                capacity,
            }
        })
        .collect())
}

/// Brute-force cross-check of [`cpuc_gaussian`]: grid over
/// (N̄_in, ω_in, n̄, phase) with Nelder-Mead refinement of the ratio
/// D(Λ[ρ]‖Λ[vac])/n̄. The scan confirms the supremum sits at the coherent
/// n̄ → 0 corner.
pub fn cpuc_gaussian_numeric(ch: &FiducialChannel) -> ExtendedReal {
    let ratio_of = |n_in: f64, omega_in: f64, amp: f64, imag: bool| -> Option<f64> {
        let alpha = if imag {
            Complex64::new(0.0, amp)
        } else {
            Complex64::new(amp, 0.0)
        };
        let p = GaussianParams::new(n_in.max(0.0), omega_in, alpha).ok()?;
        let nbar = mean_photon_number(&p);
        if nbar < 1e-9 {
            return None;
        }
        match relent_vs_vacuum_output(ch, &p) {
            ExtendedReal::Finite(d) => Some(d / nbar),
            ExtendedReal::Infinite => Some(f64::INFINITY),
        }
    };

    let n_grid: Vec<f64> = (0..9).map(|i| 0.25 * i as f64).collect();
    let w_grid: Vec<f64> = (0..9).map(|i| 0.5 * 4.0_f64.powf(i as f64 / 8.0)).collect();
    let nbar_grid: Vec<f64> = (0..7).map(|i| 1e-6 * 1e6_f64.powf(i as f64 / 6.0)).collect();

    let mut best: Vec<(f64, [f64; 3], bool)> = Vec::new();
    for &n_in in &n_grid {
        for &omega_in in &w_grid {
            let base = (n_in + 0.5) * (omega_in + 1.0 / omega_in) / 2.0 - 0.5;
            for &nbar in &nbar_grid {
                let amp_sq = nbar - base;
                if amp_sq < 0.0 {
                    continue;
                }
                let amp = amp_sq.sqrt();
                for imag in [false, true] {
                    if let Some(r) = ratio_of(n_in, omega_in, amp, imag) {
                        if r.is_infinite() {
                            return ExtendedReal::Infinite;
                        }
                        best.push((r, [n_in, omega_in, amp], imag));
                    }
                }
            }
        }
    }
    if best.is_empty() {
        return ExtendedReal::Finite(0.0);
    }
    best.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut sup = best[0].0;
    let lower = [0.0, 0.5, 0.0];
    let upper = [2.0, 2.0, 1.0];
    for (_, start, imag) in best.iter().take(tolerances::MULTISTART_COUNT) {
        let imag = *imag;
        let (_, neg) = nelder_mead(
            |x| -ratio_of(x[0], x[1], x[2], imag).unwrap_or(f64::NEG_INFINITY),
            start,
            0.02,
            &lower,
            &upper,
            tolerances::SIMPLEX_DIAMETER,
            400,
        );
        sup = sup.max(-neg);
    }
    ExtendedReal::Finite(sup)
}
