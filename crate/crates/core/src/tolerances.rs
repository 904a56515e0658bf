//! Numerical tolerances used across the crate.
//!
//! Every threshold is defined here once, with its origin. Validation
//! tolerances are absolute; spectral cuts are relative to the largest
//! eigenvalue, which is the natural scale for double-precision Hermitian
//! eigensolvers.

/// Absolute tolerance for Hermiticity, trace and PSD validation of density
/// matrices and for Kraus completeness. Tolerates roundoff accumulated by
/// upstream channel application.
pub const VALIDATION: f64 = 1e-9;

/// Eigenvalues below `SUPPORT_EIGEN_REL * largest` are treated as zero when
/// a support (kernel/range split) is needed. Double-precision spectral
/// accuracy for well-scaled density matrices.
pub const SUPPORT_EIGEN_REL: f64 = 1e-12;

/// Threshold on the kernel weight Tr(P_ker(σ) ρ) above which the relative
/// entropy D(ρ‖σ) is declared infinite. Genuine support mismatches on
/// optimization grids leak ≥ ~1e-3; full-support Gaussian pairs truncated
/// to a Fock basis can park a few 1e-7 of genuine weight past the spectral
/// cut of their reference. The threshold separates the two regimes.
pub const SUPPORT_LEAK: f64 = 1e-5;

/// Kernel weight below which a truncated Fock-space relative entropy is
/// trusted as a finite-value oracle (see `fock::oracle_resolvable`).
pub const ORACLE_RESOLVABLE_LEAK: f64 = 3e-8;

/// Two states closer than this (max entry difference) are considered equal;
/// D(ρ‖σ) is then exactly 0.
pub const STATE_EQ: f64 = 1e-12;

/// Priors must sum to 1 within this.
pub const PRIOR_SUM: f64 = 1e-12;

/// A one-mode Gaussian state is pure when its symplectic eigenvalue is
/// within this of 1/2.
pub const GAUSSIAN_PURITY: f64 = 1e-12;

/// Step for central finite differences of state families; combined with
/// two-step Richardson extrapolation the truncation error is O(h^4) while
/// roundoff stays near eps/h ~ 1e-11.
pub const FD_STEP: f64 = 1e-5;

/// Radius of the parameter ball around the free symbol excluded from the
/// ratio supremum (the ratio is 0/0 there; its limit is REQFI/2).
pub const FREE_BALL_RADIUS: f64 = 1e-6;

/// Nelder-Mead refinement stops at this simplex diameter.
pub const SIMPLEX_DIAMETER: f64 = 1e-8;

/// Prior ascent stops when the total-variation movement per iteration
/// drops below this.
pub const PRIOR_TV: f64 = 1e-10;

/// Iteration cap for the prior ascent.
pub const PRIOR_MAX_ITERS: usize = 10_000;

/// Relative weight of the family derivative inside the kernel of the state
/// above which REQFI is declared infinite.
pub const KERNEL_LEAK_REL: f64 = 1e-8;

/// Eigenvalue-pair cut for the QFI sum: terms with p_n + p_k at or below
/// this are dropped.
pub const QFI_PAIR_CUT: f64 = 1e-12;

/// Grid points per parameter dimension for the coarse ratio scan.
pub const GRID_POINTS_PER_DIM: usize = 33;

/// Number of best grid points seeding the Nelder-Mead refinement.
pub const MULTISTART_COUNT: usize = 5;
