//! Finite-dimensional quantum channels as Kraus-operator lists, cost
//! functions, and parametrized state families used as optimization domains.
//!
//! Channels are memoryless and single-use throughout; regularized
//! (entangled-input) quantities are out of scope.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tolerances;

/// Completeness defect max |Σ K^H K − I| for a Kraus list on `dim_in`.
pub fn kraus_completeness_defect(dim_in: usize, ops: &[CMatrix]) -> f64 {
    let mut sum = CMatrix::zeros(dim_in, dim_in);
    for k in ops {
        sum += k.adjoint() * k;
    }
    linalg::max_abs_diff(&sum, &CMatrix::identity(dim_in, dim_in))
}

/// True iff the Kraus list is trace preserving within the validation
/// tolerance.
pub fn validate_kraus(dim_in: usize, ops: &[CMatrix]) -> bool {
    kraus_completeness_defect(dim_in, ops) <= tolerances::VALIDATION
}

/// A completely positive trace-preserving map Λ[ρ] = Σ K ρ K^H.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    ops: Vec<CMatrix>,
}

impl KrausChannel {
    /// Build from Kraus operators, enforcing shape consistency and
    /// completeness Σ K^H K = I within tolerance.
    pub fn new(ops: Vec<CMatrix>) -> Result<Self> {
        let first = ops
            .first()
            .ok_or_else(|| Error::Domain("empty Kraus list".into()))?;
        let (dim_out, dim_in) = (first.nrows(), first.ncols());
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::Domain("zero-dimensional Kraus operator".into()));
        }
        for k in &ops {
            if k.nrows() != dim_out || k.ncols() != dim_in {
                return Err(Error::DimensionMismatch {
                    expected: dim_out * dim_in,
                    got: k.nrows() * k.ncols(),
                });
            }
        }
        let defect = kraus_completeness_defect(dim_in, &ops);
        if defect > tolerances::VALIDATION {
            return Err(Error::KrausIncomplete { defect });
        }
        Ok(Self {
            dim_in,
            dim_out,
            ops,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus_ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn completeness_defect(&self) -> f64 {
        kraus_completeness_defect(self.dim_in, &self.ops)
    }

    /// Λ on a raw matrix; linear, no validation of the result.
    pub fn apply_matrix(&self, m: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.ops {
            out += k * m * k.adjoint();
        }
        out
    }

    /// Λ[ρ] as a validated state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim_in {
            return Err(Error::DimensionMismatch {
                expected: self.dim_in,
                got: rho.dim(),
            });
        }
        DensityMatrix::new(self.apply_matrix(rho.matrix()))
    }

    /// Identity channel on `dim`.
    pub fn identity(dim: usize) -> Self {
        Self {
            dim_in: dim,
            dim_out: dim,
            ops: vec![CMatrix::identity(dim, dim)],
        }
    }

    /// Channel mapping every input to I/dim (Kraus |i⟩⟨j|/√dim).
    pub fn completely_depolarizing(dim: usize) -> Self {
        let scale = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        let mut ops = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut k = CMatrix::zeros(dim, dim);
                k[(i, j)] = scale;
                ops.push(k);
            }
        }
        Self {
            dim_in: dim,
            dim_out: dim,
            ops,
        }
    }

    /// Qubit amplitude damping with decay probability `gamma`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::Domain(format!("decay {gamma} outside [0,1]")));
        }
        let mut k0 = CMatrix::identity(2, 2);
        k0[(1, 1)] = Complex64::new((1.0 - gamma).sqrt(), 0.0);
        let mut k1 = CMatrix::zeros(2, 2);
        k1[(0, 1)] = Complex64::new(gamma.sqrt(), 0.0);
        Self::new(vec![k0, k1])
    }

    /// Generalized amplitude damping: relaxation toward the thermal-like
    /// fixed point diag(p, 1−p) at rate `gamma`. Outputs are full rank for
    /// 0 < p < 1, 0 < gamma < 1.
    pub fn generalized_amplitude_damping(gamma: f64, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) || !(0.0..=1.0).contains(&p) {
            return Err(Error::Domain(
                "generalized amplitude damping needs gamma, p in [0,1]".into(),
            ));
        }
        let (sp, sq) = (p.sqrt(), (1.0 - p).sqrt());
        let sg = gamma.sqrt();
        let s1g = (1.0 - gamma).sqrt();
        let mut k0 = CMatrix::identity(2, 2);
        k0[(1, 1)] = Complex64::new(s1g, 0.0);
        let mut k1 = CMatrix::zeros(2, 2);
        k1[(0, 1)] = Complex64::new(sg, 0.0);
        let mut k2 = CMatrix::identity(2, 2);
        k2[(0, 0)] = Complex64::new(s1g, 0.0);
        let mut k3 = CMatrix::zeros(2, 2);
        k3[(1, 0)] = Complex64::new(sg, 0.0);
        Self::new(vec![
            k0 * Complex64::new(sp, 0.0),
            k1 * Complex64::new(sp, 0.0),
            k2 * Complex64::new(sq, 0.0),
            k3 * Complex64::new(sq, 0.0),
        ])
    }

    /// Random CPTP map from a Haar-ish random isometry (QR of a complex
    /// Gaussian matrix), split into `n_kraus` blocks.
    pub fn random<R: Rng>(dim_in: usize, dim_out: usize, n_kraus: usize, rng: &mut R) -> Self {
        let rows = dim_out * n_kraus;
        assert!(rows >= dim_in, "need dim_out * n_kraus >= dim_in");
        let g = CMatrix::from_fn(rows, dim_in, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let qr = g.qr();
        let q = qr.q();
        let ops: Vec<CMatrix> = (0..n_kraus)
            .map(|b| q.rows(b * dim_out, dim_out).into_owned())
            .collect();
        Self {
            dim_in,
            dim_out,
            ops,
        }
    }
}

/// Cost assigned to input symbols.
#[derive(Debug, Clone)]
pub enum CostFunction {
    /// Tr(B ρ) for a Hermitian observable B (e.g. photon number).
    Observable(CMatrix),
    /// ‖x‖² for the family parameter x.
    QuadraticParam,
    /// Explicit per-symbol costs.
    Lookup(Vec<f64>),
}

impl CostFunction {
    /// Observable-expectation cost constructor, validating Hermiticity.
    pub fn observable(b: CMatrix) -> Result<Self> {
        let defect = linalg::hermiticity_defect(&b);
        if defect > tolerances::VALIDATION {
            return Err(Error::NotHermitian { defect });
        }
        Ok(CostFunction::Observable(b))
    }

    /// Cost of a state (observable-expectation kind only).
    pub fn of_state(&self, rho: &DensityMatrix) -> Result<f64> {
        match self {
            CostFunction::Observable(b) => {
                if b.nrows() != rho.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: b.nrows(),
                        got: rho.dim(),
                    });
                }
                let c = linalg::trace_product_re(b, rho.matrix());
                if c < -tolerances::VALIDATION {
                    return Err(Error::Domain(format!("negative cost {c}")));
                }
                Ok(c.max(0.0))
            }
            _ => Err(Error::Precondition(
                "state cost requires an observable cost function".into(),
            )),
        }
    }

    /// Cost of a parameter value (quadratic kind only).
    pub fn of_param(&self, x: &[f64]) -> Result<f64> {
        match self {
            CostFunction::QuadraticParam => Ok(x.iter().map(|v| v * v).sum()),
            _ => Err(Error::Precondition(
                "parameter cost requires the quadratic cost function".into(),
            )),
        }
    }

    /// Cost of symbol `idx` (lookup kind only).
    pub fn of_symbol(&self, idx: usize) -> Result<f64> {
        match self {
            CostFunction::Lookup(costs) => {
                let c = *costs
                    .get(idx)
                    .ok_or_else(|| Error::Domain(format!("symbol {idx} outside lookup table")))?;
                if c < 0.0 {
                    return Err(Error::Domain(format!("negative cost {c}")));
                }
                Ok(c)
            }
            _ => Err(Error::Precondition(
                "symbol cost requires a lookup cost function".into(),
            )),
        }
    }

    /// Cost of a family point: quadratic costs read the parameter,
    /// observable costs read the state.
    pub fn of_family_point(&self, family: &ParamStateFamily, x: &[f64]) -> Result<f64> {
        match self {
            CostFunction::QuadraticParam => self.of_param(x),
            CostFunction::Observable(_) => self.of_state(&family.state_at(x)?),
            CostFunction::Lookup(_) => Err(Error::Precondition(
                "lookup costs do not apply to continuous families".into(),
            )),
        }
    }
}

type FamilyMap = Arc<dyn Fn(&[f64]) -> CMatrix + Send + Sync>;

/// A continuously parametrized family of states over a box domain.
///
/// The map produces raw Hermitian matrices so finite differences may step
/// slightly outside the physical set; [`ParamStateFamily::state_at`]
/// validates where an actual state is required.
#[derive(Clone)]
pub struct ParamStateFamily {
    param_dim: usize,
    state_dim: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    free_point: Option<Vec<f64>>,
    map: FamilyMap,
}

impl std::fmt::Debug for ParamStateFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParamStateFamily")
            .field("param_dim", &self.param_dim)
            .field("state_dim", &self.state_dim)
            .field("lower", &self.lower)
            .field("upper", &self.upper)
            .field("free_point", &self.free_point)
            .finish_non_exhaustive()
    }
}

impl ParamStateFamily {
    pub fn new(
        state_dim: usize,
        lower: Vec<f64>,
        upper: Vec<f64>,
        free_point: Option<Vec<f64>>,
        map: FamilyMap,
    ) -> Result<Self> {
        let param_dim = lower.len();
        if upper.len() != param_dim || param_dim == 0 {
            return Err(Error::Domain("inconsistent domain box".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l >= u) {
            return Err(Error::Domain("empty domain box".into()));
        }
        if let Some(fp) = &free_point {
            if fp.len() != param_dim {
                return Err(Error::Domain("free point outside parameter space".into()));
            }
            let inside = fp
                .iter()
                .zip(lower.iter().zip(&upper))
                .all(|(x, (l, u))| *x >= *l && *x <= *u);
            if !inside {
                return Err(Error::Domain("free point outside domain box".into()));
            }
        }
        Ok(Self {
            param_dim,
            state_dim,
            lower,
            upper,
            free_point,
            map,
        })
    }

    pub fn param_dim(&self) -> usize {
        self.param_dim
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn free_point(&self) -> Option<&[f64]> {
        self.free_point.as_deref()
    }

    /// Raw matrix at `x` (no validation).
    pub fn matrix_at(&self, x: &[f64]) -> CMatrix {
        (self.map)(x)
    }

    /// Validated state at `x`.
    pub fn state_at(&self, x: &[f64]) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix_at(x))
    }

    /// ∂ρ/∂x_coord by central differences with two-step Richardson
    /// extrapolation (h and h/2).
    pub fn derivative(&self, x: &[f64], coord: usize) -> CMatrix {
        let h = tolerances::FD_STEP;
        let central = |step: f64| -> CMatrix {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[coord] += step;
            xm[coord] -= step;
            (self.matrix_at(&xp) - self.matrix_at(&xm)) * Complex64::new(0.5 / step, 0.0)
        };
        let d_h = central(h);
        let d_h2 = central(h / 2.0);
        d_h2 * Complex64::new(4.0 / 3.0, 0.0) - d_h * Complex64::new(1.0 / 3.0, 0.0)
    }

    /// Compose with a channel: x ↦ Λ[ρ_x].
    pub fn through_channel(&self, channel: &KrausChannel) -> Result<ParamStateFamily> {
        if channel.dim_in() != self.state_dim {
            return Err(Error::DimensionMismatch {
                expected: channel.dim_in(),
                got: self.state_dim,
            });
        }
        let inner = self.map.clone();
        let ch = channel.clone();
        ParamStateFamily::new(
            channel.dim_out(),
            self.lower.clone(),
            self.upper.clone(),
            self.free_point.clone(),
            Arc::new(move |x| ch.apply_matrix(&inner(x))),
        )
    }

    /// Qubit Bloch family over u ∈ [−1,1]³; points outside the Bloch ball
    /// are radially clipped onto it. Free point is |0⟩⟨0| at (0,0,1).
    pub fn bloch_qubit() -> Self {
        let map: FamilyMap = Arc::new(|u: &[f64]| {
            let norm = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
            let s = if norm > 1.0 { 1.0 / norm } else { 1.0 };
            let (x, y, z) = (u[0] * s, u[1] * s, u[2] * s);
            let mut m = CMatrix::zeros(2, 2);
            m[(0, 0)] = Complex64::new((1.0 + z) / 2.0, 0.0);
            m[(1, 1)] = Complex64::new((1.0 - z) / 2.0, 0.0);
            m[(0, 1)] = Complex64::new(x / 2.0, -y / 2.0);
            m[(1, 0)] = Complex64::new(x / 2.0, y / 2.0);
            m
        });
        ParamStateFamily::new(
            2,
            vec![-1.0; 3],
            vec![1.0; 3],
            Some(vec![0.0, 0.0, 1.0]),
            map,
        )
        .expect("static box")
    }

    /// One-parameter mixture θ ↦ (1−θ)ρ₀ + θρ₁, θ ∈ [0,1], free at θ = 0.
    pub fn binary_mixture(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<Self> {
        if rho0.dim() != rho1.dim() {
            return Err(Error::DimensionMismatch {
                expected: rho0.dim(),
                got: rho1.dim(),
            });
        }
        let m0 = rho0.matrix().clone();
        let m1 = rho1.matrix().clone();
        let dim = rho0.dim();
        let map: FamilyMap = Arc::new(move |x: &[f64]| {
            let t = x[0];
            &m0 * Complex64::new(1.0 - t, 0.0) + &m1 * Complex64::new(t, 0.0)
        });
        ParamStateFamily::new(dim, vec![0.0], vec![1.0], Some(vec![0.0]), map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::von_neumann_entropy;
    use crate::linalg::max_abs_diff;
    use crate::testutil::random_density;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn identity_channel_fixes_states() {
        let ch = KrausChannel::identity(2);
        let rho = DensityMatrix::basis_state(2, 1);
        let out = ch.apply(&rho).unwrap();
        assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn depolarizing_channel_outputs_maximally_mixed() {
        let ch = KrausChannel::completely_depolarizing(2);
        for rho in [
            DensityMatrix::basis_state(2, 0),
            DensityMatrix::basis_state(2, 1),
            DensityMatrix::maximally_mixed(2),
        ] {
            let out = ch.apply(&rho).unwrap();
            assert!(
                max_abs_diff(out.matrix(), DensityMatrix::maximally_mixed(2).matrix()) < 1e-12
            );
        }
    }

    #[test]
    fn amplitude_damping_on_excited_state() {
        // two Kraus terms by hand: K0|1><1|K0^H = (1-g)|1><1|, K1|1><1|K1^H = g|0><0|
        let ch = KrausChannel::amplitude_damping(0.3).unwrap();
        let out = ch.apply(&DensityMatrix::basis_state(2, 1)).unwrap();
        assert!((out.matrix()[(0, 0)].re - 0.3).abs() < 1e-12);
        assert!((out.matrix()[(1, 1)].re - 0.7).abs() < 1e-12);
        assert!(out.matrix()[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn kraus_validation_examples() {
        let id = CMatrix::identity(2, 2);
        assert!(validate_kraus(2, std::slice::from_ref(&id)));
        // trace decreasing
        assert!(!validate_kraus(2, &[id * Complex64::new(0.5, 0.0)]));
        let ad = KrausChannel::amplitude_damping(0.3).unwrap();
        assert!(validate_kraus(2, ad.kraus_ops()));
        assert!(ad.completeness_defect() <= 1e-12);
    }

    #[test]
    fn random_channel_is_cptp_and_preserves_validity() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..10 {
            let ch = KrausChannel::random(3, 4, 3, &mut rng);
            assert!(ch.completeness_defect() <= 1e-12);
            let rho = random_density(3, &mut rng);
            let out = ch.apply(&rho).unwrap();
            assert!((linalg::trace_re(out.matrix()) - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn apply_is_linear() {
        let mut rng = StdRng::seed_from_u64(9);
        let ch = KrausChannel::random(2, 2, 3, &mut rng);
        let r1 = random_density(2, &mut rng);
        let r2 = random_density(2, &mut rng);
        let a = 0.3;
        let mixed = DensityMatrix::mixture(&[(a, &r1), (1.0 - a, &r2)]).unwrap();
        let lhs = ch.apply_matrix(mixed.matrix());
        let rhs = ch.apply_matrix(r1.matrix()) * Complex64::new(a, 0.0)
            + ch.apply_matrix(r2.matrix()) * Complex64::new(1.0 - a, 0.0);
        assert!(max_abs_diff(&lhs, &rhs) <= 1e-10);
    }

    #[test]
    fn cost_function_kinds() {
        let quad = CostFunction::QuadraticParam;
        assert_eq!(quad.of_param(&[0.0]).unwrap(), 0.0);
        assert!((quad.of_param(&[0.3]).unwrap() - 0.09).abs() < 1e-15);

        // photon-number-like observable diag(0,1,2) on |1><1|
        let b = CMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                Complex64::new(i as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let cost = CostFunction::observable(b).unwrap();
        let rho = DensityMatrix::basis_state(3, 1);
        assert!((cost.of_state(&rho).unwrap() - 1.0).abs() < 1e-12);

        let table = CostFunction::Lookup(vec![0.0, 1.0, 2.0]);
        assert_eq!(table.of_symbol(2).unwrap(), 2.0);
        assert!(table.of_symbol(3).is_err());
    }

    #[test]
    fn bloch_family_valid_everywhere_and_free_point_costless() {
        let fam = ParamStateFamily::bloch_qubit();
        let b = CMatrix::from_fn(2, 2, |i, j| {
            if i == 1 && j == 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let cost = CostFunction::observable(b).unwrap();
        for u in [
            [0.0, 0.0, 1.0],
            [1.0, 1.0, 1.0],
            [-1.0, 0.3, -1.0],
            [0.2, -0.4, 0.1],
        ] {
            assert!(fam.state_at(&u).is_ok());
        }
        let free = fam.free_point().unwrap().to_vec();
        assert_eq!(cost.of_family_point(&fam, &free).unwrap(), 0.0);
    }

    #[test]
    fn binary_mixture_endpoints() {
        let r0 = DensityMatrix::basis_state(2, 0);
        let r1 = DensityMatrix::maximally_mixed(2);
        let fam = ParamStateFamily::binary_mixture(&r0, &r1).unwrap();
        assert!(max_abs_diff(&fam.matrix_at(&[0.0]), r0.matrix()) < 1e-15);
        assert!(max_abs_diff(&fam.matrix_at(&[1.0]), r1.matrix()) < 1e-15);
    }

    #[test]
    fn derivative_matches_analytic_mixture_slope() {
        let r0 = DensityMatrix::basis_state(2, 0);
        let r1 = DensityMatrix::maximally_mixed(2);
        let fam = ParamStateFamily::binary_mixture(&r0, &r1).unwrap();
        let d = fam.derivative(&[0.5], 0);
        let expected = r1.matrix() - r0.matrix();
        assert!(max_abs_diff(&d, &expected) < 1e-9);
    }

    #[test]
    fn through_channel_composes() {
        let fam = ParamStateFamily::bloch_qubit();
        let ch = KrausChannel::completely_depolarizing(2);
        let composed = fam.through_channel(&ch).unwrap();
        let out = composed.state_at(&[0.3, -0.2, 0.5]).unwrap();
        assert!(max_abs_diff(out.matrix(), DensityMatrix::maximally_mixed(2).matrix()) < 1e-12);
    }

    #[test]
    fn entropy_pipeline_through_damping() {
        // sanity: amplitude damping increases vacuum-population entropy of |1><1|
        let ch = KrausChannel::amplitude_damping(0.3).unwrap();
        let out = ch.apply(&DensityMatrix::basis_state(2, 1)).unwrap();
        assert!(von_neumann_entropy(&out) > 0.0);
    }
}
