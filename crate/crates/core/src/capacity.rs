//! Information quantities and the capacity-per-unit-cost machinery.
//!
//! Holevo information χ comes in two algebraically equal forms, the
//! entropy form S(Λ[ρ̄]) − Σ p S(Λ[ρ_x]) and the relative-entropy form
//! Σ p D(Λ[ρ_x]‖Λ[ρ̄]); both are exposed and cross-checked. The capacity
//! per unit cost uses the free-symbol formula
//!
//!   𝐂 = sup_{ρ_x ≠ ρ₀} D(Λ[ρ_x]‖Λ[ρ₀]) / b[ρ_x],
//!
//! which is +∞ as soon as any achievable output escapes the support of the
//! free-symbol output. REQFI (the second-order coefficient of the relative
//! entropy along a family) and the SLD quantum Fisher information connect
//! the capacity to estimation theory through 𝐂 ≥ 𝒥/2 ≥ ℱ/2.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::{CostFunction, KrausChannel, ParamStateFamily};
use crate::density::{relative_entropy, von_neumann_entropy, DensityMatrix};
use crate::error::{Error, Result};
use crate::extended::ExtendedReal;
use crate::linalg::{spectral_decompose_hermitized, CMatrix, SpectralDecomposition};
use crate::optimize::{nelder_mead, BoxGrid};
use crate::tolerances;

/// Stand-in exponent for "infinite" relative entropies inside the prior
/// ascent; large enough to dominate, small enough to stay finite after
/// log-domain normalization.
const D_LARGE: f64 = 1e4;

/// Ratios at or above this are treated as numerically infinite.
const RATIO_INF: f64 = 1e50;

/// Slack for the 𝐂 ≥ 𝒥/2 check (the supremum excludes a small ball around
/// the free point, so it can undershoot the limit by O(ball radius)).
const CHAIN_SLACK: f64 = 1e-6;

/// Radius below which the ratio D/b (a 0/0 limit at the free point) is
/// evaluated on the shell along the same ray instead. Both numerator and
/// denominator are O(δ²), so closer evaluations are dominated by
/// cancellation noise ~1e-16/δ²; at the shell the ray value is still
/// within O(shell²) of its limit.
const RATIO_EVAL_SHELL: f64 = 1e-3;

/// A prior-weighted set of states with per-symbol costs.
#[derive(Debug, Clone)]
pub struct Ensemble {
    dim: usize,
    symbols: Vec<EnsembleSymbol>,
}

#[derive(Debug, Clone)]
pub struct EnsembleSymbol {
    pub prior: f64,
    pub state: DensityMatrix,
    pub cost: f64,
}

impl Ensemble {
    /// Validate priors (sum 1 within 1e-12, entries in [0,1]), costs ≥ 0,
    /// and consistent dimensions.
    pub fn new(symbols: Vec<(f64, DensityMatrix, f64)>) -> Result<Self> {
        let first = symbols
            .first()
            .ok_or_else(|| Error::Domain("empty ensemble".into()))?;
        let dim = first.1.dim();
        let mut total = 0.0;
        for (p, state, cost) in &symbols {
            if state.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: state.dim(),
                });
            }
            if *p < -tolerances::PRIOR_SUM || *p > 1.0 + tolerances::PRIOR_SUM {
                return Err(Error::InvalidProbabilities(format!("prior {p} outside [0,1]")));
            }
            if *cost < 0.0 {
                return Err(Error::Domain(format!("negative cost {cost}")));
            }
            total += p;
        }
        if (total - 1.0).abs() > tolerances::PRIOR_SUM {
            return Err(Error::InvalidProbabilities(format!(
                "priors sum to {total}, not 1"
            )));
        }
        Ok(Self {
            dim,
            symbols: symbols
                .into_iter()
                .map(|(prior, state, cost)| EnsembleSymbol { prior, state, cost })
                .collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symbols(&self) -> &[EnsembleSymbol] {
        &self.symbols
    }

    /// ρ̄ = Σ p_x ρ_x.
    pub fn average_state(&self) -> DensityMatrix {
        let parts: Vec<(f64, &DensityMatrix)> = self
            .symbols
            .iter()
            .map(|s| (s.prior.max(0.0), &s.state))
            .collect();
        DensityMatrix::mixture(&parts).expect("validated ensemble")
    }

    /// ⟨b⟩ = Σ p_x b_x.
    pub fn average_cost(&self) -> f64 {
        self.symbols.iter().map(|s| s.prior * s.cost).sum()
    }
}

/// Classical mutual information I(X;Y) = H(Y) − H(Y|X) in nats.
pub fn mutual_information(prior: &[f64], conditional: &[Vec<f64>]) -> Result<f64> {
    if conditional.len() != prior.len() {
        return Err(Error::DimensionMismatch {
            expected: prior.len(),
            got: conditional.len(),
        });
    }
    let psum: f64 = prior.iter().sum();
    if (psum - 1.0).abs() > tolerances::PRIOR_SUM || prior.iter().any(|&p| p < 0.0) {
        return Err(Error::InvalidProbabilities(format!(
            "prior sums to {psum}"
        )));
    }
    let n_out = conditional.first().map(|r| r.len()).unwrap_or(0);
    for (x, row) in conditional.iter().enumerate() {
        if row.len() != n_out {
            return Err(Error::NonStochastic { row: x, sum: f64::NAN });
        }
        let s: f64 = row.iter().sum();
        if (s - 1.0).abs() > tolerances::PRIOR_SUM || row.iter().any(|&q| q < 0.0) {
            return Err(Error::NonStochastic { row: x, sum: s });
        }
    }
    let mut p_y = vec![0.0; n_out];
    for (x, row) in conditional.iter().enumerate() {
        for (y, &q) in row.iter().enumerate() {
            p_y[y] += prior[x] * q;
        }
    }
    let mut info = 0.0;
    for (x, row) in conditional.iter().enumerate() {
        for (y, &q) in row.iter().enumerate() {
            if prior[x] > 0.0 && q > 0.0 && p_y[y] > 0.0 {
                info += prior[x] * q * (q / p_y[y]).ln();
            }
        }
    }
    Ok(info.max(0.0))
}

fn channel_outputs(ensemble: &Ensemble, channel: &KrausChannel) -> Result<Vec<DensityMatrix>> {
    ensemble
        .symbols()
        .iter()
        .map(|s| channel.apply(&s.state))
        .collect()
}

/// χ = S(Σ p Λ[ρ]) − Σ p S(Λ[ρ]), in nats.
pub fn holevo_chi_entropy_form(ensemble: &Ensemble, channel: &KrausChannel) -> Result<f64> {
    let outputs = channel_outputs(ensemble, channel)?;
    let parts: Vec<(f64, &DensityMatrix)> = ensemble
        .symbols()
        .iter()
        .zip(&outputs)
        .map(|(s, o)| (s.prior.max(0.0), o))
        .collect();
    let avg = DensityMatrix::mixture(&parts)?;
    let mut chi = von_neumann_entropy(&avg);
    for (s, o) in ensemble.symbols().iter().zip(&outputs) {
        if s.prior > 0.0 {
            chi -= s.prior * von_neumann_entropy(o);
        }
    }
    Ok(chi.max(0.0))
}

/// χ = Σ p_x D(Λ[ρ_x]‖Λ[ρ̄]), in nats. Agrees with the entropy form
/// within 1e-9; supp(Λ[ρ_x]) ⊆ supp(Λ[ρ̄]) holds whenever p_x > 0, so the
/// sum is finite.
pub fn holevo_chi_relent_form(ensemble: &Ensemble, channel: &KrausChannel) -> Result<f64> {
    let outputs = channel_outputs(ensemble, channel)?;
    let parts: Vec<(f64, &DensityMatrix)> = ensemble
        .symbols()
        .iter()
        .zip(&outputs)
        .map(|(s, o)| (s.prior.max(0.0), o))
        .collect();
    let avg = DensityMatrix::mixture(&parts)?;
    let mut chi = 0.0;
    for (s, o) in ensemble.symbols().iter().zip(&outputs) {
        if s.prior <= 0.0 {
            continue;
        }
        match relative_entropy(o, &avg)? {
            ExtendedReal::Finite(d) => chi += s.prior * d,
            ExtendedReal::Infinite => {
                return Err(Error::Numerical(
                    "output escaped the average-state support".into(),
                ))
            }
        }
    }
    Ok(chi)
}

/// The two terms of the reference-state decomposition
/// χ = Σ p_x D(Λ[ρ_x]‖Λ[ρ_ref]) − D(Λ[ρ̄]‖Λ[ρ_ref]).
///
/// Either term is +∞ when a support escapes the reference output.
pub fn chi_reference_decomposition(
    ensemble: &Ensemble,
    channel: &KrausChannel,
    reference: &DensityMatrix,
) -> Result<(ExtendedReal, ExtendedReal)> {
    let sigma_ref = channel.apply(reference)?;
    let outputs = channel_outputs(ensemble, channel)?;
    let mut term1 = ExtendedReal::Finite(0.0);
    for (s, o) in ensemble.symbols().iter().zip(&outputs) {
        if s.prior <= 0.0 {
            continue;
        }
        match (term1, relative_entropy(o, &sigma_ref)?) {
            (ExtendedReal::Finite(acc), ExtendedReal::Finite(d)) => {
                term1 = ExtendedReal::Finite(acc + s.prior * d)
            }
            _ => {
                term1 = ExtendedReal::Infinite;
                break;
            }
        }
    }
    let parts: Vec<(f64, &DensityMatrix)> = ensemble
        .symbols()
        .iter()
        .zip(&outputs)
        .map(|(s, o)| (s.prior.max(0.0), o))
        .collect();
    let avg = DensityMatrix::mixture(&parts)?;
    let term2 = relative_entropy(&avg, &sigma_ref)?;
    Ok((term1, term2))
}

/// χ of the two-symbol encoding {ρ₀ with prior 1−β/b, ρ with prior β/b}.
pub fn binary_encoding_chi(
    channel: &KrausChannel,
    rho: &DensityMatrix,
    rho0: &DensityMatrix,
    cost: f64,
    beta: f64,
) -> Result<f64> {
    if cost <= 0.0 {
        return Err(Error::Domain(format!("signal cost {cost} must be positive")));
    }
    if beta <= 0.0 || beta > cost {
        return Err(Error::Domain(format!(
            "beta {beta} outside (0, {cost}]"
        )));
    }
    let p1 = beta / cost;
    let ensemble = Ensemble::new(vec![
        (1.0 - p1, rho0.clone(), 0.0),
        (p1, rho.clone(), cost),
    ])?;
    holevo_chi_entropy_form(&ensemble, channel)
}

/// One point of the capacity-cost curve.
#[derive(Debug, Clone)]
pub struct CapacityCostPoint {
    pub beta: f64,
    /// C(β) in nats.
    pub capacity: f64,
    pub optimal_prior: Vec<f64>,
}

/// D(ρ‖σ) against a cached decomposition of σ, with S(ρ) precomputed.
/// Returns `D_LARGE` on support escape so the prior ascent can keep going.
fn relent_cached(rho: &DensityMatrix, entropy_rho: f64, sigma_dec: &SpectralDecomposition) -> f64 {
    let cut = sigma_dec.support_cut();
    let dim = rho.dim();
    let mut cross = 0.0;
    let mut leak = 0.0;
    for (m, &q) in sigma_dec.eigenvalues.iter().enumerate() {
        let v = sigma_dec.eigenvectors.column(m);
        let mut overlap = Complex64::new(0.0, 0.0);
        for i in 0..dim {
            for j in 0..dim {
                overlap += v[i].conj() * rho.matrix()[(i, j)] * v[j];
            }
        }
        let w = overlap.re.max(0.0);
        if q > cut {
            cross -= w * q.ln();
        } else {
            leak += w;
        }
    }
    if leak > tolerances::SUPPORT_LEAK {
        return D_LARGE;
    }
    (cross - entropy_rho).max(0.0)
}

/// One sweep of the exponentiated-gradient (Blahut-Arimoto-type) ascent at
/// a fixed cost multiplier λ. Returns (prior, χ, ⟨b⟩).
fn prior_ascent(
    outputs: &[DensityMatrix],
    entropies: &[f64],
    costs: &[f64],
    lambda: f64,
    start: &[f64],
) -> (Vec<f64>, f64, f64) {
    let n = outputs.len();
    let dim = outputs[0].dim();
    let mut prior = start.to_vec();
    for _ in 0..tolerances::PRIOR_MAX_ITERS {
        let mut avg = CMatrix::zeros(dim, dim);
        for (p, o) in prior.iter().zip(outputs) {
            avg += o.matrix() * Complex64::new(*p, 0.0);
        }
        let avg_dec = spectral_decompose_hermitized(&avg);
        let gains: Vec<f64> = (0..n)
            .map(|x| relent_cached(&outputs[x], entropies[x], &avg_dec) - lambda * costs[x])
            .collect();
        let top = gains
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let mut next: Vec<f64> = prior
            .iter()
            .zip(&gains)
            .map(|(p, g)| p * (g - top).exp())
            .collect();
        let z: f64 = next.iter().sum();
        for p in &mut next {
            *p /= z;
        }
        let movement: f64 = prior
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / 2.0;
        prior = next;
        if movement < tolerances::PRIOR_TV {
            break;
        }
    }
    let (chi, avg_cost) = evaluate_prior(outputs, entropies, costs, &prior);
    (prior, chi, avg_cost)
}

fn evaluate_prior(
    outputs: &[DensityMatrix],
    entropies: &[f64],
    costs: &[f64],
    prior: &[f64],
) -> (f64, f64) {
    let dim = outputs[0].dim();
    let mut avg = CMatrix::zeros(dim, dim);
    for (p, o) in prior.iter().zip(outputs) {
        avg += o.matrix() * Complex64::new(*p, 0.0);
    }
    let avg_dec = spectral_decompose_hermitized(&avg);
    let s_avg = crate::density::entropy_of_spectrum(&avg_dec);
    let chi = (s_avg
        - prior
            .iter()
            .zip(entropies)
            .map(|(p, s)| p * s)
            .sum::<f64>())
    .max(0.0);
    let avg_cost = prior.iter().zip(costs).map(|(p, b)| p * b).sum();
    (chi, avg_cost)
}

/// C(β): maximal χ over priors on a fixed state set subject to the average
/// cost constraint Σ p_x b_x ≤ β.
///
/// Concave maximization by multiplicative prior updates with a
/// bisection-tuned Lagrange multiplier on the cost.
pub fn capacity_cost(
    states: &[(DensityMatrix, f64)],
    channel: &KrausChannel,
    beta: f64,
) -> Result<CapacityCostPoint> {
    if beta <= 0.0 {
        return Err(Error::Domain(format!("beta {beta} must be positive")));
    }
    if states.is_empty() {
        return Err(Error::Domain("empty state set".into()));
    }
    let min_cost = states.iter().map(|(_, b)| *b).fold(f64::INFINITY, f64::min);
    if min_cost > beta {
        return Err(Error::Domain(format!(
            "infeasible constraint: cheapest symbol costs {min_cost} > beta {beta}"
        )));
    }
    let outputs: Vec<DensityMatrix> = states
        .iter()
        .map(|(rho, _)| channel.apply(rho))
        .collect::<Result<_>>()?;
    let entropies: Vec<f64> = outputs.iter().map(von_neumann_entropy).collect();
    let costs: Vec<f64> = states.iter().map(|(_, b)| *b).collect();
    let n = outputs.len();
    let uniform = vec![1.0 / n as f64; n];

    let (p0, chi0, cost0) = prior_ascent(&outputs, &entropies, &costs, 0.0, &uniform);
    if cost0 <= beta + 1e-12 {
        return Ok(CapacityCostPoint {
            beta,
            capacity: chi0,
            optimal_prior: p0,
        });
    }

    // bracket the multiplier: average cost is nonincreasing in lambda
    let mut lo = (0.0, p0, cost0);
    let mut lambda_hi = 1.0;
    let mut hi = loop {
        let (p, _, c) = prior_ascent(&outputs, &entropies, &costs, lambda_hi, &uniform);
        if c <= beta {
            break (lambda_hi, p, c);
        }
        lambda_hi *= 2.0;
        if lambda_hi > 1e12 {
            return Err(Error::Numerical(
                "cost multiplier bracket failed to close".into(),
            ));
        }
    };

    for _ in 0..200 {
        let mid = 0.5 * (lo.0 + hi.0);
        let (p, _, c) = prior_ascent(&outputs, &entropies, &costs, mid, &hi.1);
        if c > beta {
            lo = (mid, p, c);
        } else {
            hi = (mid, p, c);
        }
        if (hi.0 - lo.0) < 1e-13 * hi.0.max(1.0) || (beta - hi.2).abs() < 1e-11 * beta.max(1.0) {
            break;
        }
    }

    // candidates: feasible endpoint, and the cost-exact blend of the two
    // endpoint priors (chi is concave, so the blend cannot fall below the
    // chord)
    let mut best = {
        let (chi, _) = evaluate_prior(&outputs, &entropies, &costs, &hi.1);
        (chi, hi.1.clone())
    };
    if lo.2 > hi.2 + 1e-15 {
        let t = (beta - hi.2) / (lo.2 - hi.2);
        if (0.0..=1.0).contains(&t) {
            let blend: Vec<f64> = hi
                .1
                .iter()
                .zip(&lo.1)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect();
            let (chi, c) = evaluate_prior(&outputs, &entropies, &costs, &blend);
            if c <= beta + 1e-9 && chi > best.0 {
                best = (chi, blend);
            }
        }
    }

    Ok(CapacityCostPoint {
        beta,
        capacity: best.0,
        optimal_prior: best.1,
    })
}

/// Why a capacity-per-unit-cost value is what it is.
#[derive(Debug, Clone)]
pub enum CpucWitness {
    /// A family state whose channel output escapes the support of the
    /// free-symbol output.
    SupportMismatch { param: Vec<f64> },
    /// The maximizing parameter and the achieved ratio.
    Maximizer { param: Vec<f64>, ratio: f64 },
}

/// Result of the free-symbol capacity-per-unit-cost optimization.
#[derive(Debug, Clone)]
pub struct CpucResult {
    pub value: ExtendedReal,
    pub witness: CpucWitness,
    /// Limit of the ratio at the free point, 𝒥/2, reported separately for
    /// one-parameter families (the ratio itself is 0/0 there).
    pub free_point_limit: Option<ExtendedReal>,
}

/// 𝐂 = sup_x D(Λ[ρ_x]‖Λ[ρ₀])/b[ρ_x] over the family box, excluding a small
/// ball around the declared free point.
///
/// Support mismatches are scanned for on the coarse grid before any ratio
/// is chased; a mismatch short-circuits to +∞ with its witness.
pub fn capacity_per_unit_cost(
    channel: &KrausChannel,
    family: &ParamStateFamily,
    cost: &CostFunction,
) -> Result<CpucResult> {
    let free = family
        .free_point()
        .ok_or_else(|| Error::Precondition("family declares no free point".into()))?
        .to_vec();
    let free_cost = cost.of_family_point(family, &free)?;
    if free_cost > 1e-9 {
        return Err(Error::Precondition(format!(
            "free point has nonzero cost {free_cost}"
        )));
    }
    let out_family = family.through_channel(channel)?;
    let sigma0 = out_family.state_at(&free)?;
    let sigma0_dec = sigma0.eigen();
    let rank_deficient = sigma0_dec.support_len() < sigma0.dim();

    let grid = BoxGrid::new(family.lower(), family.upper(), tolerances::GRID_POINTS_PER_DIM);
    let in_free_ball = |x: &[f64]| -> bool {
        x.iter()
            .zip(&free)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
            < tolerances::FREE_BALL_RADIUS
    };

    // support-mismatch scan first
    if rank_deficient {
        let mismatch = (0..grid.len())
            .into_par_iter()
            .find_map_first(|i| {
                let x = grid.point(i);
                if in_free_ball(&x) {
                    return None;
                }
                let sigma = out_family.state_at(&x).ok()?;
                let leak = kernel_weight_against(&sigma, &sigma0_dec);
                (leak > tolerances::SUPPORT_LEAK).then_some(x)
            });
        if let Some(param) = mismatch {
            let limit = free_point_limit(&out_family, &free);
            return Ok(CpucResult {
                value: ExtendedReal::Infinite,
                witness: CpucWitness::SupportMismatch { param },
                free_point_limit: limit,
            });
        }
    }

    let min_span = family
        .lower()
        .iter()
        .zip(family.upper())
        .map(|(l, u)| u - l)
        .fold(f64::INFINITY, f64::min);
    let shell = RATIO_EVAL_SHELL.min(0.01 * min_span);
    let ratio_at = |x: &[f64]| -> f64 {
        let dist = x
            .iter()
            .zip(&free)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if dist < tolerances::FREE_BALL_RADIUS {
            return -1.0;
        }
        // regularize the 0/0 neighborhood: evaluate on the shell along the
        // same ray from the free point
        let rescaled;
        let x = if dist < shell {
            let mut y: Vec<f64> = x
                .iter()
                .zip(&free)
                .map(|(a, b)| b + (a - b) * (shell / dist))
                .collect();
            for (d, y_d) in y.iter_mut().enumerate() {
                *y_d = y_d.clamp(family.lower()[d], family.upper()[d]);
            }
            if in_free_ball(&y) {
                return -1.0;
            }
            rescaled = y;
            rescaled.as_slice()
        } else {
            x
        };
        let Ok(sigma) = out_family.state_at(x) else {
            return -1.0;
        };
        let Ok(d) = relative_entropy(&sigma, &sigma0) else {
            return -1.0;
        };
        let Ok(b) = cost.of_family_point(family, x) else {
            return -1.0;
        };
        match d {
            ExtendedReal::Infinite => RATIO_INF,
            ExtendedReal::Finite(d) => {
                if b <= 1e-14 {
                    // a second zero-cost symbol: free information unless the
                    // outputs coincide
                    if d > 1e-9 {
                        RATIO_INF
                    } else {
                        -1.0
                    }
                } else {
                    d / b
                }
            }
        }
    };

    let mut scored: Vec<(f64, Vec<f64>)> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let x = grid.point(i);
            (ratio_at(&x), x)
        })
        .collect();
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    if scored[0].0 >= RATIO_INF {
        let limit = free_point_limit(&out_family, &free);
        return Ok(CpucResult {
            value: ExtendedReal::Infinite,
            witness: CpucWitness::SupportMismatch {
                param: scored[0].1.clone(),
            },
            free_point_limit: limit,
        });
    }

    let mut best = (scored[0].0, scored[0].1.clone());
    for (start_ratio, start) in scored.iter().take(tolerances::MULTISTART_COUNT) {
        if *start_ratio < 0.0 {
            continue;
        }
        let (x, neg) = nelder_mead(
            |x| -ratio_at(x),
            start,
            0.02,
            family.lower(),
            family.upper(),
            tolerances::SIMPLEX_DIAMETER,
            400,
        );
        if -neg > best.0 {
            best = (-neg, x);
        }
    }

    if best.0 >= RATIO_INF {
        let limit = free_point_limit(&out_family, &free);
        return Ok(CpucResult {
            value: ExtendedReal::Infinite,
            witness: CpucWitness::SupportMismatch { param: best.1 },
            free_point_limit: limit,
        });
    }

    let value = ExtendedReal::Finite(best.0.max(0.0));
    let limit = free_point_limit(&out_family, &free);
    Ok(CpucResult {
        value,
        witness: CpucWitness::Maximizer {
            param: best.1,
            ratio: best.0.max(0.0),
        },
        free_point_limit: limit,
    })
}

fn free_point_limit(out_family: &ParamStateFamily, free: &[f64]) -> Option<ExtendedReal> {
    if out_family.param_dim() == 1 {
        reqfi(out_family, free[0])
            .ok()
            .map(|j| match j {
                ExtendedReal::Finite(v) => ExtendedReal::Finite(v / 2.0),
                ExtendedReal::Infinite => ExtendedReal::Infinite,
            })
    } else {
        None
    }
}

fn kernel_weight_against(rho: &DensityMatrix, sigma_dec: &SpectralDecomposition) -> f64 {
    let cut = sigma_dec.support_cut();
    let dim = rho.dim();
    let mut w = 0.0;
    for (m, &q) in sigma_dec.eigenvalues.iter().enumerate() {
        if q <= cut {
            let v = sigma_dec.eigenvectors.column(m);
            let mut overlap = Complex64::new(0.0, 0.0);
            for i in 0..dim {
                for j in 0..dim {
                    overlap += v[i].conj() * rho.matrix()[(i, j)] * v[j];
                }
            }
            w += overlap.re.max(0.0);
        }
    }
    w
}

/// Relative-entropy quantum Fisher information 𝒥 of a one-parameter family
/// at `phi0`, in the eigenbasis of ρ(φ₀):
///
///   𝒥 = Σ_n ṗ_n²/p_n + 2 Σ_{n,k} (p_n − p_k) |⟨n|k̇⟩|² ln p_n
///
/// evaluated over the support; the eigenvector-derivative term is summed
/// through the identity ⟨n|ρ̇|k⟩ = (p_k − p_n)⟨n|k̇⟩, which keeps spectral
/// crossings finite. Returns +∞ when ρ̇ has weight outside supp(ρ(φ₀))
/// beyond tolerance.
pub fn reqfi(family: &ParamStateFamily, phi0: f64) -> Result<ExtendedReal> {
    let (dec, r) = family_eigenframe(family, phi0)?;
    let cut = dec.support_cut();
    let dim = dec.eigenvalues.len();
    let support: Vec<usize> = (0..dim).filter(|&n| dec.eigenvalues[n] > cut).collect();

    let total_norm: f64 = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if total_norm > 1e-14 {
        let mut leak_sq = 0.0;
        for n in 0..dim {
            if dec.eigenvalues[n] <= cut {
                for k in 0..dim {
                    leak_sq += r[(n, k)].norm_sqr();
                }
            }
        }
        if leak_sq.sqrt() > tolerances::KERNEL_LEAK_REL * total_norm {
            return Ok(ExtendedReal::Infinite);
        }
    }

    let mut j = 0.0;
    for &n in &support {
        let pdot = r[(n, n)].re;
        j += pdot * pdot / dec.eigenvalues[n];
    }
    for &n in &support {
        for &k in &support {
            if n == k {
                continue;
            }
            let (pn, pk) = (dec.eigenvalues[n], dec.eigenvalues[k]);
            let coeff = if (pn - pk).abs() > 1e-12 * pn.max(pk) {
                (pn.ln() - pk.ln()) / (pn - pk)
            } else {
                2.0 / (pn + pk)
            };
            j += r[(n, k)].norm_sqr() * coeff;
        }
    }
    Ok(ExtendedReal::Finite(j.max(0.0)))
}

/// SLD quantum Fisher information ℱ = Σ 2|⟨n|ρ̇|k⟩|²/(p_n + p_k) over pairs
/// with p_n + p_k above the cut. Smallest of the quantum Fisher
/// informations: ℱ ≤ 𝒥 always.
pub fn qfi(family: &ParamStateFamily, phi0: f64) -> Result<f64> {
    let (dec, r) = family_eigenframe(family, phi0)?;
    let dim = dec.eigenvalues.len();
    let mut f = 0.0;
    for n in 0..dim {
        for k in 0..dim {
            let s = dec.eigenvalues[n].max(0.0) + dec.eigenvalues[k].max(0.0);
            if s > tolerances::QFI_PAIR_CUT {
                f += 2.0 * r[(n, k)].norm_sqr() / s;
            }
        }
    }
    Ok(f.max(0.0))
}

/// Eigendecomposition of ρ(φ₀) and ρ̇ rotated into that eigenbasis.
fn family_eigenframe(
    family: &ParamStateFamily,
    phi0: f64,
) -> Result<(SpectralDecomposition, CMatrix)> {
    if family.param_dim() != 1 {
        return Err(Error::Precondition(format!(
            "Fisher information needs a one-parameter family, got {} parameters",
            family.param_dim()
        )));
    }
    let x = [phi0];
    let rho = crate::linalg::hermitize(&family.matrix_at(&x));
    let dec = spectral_decompose_hermitized(&rho);
    let rdot = crate::linalg::hermitize(&family.derivative(&x, 0));
    let r = dec.eigenvectors.adjoint() * rdot * &dec.eigenvectors;
    Ok((dec, r))
}

/// Estimation-theoretic bounds at the free point of a quadratic-cost
/// family: 𝒥/2, ℱ/2, the minimum-energy chain E_min ≤ 1/𝒥 ≤ 1/ℱ, and
/// optionally 𝐂 with the check 𝐂 ≥ 𝒥/2 ≥ ℱ/2.
#[derive(Debug, Clone)]
pub struct EstimationBounds {
    pub j_half: ExtendedReal,
    pub f_half: f64,
    /// 1/𝒥 (upper bound on the minimal energy per half nat).
    pub e_min_via_j: ExtendedReal,
    /// 1/ℱ.
    pub e_min_via_f: ExtendedReal,
    pub cpuc: Option<CpucResult>,
    /// 𝐂 ≥ 𝒥/2 ≥ ℱ/2, when 𝐂 was computed.
    pub chain_holds: Option<bool>,
}

pub fn estimation_bounds_report(
    channel: &KrausChannel,
    family: &ParamStateFamily,
    cost: &CostFunction,
    compute_cpuc: bool,
) -> Result<EstimationBounds> {
    if !matches!(cost, CostFunction::QuadraticParam) {
        return Err(Error::Precondition(
            "estimation bounds need the quadratic cost b[x] = x^2".into(),
        ));
    }
    let free = family
        .free_point()
        .ok_or_else(|| Error::Precondition("family declares no free point".into()))?;
    if family.param_dim() != 1 || free[0].abs() > 1e-12 {
        return Err(Error::Precondition(
            "estimation bounds need a scalar family with free point x = 0".into(),
        ));
    }
    let out_family = family.through_channel(channel)?;
    let j = reqfi(&out_family, 0.0)?;
    let f = qfi(&out_family, 0.0)?;
    let j_half = match j {
        ExtendedReal::Finite(v) => ExtendedReal::Finite(v / 2.0),
        ExtendedReal::Infinite => ExtendedReal::Infinite,
    };
    let e_min_via_j = j.recip();
    let e_min_via_f = ExtendedReal::from(f).recip();

    let cpuc = if compute_cpuc {
        Some(capacity_per_unit_cost(channel, family, cost)?)
    } else {
        None
    };
    let chain_holds = cpuc.as_ref().map(|r| {
        let upper_ok = match (&r.value, &j_half) {
            (ExtendedReal::Infinite, _) => true,
            (ExtendedReal::Finite(c), ExtendedReal::Finite(jh)) => *c + CHAIN_SLACK >= *jh,
            (ExtendedReal::Finite(_), ExtendedReal::Infinite) => false,
        };
        let lower_ok = match &j_half {
            ExtendedReal::Infinite => true,
            ExtendedReal::Finite(jh) => *jh + 1e-8 >= f / 2.0,
        };
        upper_ok && lower_ok
    });

    Ok(EstimationBounds {
        j_half,
        f_half: f / 2.0,
        e_min_via_j,
        e_min_via_f,
        cpuc,
        chain_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::random_density;
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use std::f64::consts::LN_2;

    fn plus_state() -> DensityMatrix {
        let ket = crate::linalg::basis_ket(2, 0) + crate::linalg::basis_ket(2, 1);
        DensityMatrix::pure(&ket).unwrap()
    }

    #[test]
    fn mutual_information_noiseless_and_useless() {
        let prior = [0.5, 0.5];
        let noiseless = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!((mutual_information(&prior, &noiseless).unwrap() - LN_2).abs() < 1e-12);
        let useless = vec![vec![0.5, 0.5], vec![0.5, 0.5]];
        assert!(mutual_information(&prior, &useless).unwrap().abs() < 1e-12);
    }

    #[test]
    fn mutual_information_binary_symmetric() {
        // I = ln2 - H2(0.1); frozen from a direct evaluation of the sums
        let prior = [0.5, 0.5];
        let bsc = vec![vec![0.9, 0.1], vec![0.1, 0.9]];
        let i = mutual_information(&prior, &bsc).unwrap();
        assert!((i - 0.368064207168497).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_rejects_nonstochastic() {
        let prior = [0.5, 0.5];
        let bad = vec![vec![0.9, 0.2], vec![0.1, 0.9]];
        assert!(matches!(
            mutual_information(&prior, &bad),
            Err(Error::NonStochastic { .. })
        ));
    }

    #[test]
    fn holevo_orthogonal_pures_is_ln2() {
        let ens = Ensemble::new(vec![
            (0.5, DensityMatrix::basis_state(2, 0), 0.0),
            (0.5, DensityMatrix::basis_state(2, 1), 1.0),
        ])
        .unwrap();
        let id = KrausChannel::identity(2);
        assert!((holevo_chi_entropy_form(&ens, &id).unwrap() - LN_2).abs() < 1e-12);
        assert!((holevo_chi_relent_form(&ens, &id).unwrap() - LN_2).abs() < 1e-12);
    }

    #[test]
    fn holevo_equal_states_is_zero() {
        let rho = DensityMatrix::maximally_mixed(2);
        let ens = Ensemble::new(vec![(0.5, rho.clone(), 0.0), (0.5, rho, 1.0)]).unwrap();
        let id = KrausChannel::identity(2);
        assert!(holevo_chi_entropy_form(&ens, &id).unwrap().abs() < 1e-12);
        assert!(holevo_chi_relent_form(&ens, &id).unwrap().abs() < 1e-12);
    }

    #[test]
    fn holevo_zero_plus_ensemble() {
        // eigenvalues of the average state are (1 +- 1/sqrt2)/2; chi is their
        // binary entropy, frozen from an independent evaluation
        let ens = Ensemble::new(vec![
            (0.5, DensityMatrix::basis_state(2, 0), 0.0),
            (0.5, plus_state(), 1.0),
        ])
        .unwrap();
        let id = KrausChannel::identity(2);
        let chi_s = holevo_chi_entropy_form(&ens, &id).unwrap();
        let chi_d = holevo_chi_relent_form(&ens, &id).unwrap();
        assert!((chi_s - 0.416495530699687).abs() < 1e-12);
        assert!((chi_s - chi_d).abs() <= 1e-9);
    }

    #[test]
    fn two_forms_agree_on_random_ensembles() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..25 {
            let dim = 2 + (rand::Rng::random::<u32>(&mut rng) % 3) as usize;
            let n_sym = 2 + (rand::Rng::random::<u32>(&mut rng) % 5) as usize;
            let mut raw: Vec<f64> = (0..n_sym)
                .map(|_| rand::Rng::random::<f64>(&mut rng) + 0.05)
                .collect();
            let z: f64 = raw.iter().sum();
            raw.iter_mut().for_each(|p| *p /= z);
            let symbols: Vec<(f64, DensityMatrix, f64)> = raw
                .iter()
                .map(|&p| (p, random_density(dim, &mut rng), 1.0))
                .collect();
            let ens = Ensemble::new(symbols).unwrap();
            let ch = KrausChannel::random(dim, dim, 3, &mut rng);
            let a = holevo_chi_entropy_form(&ens, &ch).unwrap();
            let b = holevo_chi_relent_form(&ens, &ch).unwrap();
            assert!((a - b).abs() <= 1e-9, "forms disagree: {a} vs {b}");
            assert!(a >= 0.0);
        }
    }

    #[test]
    fn reference_decomposition_identities() {
        let ens = Ensemble::new(vec![
            (0.5, DensityMatrix::basis_state(2, 0), 0.0),
            (0.5, plus_state(), 1.0),
        ])
        .unwrap();
        let id = KrausChannel::identity(2);
        let chi = holevo_chi_entropy_form(&ens, &id).unwrap();

        // reference = average state: term2 = 0, term1 = chi
        let avg = ens.average_state();
        let (t1, t2) = chi_reference_decomposition(&ens, &id, &avg).unwrap();
        assert!((t1.finite().unwrap() - chi).abs() < 1e-9);
        assert!(t2.finite().unwrap().abs() < 1e-10);

        // any full-rank reference: term1 - term2 = chi
        let reference = DensityMatrix::from_probabilities(&[0.7, 0.3]).unwrap();
        let (t1, t2) = chi_reference_decomposition(&ens, &id, &reference).unwrap();
        assert!((t1.finite().unwrap() - t2.finite().unwrap() - chi).abs() <= 1e-8);

        // single-state ensemble: term1 = term2, chi = 0
        let single = Ensemble::new(vec![(1.0, plus_state(), 1.0)]).unwrap();
        let (t1, t2) = chi_reference_decomposition(&single, &id, &reference).unwrap();
        assert!((t1.finite().unwrap() - t2.finite().unwrap()).abs() < 1e-10);
    }

    #[test]
    fn reference_decomposition_flags_support_mismatch() {
        let ens = Ensemble::new(vec![
            (0.5, DensityMatrix::basis_state(2, 0), 0.0),
            (0.5, DensityMatrix::basis_state(2, 1), 1.0),
        ])
        .unwrap();
        let id = KrausChannel::identity(2);
        let reference = DensityMatrix::basis_state(2, 0);
        let (t1, _) = chi_reference_decomposition(&ens, &id, &reference).unwrap();
        assert!(t1.is_infinite());
    }

    #[test]
    fn binary_encoding_chi_limits() {
        let id = KrausChannel::identity(2);
        let rho = plus_state();
        let rho0 = DensityMatrix::basis_state(2, 0);
        // beta -> 0: chi -> 0
        let small = binary_encoding_chi(&id, &rho, &rho0, 1.0, 1e-9).unwrap();
        assert!(small < 1e-7);
        // beta = b: single symbol used, chi = 0
        let full = binary_encoding_chi(&id, &rho, &rho0, 1.0, 1.0).unwrap();
        assert!(full.abs() < 1e-12);
        // beta > b is out of domain
        assert!(binary_encoding_chi(&id, &rho, &rho0, 1.0, 1.5).is_err());
    }

    #[test]
    fn capacity_cost_binary_analytic() {
        let id = KrausChannel::identity(2);
        let states = vec![
            (DensityMatrix::basis_state(2, 0), 0.0),
            (DensityMatrix::basis_state(2, 1), 1.0),
        ];
        // unconstrained optimum feasible at beta = 0.5
        let pt = capacity_cost(&states, &id, 0.5).unwrap();
        assert!((pt.capacity - LN_2).abs() < 1e-7);
        // constrained: C = H2(0.1), optimal prior p1 = 0.1
        let pt = capacity_cost(&states, &id, 0.1).unwrap();
        assert!((pt.capacity - 0.325082973391448).abs() < 1e-7);
        assert!((pt.optimal_prior[1] - 0.1).abs() < 1e-6);
        // generous budget reproduces the unconstrained optimum
        let pt = capacity_cost(&states, &id, 50.0).unwrap();
        assert!((pt.capacity - LN_2).abs() < 1e-7);
    }

    #[test]
    fn capacity_cost_infeasible_budget() {
        let id = KrausChannel::identity(2);
        let states = vec![
            (DensityMatrix::basis_state(2, 0), 1.0),
            (DensityMatrix::basis_state(2, 1), 2.0),
        ];
        assert!(matches!(
            capacity_cost(&states, &id, 0.5),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cpuc_support_mismatch_is_infinite() {
        // identity channel, free |0>, Bloch family reaches |1>
        let id = KrausChannel::identity(2);
        let family = ParamStateFamily::bloch_qubit();
        let b = CMatrix::from_fn(2, 2, |i, j| {
            if i == 1 && j == 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let cost = CostFunction::observable(b).unwrap();
        let result = capacity_per_unit_cost(&id, &family, &cost).unwrap();
        assert!(result.value.is_infinite());
        assert!(matches!(
            result.witness,
            CpucWitness::SupportMismatch { .. }
        ));
    }

    #[test]
    fn cpuc_depolarizing_is_exactly_zero() {
        let ch = KrausChannel::completely_depolarizing(2);
        let family = ParamStateFamily::bloch_qubit();
        let b = CMatrix::from_fn(2, 2, |i, j| {
            if i == 1 && j == 1 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let cost = CostFunction::observable(b).unwrap();
        let result = capacity_per_unit_cost(&ch, &family, &cost).unwrap();
        assert_eq!(result.value, ExtendedReal::Finite(0.0));
    }

    #[test]
    fn cpuc_needs_a_free_point() {
        let id = KrausChannel::identity(2);
        let family = ParamStateFamily::new(
            2,
            vec![0.0],
            vec![1.0],
            None,
            std::sync::Arc::new(|_: &[f64]| CMatrix::identity(2, 2) * Complex64::new(0.5, 0.0)),
        )
        .unwrap();
        assert!(matches!(
            capacity_per_unit_cost(&id, &family, &CostFunction::QuadraticParam),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn fisher_information_needs_scalar_families() {
        let fam = ParamStateFamily::bloch_qubit(); // 3 parameters
        assert!(matches!(reqfi(&fam, 0.0), Err(Error::Precondition(_))));
        assert!(matches!(qfi(&fam, 0.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn estimation_bounds_preconditions() {
        let ch = KrausChannel::identity(2);
        let r0 = DensityMatrix::basis_state(2, 0);
        let r1 = DensityMatrix::maximally_mixed(2);
        let fam = ParamStateFamily::binary_mixture(&r0, &r1).unwrap();
        // wrong cost kind
        let cost = CostFunction::Lookup(vec![0.0, 1.0]);
        assert!(matches!(
            estimation_bounds_report(&ch, &fam, &cost, false),
            Err(Error::Precondition(_))
        ));
        // free point away from x = 0
        let shifted = ParamStateFamily::new(
            2,
            vec![0.0],
            vec![1.0],
            Some(vec![0.5]),
            std::sync::Arc::new(|_: &[f64]| {
                CMatrix::identity(2, 2) * Complex64::new(0.5, 0.0)
            }),
        )
        .unwrap();
        assert!(matches!(
            estimation_bounds_report(&ch, &shifted, &CostFunction::QuadraticParam, false),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn reqfi_constant_family_is_zero() {
        let rho = DensityMatrix::maximally_mixed(2);
        let fam = ParamStateFamily::binary_mixture(&rho, &rho).unwrap();
        let j = reqfi(&fam, 0.5).unwrap();
        assert!(j.finite().unwrap().abs() < 1e-9);
        assert!(qfi(&fam, 0.5).unwrap().abs() < 1e-9);
    }

    #[test]
    fn reqfi_diagonal_mixture_crossing() {
        // (1-t) I/2 + t diag(1,0) at t=0: classical Fisher sum over the
        // crossing spectrum gives exactly 1
        let fam = ParamStateFamily::binary_mixture(
            &DensityMatrix::maximally_mixed(2),
            &DensityMatrix::basis_state(2, 0),
        )
        .unwrap();
        let j = reqfi(&fam, 0.0).unwrap().finite().unwrap();
        assert!((j - 1.0).abs() < 1e-8, "J = {j}");
    }

    #[test]
    fn reqfi_matches_finite_difference_relative_entropy() {
        // full-rank family: J ~ 2 D(rho_{t+d} || rho_t)/d^2 as d -> 0
        let mut rng = StdRng::seed_from_u64(31);
        let r0 = random_density(2, &mut rng);
        let r1 = random_density(2, &mut rng);
        let fam = ParamStateFamily::binary_mixture(&r0, &r1).unwrap();
        let t0 = 0.4;
        let j = reqfi(&fam, t0).unwrap().finite().unwrap();
        let mut errs = Vec::new();
        for delta in [1e-2, 1e-3] {
            let a = fam.state_at(&[t0 + delta]).unwrap();
            let b = fam.state_at(&[t0]).unwrap();
            let d = relative_entropy(&a, &b).unwrap().finite().unwrap();
            errs.push((j - 2.0 * d / (delta * delta)).abs());
        }
        assert!(errs[1] < errs[0], "no O(delta) decrease: {errs:?}");
    }

    #[test]
    fn reqfi_infinite_on_support_escape() {
        // pure-state rotation: derivative leaves the support of |0><0|
        let fam = ParamStateFamily::new(
            2,
            vec![-1.0],
            vec![1.0],
            Some(vec![0.0]),
            std::sync::Arc::new(|x: &[f64]| {
                let (c, s) = (x[0].cos(), x[0].sin());
                CMatrix::from_fn(2, 2, |i, j| {
                    let v = [c, s];
                    Complex64::new(v[i] * v[j], 0.0)
                })
            }),
        )
        .unwrap();
        assert!(reqfi(&fam, 0.0).unwrap().is_infinite());
        // QFI of the same pure family is finite: 4(<dψ|dψ> - |<ψ|dψ>|^2) = 4
        let f = qfi(&fam, 0.0).unwrap();
        assert!((f - 4.0).abs() < 1e-6, "F = {f}");
    }

    #[test]
    fn qfi_below_reqfi_on_random_families() {
        let mut rng = StdRng::seed_from_u64(37);
        for _ in 0..10 {
            let r0 = random_density(2, &mut rng);
            let r1 = random_density(2, &mut rng);
            let fam = ParamStateFamily::binary_mixture(&r0, &r1).unwrap();
            let j = reqfi(&fam, 0.3).unwrap().finite().unwrap();
            let f = qfi(&fam, 0.3).unwrap();
            assert!(f <= j + 1e-8, "F = {f} > J = {j}");
        }
    }

    #[test]
    fn estimation_bounds_depolarizing_vacuous() {
        let ch = KrausChannel::completely_depolarizing(2);
        // Bloch great-circle path through the free point, scalar parameter
        let fam = ParamStateFamily::new(
            2,
            vec![-0.8],
            vec![0.8],
            Some(vec![0.0]),
            std::sync::Arc::new(|x: &[f64]| {
                let (c, s) = (x[0].cos(), x[0].sin());
                let mut m = CMatrix::zeros(2, 2);
                m[(0, 0)] = Complex64::new((1.0 + c) / 2.0, 0.0);
                m[(1, 1)] = Complex64::new((1.0 - c) / 2.0, 0.0);
                m[(0, 1)] = Complex64::new(s / 2.0, 0.0);
                m[(1, 0)] = Complex64::new(s / 2.0, 0.0);
                m
            }),
        )
        .unwrap();
        let report =
            estimation_bounds_report(&ch, &fam, &CostFunction::QuadraticParam, true).unwrap();
        assert!(report.j_half.finite().unwrap().abs() < 1e-9);
        assert!(report.f_half.abs() < 1e-9);
        assert!(report.e_min_via_j.is_infinite());
        assert_eq!(report.chain_holds, Some(true));
    }
}
