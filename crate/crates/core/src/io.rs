//! File formats and number formatting for the CLI.
//!
//! Complex numbers serialize as two-element arrays `[re, im]`; matrices as
//! row-major arrays of such pairs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{CostFunction, KrausChannel, ParamStateFamily};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gaussian::FiducialChannel;
use crate::linalg::CMatrix;
use crate::{capacity::Ensemble, fock::TruncationConfig};

/// Format with 9 significant digits, '.' decimal separator, no grouping.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..=12).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.8e}")
    }
}

fn complex_pairs(m: &CMatrix) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push([m[(i, j)].re, m[(i, j)].im]);
        }
    }
    out
}

fn matrix_from_pairs(rows: usize, cols: usize, data: &[[f64; 2]]) -> Result<CMatrix> {
    if data.len() != rows * cols {
        return Err(Error::Parse(format!(
            "matrix needs {} entries, got {}",
            rows * cols,
            data.len()
        )));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        let [re, im] = data[i * cols + j];
        Complex64::new(re, im)
    }))
}

/// `{"dim_in": ..., "dim_out": ..., "kraus": [matrix, ...]}`
#[derive(Debug, Serialize, Deserialize)]
pub struct KrausChannelFile {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<Vec<[f64; 2]>>,
}

impl KrausChannelFile {
    pub fn to_channel(&self) -> Result<KrausChannel> {
        let ops = self
            .kraus
            .iter()
            .map(|k| matrix_from_pairs(self.dim_out, self.dim_in, k))
            .collect::<Result<Vec<_>>>()?;
        KrausChannel::new(ops)
    }

    pub fn from_channel(ch: &KrausChannel) -> Self {
        Self {
            dim_in: ch.dim_in(),
            dim_out: ch.dim_out(),
            kraus: ch.kraus_ops().iter().map(complex_pairs).collect(),
        }
    }
}

/// `{"dim": ..., "symbols": [{"prior": p, "cost": b, "state": matrix}]}`
#[derive(Debug, Serialize, Deserialize)]
pub struct EnsembleFile {
    pub dim: usize,
    pub symbols: Vec<EnsembleSymbolFile>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EnsembleSymbolFile {
    pub prior: f64,
    pub cost: f64,
    pub state: Vec<[f64; 2]>,
}

impl EnsembleFile {
    pub fn to_ensemble(&self) -> Result<Ensemble> {
        let symbols = self
            .symbols
            .iter()
            .map(|s| {
                let state = DensityMatrix::new(matrix_from_pairs(self.dim, self.dim, &s.state)?)?;
                Ok((s.prior, state, s.cost))
            })
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(symbols)
    }
}

/// `{"eta": ..., "n_tilde": ..., "omega_tilde": ...}`
#[derive(Debug, Serialize, Deserialize)]
pub struct GaussianChannelFile {
    pub eta: f64,
    pub n_tilde: f64,
    pub omega_tilde: f64,
}

impl GaussianChannelFile {
    pub fn to_channel(&self) -> Result<FiducialChannel> {
        FiducialChannel::new(self.eta, self.n_tilde, self.omega_tilde)
    }
}

/// Family descriptions accepted by `finite-cpuc` and `bounds`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyFile {
    /// Qubit Bloch ball, free point |0⟩⟨0|.
    Bloch,
    /// x ↦ |x⟩⟨x| (real coherent displacement) in truncated Fock space.
    DisplacementReal {
        cutoff: usize,
        half_width: f64,
    },
    /// x ↦ D(scale·x) ρ_th D†(scale·x) in truncated Fock space.
    DisplacedThermal {
        thermal_photons: f64,
        amplitude_scale: f64,
        cutoff: usize,
        half_width: f64,
    },
    /// θ ↦ (1−θ)ρ₀ + θρ₁.
    BinaryMixture {
        dim: usize,
        state0: Vec<[f64; 2]>,
        state1: Vec<[f64; 2]>,
    },
}

impl FamilyFile {
    pub fn to_family(&self) -> Result<ParamStateFamily> {
        match self {
            FamilyFile::Bloch => Ok(ParamStateFamily::bloch_qubit()),
            FamilyFile::DisplacementReal { cutoff, half_width } => {
                crate::fock::displacement_real_family(
                    &TruncationConfig::with_cutoff(*cutoff)?,
                    *half_width,
                )
            }
            FamilyFile::DisplacedThermal {
                thermal_photons,
                amplitude_scale,
                cutoff,
                half_width,
            } => crate::fock::displaced_thermal_family(
                *thermal_photons,
                *amplitude_scale,
                &TruncationConfig::with_cutoff(*cutoff)?,
                *half_width,
            ),
            FamilyFile::BinaryMixture { dim, state0, state1 } => {
                let r0 = DensityMatrix::new(matrix_from_pairs(*dim, *dim, state0)?)?;
                let r1 = DensityMatrix::new(matrix_from_pairs(*dim, *dim, state1)?)?;
                ParamStateFamily::binary_mixture(&r0, &r1)
            }
        }
    }
}

/// Cost descriptions accepted by `finite-cpuc`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CostFile {
    Quadratic,
    Observable { dim: usize, matrix: Vec<[f64; 2]> },
    Lookup { costs: Vec<f64> },
}

impl CostFile {
    pub fn to_cost(&self) -> Result<CostFunction> {
        match self {
            CostFile::Quadratic => Ok(CostFunction::QuadraticParam),
            CostFile::Observable { dim, matrix } => {
                CostFunction::observable(matrix_from_pairs(*dim, *dim, matrix)?)
            }
            CostFile::Lookup { costs } => Ok(CostFunction::Lookup(costs.clone())),
        }
    }
}

/// Parse JSON into a typed file model.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
