//! # cpuc-core
//!
//! Classical capacity per unit cost for quantum channels.
//!
//! The crate computes information-theoretic figures of merit for classical
//! communication over quantum channels, in nats:
//!
//! - [`capacity`]: mutual information, Holevo information χ (entropy and
//!   relative-entropy forms), the capacity-cost function C(β), the capacity
//!   per unit cost 𝐂 = sup D(Λ[ρ_x]‖Λ[ρ₀])/b[ρ_x] when a zero-cost symbol
//!   exists, and the estimation-theoretic bounds 𝐂 ≥ 𝒥/2 ≥ ℱ/2 built on the
//!   relative-entropy quantum Fisher information (REQFI) and the SLD quantum
//!   Fisher information (QFI).
//! - [`gaussian`]: one-mode Gaussian states and fiducial channels
//!   (transmission/gain η, environment thermal photons Ñ, environment
//!   squeezing ω̃), closed-form relative entropies, capacity per unit cost
//!   per photon, and photon-information-efficiency curves.
//! - [`fock`]: an independent truncated Fock-space construction of Gaussian
//!   states used as a brute-force oracle for every Gaussian closed form.
//! - [`quantum`](density), [`channel`]: dense Hermitian linear algebra,
//!   density-matrix validation, von Neumann and relative entropies with
//!   correct infinite-value semantics, Kraus channels, cost functions, and
//!   parametrized state families.
//!
//! All logarithms are natural. The CLI (`cpuc`) converts to bits on request.

pub mod capacity;
pub mod channel;
pub mod density;
pub mod error;
pub mod extended;
pub mod fock;
pub mod gaussian;
pub mod io;
pub mod linalg;
pub(crate) mod optimize;
#[cfg(test)]
pub(crate) mod testutil;
pub mod tolerances;
pub mod validate;

pub use error::{Error, Result};
pub use extended::ExtendedReal;
