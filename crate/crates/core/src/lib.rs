//! Langevin-type MCMC samplers built around a Hessian-corrected proposal.
//!
//! The sampler family shares one Metropolis-Hastings loop and differs only in
//! how the Gaussian proposal moments are formed from local derivative
//! information of the target log density:
//!
//! * **RW** — mean offset `0`, covariance `δI` (no derivatives),
//! * **MALA** — mean offset `δv/2`, covariance `δI` (gradient `v`),
//! * **HMALA** — the linear Langevin SDE on a local quadratic model of the
//!   log density is solved exactly, giving mean offset `(δ/2)·φ₁(δH/2)·v`
//!   and covariance `δ·φ₁(δH)` for Hessian `H`, where
//!   `φ₁(M) = (e^M − I)M⁻¹` extended to singular `M` by its power series.
//!
//! The covariance produced this way is positive definite for *every*
//! symmetric `H`, including the indefinite Hessians found at saddle points.
//!
//! ```
//! use hmala::samplers::{run_chain, SamplerConfig, SamplerKind};
//! use hmala::targets::{Gaussian, Point};
//! use hmala::matfun::SymMatrix;
//! use nalgebra::{dmatrix, dvector};
//!
//! let target = Gaussian::new(
//!     Point::new(dvector![0.0, 0.0]).unwrap(),
//!     SymMatrix::new(dmatrix![3.0, 2.0; 2.0, 3.0]).unwrap(),
//! )
//! .unwrap();
//! let config = SamplerConfig::new(SamplerKind::Hmala, 1.0).unwrap();
//! let init = Point::new(dvector![0.0, 0.0]).unwrap();
//! let trace = run_chain(&target, &config, &init, 100, 42).unwrap();
//! // The local quadratic model is exact for a Gaussian target, so every
//! // proposal is accepted.
//! assert!(trace.accepted().iter().all(|&a| a));
//! ```

pub mod diagnostics;
pub mod matfun;
pub mod samplers;
pub mod special;
pub mod targets;

#[cfg(test)]
pub(crate) mod testutil;
