//! Proposal kernels and the shared Metropolis-Hastings chain loop.
//!
//! All three kernels propose `θ* = θ + m + L·z` with `z` standard normal
//! and `L·Lᵀ = S`; they differ only in the moments `(m, S)`:
//!
//! * random walk: `m = 0`, `S = δI`,
//! * MALA: `m = δv/2`, `S = δI`,
//! * HMALA: `m = (δ/2)·φ₁(δH/2)·v`, `S = δ·φ₁(δH)`.
//!
//! The HMALA moments are the time-δ mean and covariance of the linear SDE
//! `dx = ½(Hx + v)dt + dW` started from the current point, i.e. the exact
//! solution of the Langevin dynamics on the local quadratic model of the
//! log density. One spectral decomposition of `H` serves both matrix
//! functions (their arguments `δH/2` and `δH` share eigenvectors). Since
//! `φ₁ > 0` on the real line, `S` is positive definite for indefinite and
//! singular `H` alike.
//!
//! Any failure while forming or factoring moments is folded into a
//! rejected step rather than a crash, so a chain is defined everywhere.

use crate::matfun::{self, CholFactor, MatError, SymMatrix};
use crate::targets::{LogDensityEval, Point, TargetDensity, TargetEval};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("step size delta must be positive and finite, got {0}")]
    InvalidDelta(f64),
    #[error("initial point is outside the target's support")]
    BadInit,
    #[error(transparent)]
    Target(#[from] crate::targets::TargetError),
}

/// Which proposal kernel to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SamplerKind {
    RandomWalk,
    Mala,
    Hmala,
}

impl SamplerKind {
    pub const ALL: [SamplerKind; 3] = [SamplerKind::RandomWalk, SamplerKind::Mala, SamplerKind::Hmala];

    pub fn label(&self) -> &'static str {
        match self {
            SamplerKind::RandomWalk => "rw",
            SamplerKind::Mala => "mala",
            SamplerKind::Hmala => "hmala",
        }
    }
}

impl std::str::FromStr for SamplerKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "rw" | "random-walk" | "randomwalk" => Ok(SamplerKind::RandomWalk),
            "mala" => Ok(SamplerKind::Mala),
            "hmala" => Ok(SamplerKind::Hmala),
            other => Err(format!("unknown sampler {other:?} (expected rw, mala or hmala)")),
        }
    }
}

/// Kernel choice plus the step size δ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    kind: SamplerKind,
    delta: f64,
}

impl SamplerConfig {
    pub fn new(kind: SamplerKind, delta: f64) -> Result<Self, SamplerError> {
        if !delta.is_finite() || delta <= 0.0 {
            return Err(SamplerError::InvalidDelta(delta));
        }
        Ok(SamplerConfig { kind, delta })
    }

    pub fn kind(&self) -> SamplerKind {
        self.kind
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Gaussian proposal moments: mean offset `m`, covariance `S` with its
/// Cholesky factor and log determinant.
#[derive(Debug, Clone)]
pub struct ProposalMoments {
    mean_offset: DVector<f64>,
    covariance: SymMatrix,
    chol: CholFactor,
}

impl ProposalMoments {
    fn new(mean_offset: DVector<f64>, covariance: SymMatrix) -> Result<Self, MatError> {
        if mean_offset.iter().any(|x| !x.is_finite()) {
            return Err(MatError::NonFinite);
        }
        let chol = matfun::spd_factor(&covariance)?;
        Ok(ProposalMoments {
            mean_offset,
            covariance,
            chol,
        })
    }

    pub fn mean_offset(&self) -> &DVector<f64> {
        &self.mean_offset
    }

    pub fn covariance(&self) -> &SymMatrix {
        &self.covariance
    }

    pub fn log_det_covariance(&self) -> f64 {
        self.chol.log_det()
    }

    pub fn chol_lower(&self) -> &DMatrix<f64> {
        self.chol.lower()
    }

    fn dim(&self) -> usize {
        self.mean_offset.len()
    }

    /// The proposal point for a given noise vector: `θ + m + L·z`.
    /// `z = 0` gives the proposal mean.
    pub fn displace(&self, from: &Point, z: &DVector<f64>) -> Result<Point, crate::targets::TargetError> {
        Point::new(from.coords() + &self.mean_offset + self.chol.apply(z))
    }

    /// Draws a proposal `θ* ~ N(θ + m; S)` using the chain's RNG.
    pub fn sample(&self, from: &Point, rng: &mut impl Rng) -> Result<Point, crate::targets::TargetError> {
        let z = DVector::from_fn(self.dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
        self.displace(from, &z)
    }

    /// `log N(to | from + m; S)`.
    pub fn logpdf(&self, from: &Point, to: &Point) -> f64 {
        let resid = to.coords() - from.coords() - &self.mean_offset;
        match self.chol.forward_solve(&resid) {
            Some(w) => {
                -0.5 * self.dim() as f64 * (2.0 * PI).ln()
                    - 0.5 * self.chol.log_det()
                    - 0.5 * w.norm_squared()
            }
            None => f64::NEG_INFINITY,
        }
    }
}

/// HMALA moments `m = (δ/2)·φ₁(δH/2)·v`, `S = δ·φ₁(δH)` from one spectral
/// decomposition of the Hessian.
pub fn hmala_moments(eval: &TargetEval, delta: f64) -> Result<ProposalMoments, MatError> {
    let decomp = matfun::sym_eig(&eval.hessian)?;
    let half = delta / 2.0;
    let phi_half = decomp.map_eigenvalues(|l| matfun::phi1_scalar(half * l))?;
    let phi_full = decomp.map_eigenvalues(|l| matfun::phi1_scalar(delta * l))?;
    let mean_offset = phi_half.as_matrix() * &eval.gradient * half;
    let covariance = phi_full.scale(delta);
    ProposalMoments::new(mean_offset, covariance)
}

/// MALA moments `m = δv/2`, `S = δI` — the first-order-in-δ limit of the
/// HMALA moments.
pub fn mala_moments(eval: &TargetEval, delta: f64) -> Result<ProposalMoments, MatError> {
    let mean_offset = &eval.gradient * (delta / 2.0);
    ProposalMoments::new(mean_offset, SymMatrix::scaled_identity(eval.gradient.len(), delta))
}

/// Random-walk moments `m = 0`, `S = δI`.
pub fn rw_moments(dim: usize, delta: f64) -> Result<ProposalMoments, MatError> {
    ProposalMoments::new(DVector::zeros(dim), SymMatrix::scaled_identity(dim, delta))
}

/// Moments for the configured kernel at an evaluated point.
pub fn proposal_moments(
    eval: &TargetEval,
    config: &SamplerConfig,
) -> Result<ProposalMoments, MatError> {
    match config.kind() {
        SamplerKind::RandomWalk => rw_moments(eval.gradient.len(), config.delta()),
        SamplerKind::Mala => mala_moments(eval, config.delta()),
        SamplerKind::Hmala => hmala_moments(eval, config.delta()),
    }
}

/// Log density of proposing `to` from `from` under the configured kernel;
/// −∞ when the moments cannot be formed.
pub fn proposal_logpdf(
    from_eval: &TargetEval,
    from: &Point,
    to: &Point,
    config: &SamplerConfig,
) -> f64 {
    match proposal_moments(from_eval, config) {
        Ok(m) => m.logpdf(from, to),
        Err(_) => f64::NEG_INFINITY,
    }
}

/// `ln α = min(0, π(to)·q(from|to) / π(from)·q(to|from))` in log space.
/// A reverse density of −∞ (failed moments) forces rejection; everything is
/// kept logarithmic so tail values cannot underflow.
pub fn combine_log_alpha(
    log_pi_from: f64,
    log_q_forward: f64,
    log_pi_to: f64,
    log_q_reverse: f64,
) -> f64 {
    if log_pi_to == f64::NEG_INFINITY || log_q_reverse == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    (log_pi_to + log_q_reverse - log_pi_from - log_q_forward).min(0.0)
}

/// Current position with its cached target evaluation and the chain's RNG.
#[derive(Debug, Clone)]
pub struct ChainState {
    position: Point,
    eval: TargetEval,
    rng: ChaCha8Rng,
}

impl ChainState {
    pub fn position(&self) -> &Point {
        &self.position
    }

    pub fn eval(&self) -> &TargetEval {
        &self.eval
    }
}

/// What one Metropolis-Hastings step did.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub accepted: bool,
    /// Acceptance probability α of the proposed move (0 when no valid
    /// proposal could be formed).
    pub alpha: f64,
    /// The proposed point, when one was drawn.
    pub proposal: Option<Point>,
}

/// Sample trace of one chain: positions after each step plus acceptance
/// bookkeeping. When step `t` was rejected, row `t` equals row `t−1`
/// bit-exactly.
#[derive(Debug, Clone)]
pub struct ChainTrace {
    dim: usize,
    samples: Vec<f64>, // row-major, n_steps × dim
    accepted: Vec<bool>,
    alphas: Vec<f64>,
    proposals: Option<Vec<Option<Point>>>,
}

impl ChainTrace {
    fn with_capacity(dim: usize, n_steps: usize, record_proposals: bool) -> Self {
        ChainTrace {
            dim,
            samples: Vec::with_capacity(n_steps * dim),
            accepted: Vec::with_capacity(n_steps),
            alphas: Vec::with_capacity(n_steps),
            proposals: record_proposals.then(|| Vec::with_capacity(n_steps)),
        }
    }

    fn push(&mut self, position: &Point, outcome: StepOutcome) {
        self.samples.extend(position.coords().iter());
        self.accepted.push(outcome.accepted);
        self.alphas.push(outcome.alpha);
        if let Some(log) = &mut self.proposals {
            log.push(outcome.proposal);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.accepted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accepted.is_empty()
    }

    /// Position after step `t`.
    pub fn row(&self, t: usize) -> &[f64] {
        &self.samples[t * self.dim..(t + 1) * self.dim]
    }

    /// One coordinate of the trace as a contiguous series.
    pub fn coordinate_series(&self, coord: usize) -> Vec<f64> {
        assert!(coord < self.dim);
        self.samples
            .iter()
            .skip(coord)
            .step_by(self.dim)
            .copied()
            .collect()
    }

    pub fn accepted(&self) -> &[bool] {
        &self.accepted
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn proposals(&self) -> Option<&[Option<Point>]> {
        self.proposals.as_deref()
    }

    /// The trace with the first `skip` steps discarded.
    pub fn tail(&self, skip: usize) -> ChainTrace {
        let skip = skip.min(self.len());
        ChainTrace {
            dim: self.dim,
            samples: self.samples[skip * self.dim..].to_vec(),
            accepted: self.accepted[skip..].to_vec(),
            alphas: self.alphas[skip..].to_vec(),
            proposals: self.proposals.as_ref().map(|p| p[skip..].to_vec()),
        }
    }
}

/// A single Metropolis-Hastings chain over a target.
pub struct Chain<'a, T: TargetDensity + ?Sized> {
    target: &'a T,
    config: SamplerConfig,
    state: ChainState,
}

impl<'a, T: TargetDensity + ?Sized> Chain<'a, T> {
    /// Starts a chain at `init`, which must be in the target's support.
    pub fn new(
        target: &'a T,
        config: SamplerConfig,
        init: &Point,
        seed: u64,
    ) -> Result<Self, SamplerError> {
        let eval = match target.eval(init)? {
            LogDensityEval::InSupport(e) => e,
            LogDensityEval::OutOfSupport => return Err(SamplerError::BadInit),
        };
        Ok(Chain {
            target,
            config,
            state: ChainState {
                position: init.clone(),
                eval,
                rng: ChaCha8Rng::seed_from_u64(seed),
            },
        })
    }

    pub fn state(&self) -> &ChainState {
        &self.state
    }

    /// One Metropolis-Hastings step.
    ///
    /// The acceptance probability is computed in log space,
    /// `ln α = min(0, l(θ*) + ln q(θ|θ*) − l(θ) + ln q(θ*|θ))`; proposals
    /// that land outside the support, or whose forward or reverse moments
    /// cannot be formed, are rejected with α = 0. The evaluation made at
    /// the proposal for the reverse kernel is reused as the new state's
    /// cache on acceptance.
    pub fn step(&mut self) -> StepOutcome {
        let reject = |proposal: Option<Point>| StepOutcome {
            accepted: false,
            alpha: 0.0,
            proposal,
        };

        let forward = match proposal_moments(&self.state.eval, &self.config) {
            Ok(m) => m,
            Err(_) => return reject(None),
        };
        let proposal = match forward.sample(&self.state.position, &mut self.state.rng) {
            Ok(p) => p,
            Err(_) => return reject(None),
        };

        let prop_eval = match self.target.eval(&proposal) {
            Ok(LogDensityEval::InSupport(e)) => e,
            Ok(LogDensityEval::OutOfSupport) | Err(_) => return reject(Some(proposal)),
        };

        let log_q_forward = forward.logpdf(&self.state.position, &proposal);
        let log_q_reverse = proposal_logpdf(&prop_eval, &proposal, &self.state.position, &self.config);
        let log_alpha = combine_log_alpha(
            self.state.eval.value,
            log_q_forward,
            prop_eval.value,
            log_q_reverse,
        );

        let u: f64 = self.state.rng.gen();
        let accepted = u.ln() < log_alpha;
        if accepted {
            self.state.position = proposal.clone();
            self.state.eval = prop_eval;
        }
        StepOutcome {
            accepted,
            alpha: log_alpha.exp(),
            proposal: Some(proposal),
        }
    }

    /// Runs `n_steps` steps, recording the position after each one.
    pub fn run(&mut self, n_steps: usize) -> ChainTrace {
        self.run_impl(n_steps, false)
    }

    /// Like [`Chain::run`] but also records each step's proposed point.
    pub fn run_logged(&mut self, n_steps: usize) -> ChainTrace {
        self.run_impl(n_steps, true)
    }

    fn run_impl(&mut self, n_steps: usize, log_proposals: bool) -> ChainTrace {
        let mut trace = ChainTrace::with_capacity(self.target.dim(), n_steps, log_proposals);
        for _ in 0..n_steps {
            let outcome = self.step();
            trace.push(&self.state.position, outcome);
        }
        trace
    }
}

/// Runs a fresh chain for `n_steps` from `init` under a fixed seed.
pub fn run_chain<T: TargetDensity + ?Sized>(
    target: &T,
    config: &SamplerConfig,
    init: &Point,
    n_steps: usize,
    seed: u64,
) -> Result<ChainTrace, SamplerError> {
    Ok(Chain::new(target, *config, init, seed)?.run(n_steps))
}
