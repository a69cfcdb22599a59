//! Proposal clouds: raw draws from one kernel's proposal density at fixed
//! anchor points, with the Metropolis-Hastings accept flag each draw would
//! have received.

use crate::seeding::mix_seed;
use crate::target_spec::Target;
use crate::CliError;
use hmala::samplers::{
    combine_log_alpha, proposal_logpdf, proposal_moments, SamplerConfig, SamplerKind,
};
use hmala::targets::{LogDensityEval, Point, TargetDensity};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct CloudSettings {
    pub sampler: SamplerKind,
    pub delta: f64,
    pub anchors: Vec<Point>,
    pub n_proposals: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct CloudPoint {
    pub anchor_id: usize,
    pub x: f64,
    pub y: f64,
    pub would_accept: bool,
}

#[derive(Debug, Clone)]
pub struct CloudResult {
    pub points: Vec<CloudPoint>,
    pub anchors: Vec<Point>,
}

impl CloudResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("anchor_id,x,y,would_accept\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{}\n",
                p.anchor_id, p.x, p.y, p.would_accept
            ));
        }
        out
    }
}

/// Draws `n_proposals` proposals per anchor (no chain, no filtering) and
/// tags each with the acceptance decision an MH step would have made,
/// through the same α computation the chain loop uses.
pub fn run_cloud(target: &Target, settings: &CloudSettings) -> Result<CloudResult, CliError> {
    let config = SamplerConfig::new(settings.sampler, settings.delta)?;
    if settings.anchors.is_empty() {
        return Err(CliError::config("need at least one anchor point"));
    }
    if settings.n_proposals == 0 {
        return Err(CliError::config("n-proposals must be at least 1"));
    }

    let mut points = Vec::with_capacity(settings.anchors.len() * settings.n_proposals);
    for (anchor_id, anchor) in settings.anchors.iter().enumerate() {
        let eval = match target.eval(anchor)? {
            LogDensityEval::InSupport(e) => e,
            LogDensityEval::OutOfSupport => {
                return Err(CliError::config(format!(
                    "anchor {anchor_id} at {:?} is outside the target's support",
                    anchor.coords().as_slice()
                )))
            }
        };
        let moments = proposal_moments(&eval, &config).map_err(|e| {
            CliError::runtime(format!("anchor {anchor_id}: could not form proposal moments: {e}"))
        })?;
        let log_q_from_anchor = |to: &Point| moments.logpdf(anchor, to);

        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(
            settings.seed,
            &[0xc10d, settings.delta.to_bits(), anchor_id as u64],
        ));

        for _ in 0..settings.n_proposals {
            let proposal = moments
                .sample(anchor, &mut rng)
                .map_err(|e| CliError::runtime(format!("proposal draw failed: {e}")))?;
            let prop_eval = target.eval(&proposal)?;
            let log_alpha = match prop_eval.as_supported() {
                Some(pe) => combine_log_alpha(
                    eval.value,
                    log_q_from_anchor(&proposal),
                    pe.value,
                    proposal_logpdf(pe, &proposal, anchor, &config),
                ),
                None => f64::NEG_INFINITY,
            };
            let u: f64 = rng.gen();
            points.push(CloudPoint {
                anchor_id,
                x: proposal.coords()[0],
                y: proposal.coords()[1],
                would_accept: u.ln() < log_alpha,
            });
        }
    }

    Ok(CloudResult {
        points,
        anchors: settings.anchors.clone(),
    })
}
