//! The ESS-versus-step-size sweep: many seeded chains per (sampler, δ)
//! cell, aggregated into mean and quartile bands of per-chain min-ESS.

use crate::output::quantile_sorted;
use crate::seeding::chain_seed;
use crate::target_spec::Target;
use crate::CliError;
use hmala::diagnostics::{ess_report, EssReport};
use hmala::samplers::{run_chain, SamplerConfig, SamplerKind};
use hmala::targets::Point;
use rayon::prelude::*;

/// Default grids: 20 log-spaced step sizes spanning two decades around the
/// value each sampler performs best at on the count target.
pub fn default_grid(kind: SamplerKind) -> Vec<f64> {
    let center: f64 = match kind {
        SamplerKind::RandomWalk => 0.6,
        SamplerKind::Mala => 0.006,
        SamplerKind::Hmala => 0.5,
    };
    let (ls, le) = ((center / 10.0).ln(), (center * 10.0).ln());
    (0..20)
        .map(|i| (ls + (le - ls) * i as f64 / 19.0).exp())
        .collect()
}

#[derive(Debug, Clone)]
pub struct SweepSettings {
    /// (sampler, step-size grid) pairs, in output order.
    pub grids: Vec<(SamplerKind, Vec<f64>)>,
    pub n_chains: usize,
    pub chain_length: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub init: Point,
}

impl SweepSettings {
    fn validate(&self) -> Result<(), CliError> {
        if self.grids.is_empty() || self.grids.iter().any(|(_, g)| g.is_empty()) {
            return Err(CliError::config("sweep needs a nonempty step-size grid"));
        }
        if self.n_chains == 0 {
            return Err(CliError::config("n-chains must be at least 1"));
        }
        if self.chain_length <= self.burn_in {
            return Err(CliError::config(format!(
                "chain-length ({}) must exceed burn-in ({})",
                self.chain_length, self.burn_in
            )));
        }
        if self.chain_length - self.burn_in < 10 {
            return Err(CliError::config(
                "need at least 10 post-burn-in steps to estimate ESS",
            ));
        }
        Ok(())
    }
}

/// Aggregated results for one (sampler, δ) cell.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub sampler: SamplerKind,
    pub delta: f64,
    pub ess_mean: f64,
    pub ess_p25: f64,
    pub ess_p75: f64,
    pub accept_mean: f64,
    pub n_chains: usize,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Chains that never moved (acceptance 0, ESS pinned at 1); reported,
    /// not fatal.
    pub degenerate_chains: usize,
}

impl SweepResult {
    /// The row with the highest mean min-ESS for one sampler.
    pub fn peak(&self, kind: SamplerKind) -> Option<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.sampler == kind)
            .max_by(|a, b| a.ess_mean.total_cmp(&b.ess_mean))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("sampler,delta,ess_mean,ess_p25,ess_p75,accept_mean\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.sampler.label(),
                r.delta,
                r.ess_mean,
                r.ess_p25,
                r.ess_p75,
                r.accept_mean
            ));
        }
        out
    }
}

/// Runs every chain of the sweep across the worker pool. Result order is
/// canonical (sampler, δ, chain index) regardless of scheduling.
pub fn run_sweep(
    target: &Target,
    settings: &SweepSettings,
    workers: Option<usize>,
) -> Result<SweepResult, CliError> {
    settings.validate()?;

    let mut cells: Vec<(SamplerKind, f64)> = Vec::new();
    for (kind, grid) in &settings.grids {
        for &delta in grid {
            SamplerConfig::new(*kind, delta)?;
            cells.push((*kind, delta));
        }
    }

    let jobs: Vec<(usize, SamplerKind, f64, u64)> = cells
        .iter()
        .enumerate()
        .flat_map(|(cell_idx, &(kind, delta))| {
            (0..settings.n_chains as u64).map(move |i| (cell_idx, kind, delta, i))
        })
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0)) // 0 = rayon default
        .build()
        .map_err(|e| CliError::runtime(format!("could not build worker pool: {e}")))?;

    let reports: Vec<Result<EssReport, CliError>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(_, kind, delta, chain_idx)| {
                let config = SamplerConfig::new(kind, delta)?;
                let seed = chain_seed(settings.seed, kind, delta, chain_idx);
                let trace = run_chain(target, &config, &settings.init, settings.chain_length, seed)?;
                ess_report(&trace.tail(settings.burn_in))
                    .map_err(|e| CliError::runtime(format!("ESS report failed: {e}")))
            })
            .collect()
    });

    let mut per_cell: Vec<Vec<EssReport>> = vec![Vec::new(); cells.len()];
    for (job, report) in jobs.iter().zip(reports) {
        per_cell[job.0].push(report?);
    }

    let mut degenerate_chains = 0usize;
    let rows = cells
        .iter()
        .zip(&per_cell)
        .map(|(&(sampler, delta), reports)| {
            degenerate_chains += reports.iter().filter(|r| r.acceptance_rate == 0.0).count();
            let mut min_ess: Vec<f64> = reports.iter().map(|r| r.min_ess).collect();
            min_ess.sort_by(f64::total_cmp);
            let n = reports.len();
            SweepRow {
                sampler,
                delta,
                ess_mean: min_ess.iter().sum::<f64>() / n as f64,
                ess_p25: quantile_sorted(&min_ess, 0.25),
                ess_p75: quantile_sorted(&min_ess, 0.75),
                accept_mean: reports.iter().map(|r| r.acceptance_rate).sum::<f64>() / n as f64,
                n_chains: n,
            }
        })
        .collect();

    Ok(SweepResult {
        rows,
        degenerate_chains,
    })
}
