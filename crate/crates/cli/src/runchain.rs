//! Single-chain runs with a full trace file and a posterior summary.

use crate::target_spec::Target;
use crate::CliError;
use hmala::diagnostics::ess_report;
use hmala::samplers::{run_chain, ChainTrace, SamplerConfig, SamplerKind};
use hmala::targets::Point;

#[derive(Debug, Clone)]
pub struct RunChainSettings {
    pub sampler: SamplerKind,
    pub delta: f64,
    pub chain_length: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub init: Point,
}

pub struct RunChainResult {
    pub trace: ChainTrace,
    pub summary: String,
}

/// Trace CSV: step index, coordinates, accepted flag, acceptance
/// probability.
pub fn trace_to_csv(trace: &ChainTrace, coord_names: [&str; 2]) -> String {
    let mut out = format!("step,{},{},accepted,alpha\n", coord_names[0], coord_names[1]);
    for t in 0..trace.len() {
        let row = trace.row(t);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            t,
            row[0],
            row[1],
            trace.accepted()[t],
            trace.alphas()[t]
        ));
    }
    out
}

pub fn run(target: &Target, settings: &RunChainSettings) -> Result<RunChainResult, CliError> {
    if settings.burn_in > settings.chain_length {
        return Err(CliError::config(format!(
            "burn-in ({}) exceeds chain-length ({})",
            settings.burn_in, settings.chain_length
        )));
    }
    let config = SamplerConfig::new(settings.sampler, settings.delta)?;
    let trace = run_chain(
        target,
        &config,
        &settings.init,
        settings.chain_length,
        settings.seed,
    )?;

    let names = target.coord_names();
    let mut summary = String::new();
    summary.push_str(&format!(
        "target: {}  sampler: {}  delta: {}  steps: {}  burn-in: {}  seed: {}\n",
        target.label(),
        settings.sampler.label(),
        settings.delta,
        settings.chain_length,
        settings.burn_in,
        settings.seed
    ));

    let accepted = trace.accepted().iter().filter(|&&a| a).count();
    let rate = if trace.is_empty() {
        0.0
    } else {
        accepted as f64 / trace.len() as f64
    };
    summary.push_str(&format!("acceptance_rate: {rate:.6}\n"));

    let kept = trace.tail(settings.burn_in);
    if kept.is_empty() {
        summary.push_str("warning: burn-in consumes the whole chain; no posterior summary\n");
    } else {
        match ess_report(&kept) {
            Ok(report) => {
                for (i, name) in names.iter().enumerate() {
                    summary.push_str(&format!(
                        "ess_{name}: {:.2} (autocorrelation truncated at lag {})\n",
                        report.per_coordinate_ess[i], report.autocorr_truncation_lag[i]
                    ));
                }
                summary.push_str(&format!("min_ess: {:.2}\n", report.min_ess));
            }
            Err(e) => summary.push_str(&format!("warning: no ESS estimate ({e})\n")),
        }
        for (i, name) in names.iter().enumerate() {
            let series = kept.coordinate_series(i);
            let n = series.len() as f64;
            let mean = series.iter().sum::<f64>() / n;
            let var = series.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
                / (n - 1.0).max(1.0);
            summary.push_str(&format!(
                "posterior_{name}: mean {mean:.6} sd {:.6}\n",
                var.sqrt()
            ));
        }
    }

    Ok(RunChainResult { trace, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConfigMap;
    use crate::target_spec::{build_target, TargetKind};
    use std::path::Path;

    fn gaussian_target() -> Target {
        build_target(
            TargetKind::Gaussian,
            &ConfigMap::default(),
            Path::new("/nonexistent"),
            None,
            None,
            None,
            None,
        )
        .unwrap()
    }

    #[test]
    fn hmala_on_gaussian_reports_unit_acceptance() {
        let target = gaussian_target();
        let settings = RunChainSettings {
            sampler: SamplerKind::Hmala,
            delta: 1.0,
            chain_length: 500,
            burn_in: 50,
            seed: 3,
            init: target.default_init(),
        };
        let result = run(&target, &settings).unwrap();
        assert!(result.summary.contains("acceptance_rate: 1.000000"));
        assert!(result.summary.contains("posterior_x:"));
        let csv = trace_to_csv(&result.trace, target.coord_names());
        assert!(csv.starts_with("step,x,y,accepted,alpha\n"));
        assert_eq!(csv.lines().count(), 501);
    }

    #[test]
    fn full_burn_in_warns_and_skips_summary() {
        let target = gaussian_target();
        let settings = RunChainSettings {
            sampler: SamplerKind::RandomWalk,
            delta: 1.0,
            chain_length: 100,
            burn_in: 100,
            seed: 3,
            init: target.default_init(),
        };
        let result = run(&target, &settings).unwrap();
        assert!(result.summary.contains("warning: burn-in consumes the whole chain"));
        assert!(!result.summary.contains("posterior_x"));
    }
}
