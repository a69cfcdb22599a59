//! Effective sample size from chain autocorrelations, plus per-chain
//! summary reporting.
//!
//! `ESS = N / (1 + 2 Σ_{k=1}^{K} ρ_k)` where the truncation lag `K` comes
//! from Geyer-style initial positive pair sums: lags are included while
//! `ρ_{2t} + ρ_{2t+1}` stays positive, capped at `N/50`. The estimate is
//! clamped to `(0, N]`.

use crate::samplers::ChainTrace;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagError {
    #[error("series is constant; autocorrelation is undefined")]
    ZeroVariance,
    #[error("series too short (need at least 10 samples, got {0})")]
    TooShort(usize),
    #[error("series contains non-finite values")]
    NonFinite,
}

const MIN_SERIES_LEN: usize = 10;

/// Truncation-lag cap as a fraction of the series length.
const MAX_LAG_DIVISOR: usize = 50;

fn check_series(series: &[f64]) -> Result<(), DiagError> {
    if series.len() < MIN_SERIES_LEN {
        return Err(DiagError::TooShort(series.len()));
    }
    if series.iter().any(|x| !x.is_finite()) {
        return Err(DiagError::NonFinite);
    }
    if series.windows(2).all(|w| w[0] == w[1]) {
        return Err(DiagError::ZeroVariance);
    }
    Ok(())
}

fn mean(series: &[f64]) -> f64 {
    series.iter().sum::<f64>() / series.len() as f64
}

/// Autocovariance at one lag with the biased (divide-by-N) convention.
fn autocovariance(series: &[f64], center: f64, lag: usize) -> f64 {
    let n = series.len();
    let mut acc = 0.0;
    for t in 0..n - lag {
        acc += (series[t] - center) * (series[t + lag] - center);
    }
    acc / n as f64
}

/// Autocorrelations `ρ_0..ρ_max_lag` with the standard biased estimator:
/// covariance sums divided by N and normalized by the lag-0 variance.
pub fn autocorrelation(series: &[f64], max_lag: usize) -> Result<Vec<f64>, DiagError> {
    check_series(series)?;
    let center = mean(series);
    let var = autocovariance(series, center, 0);
    if var <= 0.0 {
        return Err(DiagError::ZeroVariance);
    }
    let max_lag = max_lag.min(series.len() - 1);
    let mut rho = Vec::with_capacity(max_lag + 1);
    rho.push(1.0);
    for k in 1..=max_lag {
        rho.push(autocovariance(series, center, k) / var);
    }
    Ok(rho)
}

/// Effective sample size of one scalar series, together with the lag at
/// which the autocorrelation sum was truncated.
pub fn ess_with_lag(series: &[f64]) -> Result<(f64, usize), DiagError> {
    check_series(series)?;
    let n = series.len();
    let center = mean(series);
    let var = autocovariance(series, center, 0);
    if var <= 0.0 {
        return Err(DiagError::ZeroVariance);
    }
    let cap = (n / MAX_LAG_DIVISOR).max(1).min(n - 1);

    // include pairs (ρ_{2t}, ρ_{2t+1}) while their sum stays positive;
    // ρ_0 participates in the first pair but not in the ESS sum
    let mut sum = 0.0;
    let mut trunc = 0usize;
    let mut t = 0usize;
    loop {
        let k_even = 2 * t;
        let k_odd = 2 * t + 1;
        if k_odd > cap {
            break;
        }
        let rho_even = if k_even == 0 {
            1.0
        } else {
            autocovariance(series, center, k_even) / var
        };
        let rho_odd = autocovariance(series, center, k_odd) / var;
        if rho_even + rho_odd <= 0.0 {
            break;
        }
        if k_even > 0 {
            sum += rho_even;
        }
        sum += rho_odd;
        trunc = k_odd;
        t += 1;
    }

    // a non-positive denominator is an estimator artifact of antithetic
    // chains; the clamp keeps the result in (0, N]
    let denom = 1.0 + 2.0 * sum;
    let ess = if denom <= 0.0 {
        n as f64
    } else {
        (n as f64 / denom).min(n as f64)
    };
    Ok((ess, trunc))
}

/// Effective sample size of one scalar series.
pub fn ess(series: &[f64]) -> Result<f64, DiagError> {
    ess_with_lag(series).map(|(e, _)| e)
}

/// Per-coordinate ESS for a chain trace, with the minimum across
/// coordinates as the headline number.
#[derive(Debug, Clone, PartialEq)]
pub struct EssReport {
    pub per_coordinate_ess: Vec<f64>,
    pub min_ess: f64,
    pub acceptance_rate: f64,
    pub autocorr_truncation_lag: Vec<usize>,
}

/// Summarizes a trace. A coordinate whose series never moved (for example
/// a chain that rejected every step) reports the defined minimum ESS of 1.
pub fn ess_report(trace: &ChainTrace) -> Result<EssReport, DiagError> {
    if trace.is_empty() {
        return Err(DiagError::TooShort(0));
    }
    let accepted = trace.accepted();
    let acceptance_rate = accepted.iter().filter(|&&a| a).count() as f64 / accepted.len() as f64;

    let mut per_coordinate_ess = Vec::with_capacity(trace.dim());
    let mut autocorr_truncation_lag = Vec::with_capacity(trace.dim());
    for coord in 0..trace.dim() {
        let series = trace.coordinate_series(coord);
        match ess_with_lag(&series) {
            Ok((e, lag)) => {
                per_coordinate_ess.push(e);
                autocorr_truncation_lag.push(lag);
            }
            Err(DiagError::ZeroVariance) => {
                per_coordinate_ess.push(1.0);
                autocorr_truncation_lag.push(0);
            }
            Err(e) => return Err(e),
        }
    }
    let min_ess = per_coordinate_ess.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    Ok(EssReport {
        per_coordinate_ess,
        min_ess,
        acceptance_rate,
        autocorr_truncation_lag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::{run_chain, SamplerConfig, SamplerKind};
    use crate::targets::{Gaussian, Point};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn iid_normal(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal))
            .collect()
    }

    fn ar1(phi: f64, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = 0.0;
        (0..n)
            .map(|_| {
                let z: f64 = rng.sample(rand_distr::StandardNormal);
                x = phi * x + z;
                x
            })
            .collect()
    }

    #[test]
    fn autocorrelation_of_iid_noise_is_small() {
        let n = 100_000;
        let series = iid_normal(n, 1);
        let rho = autocorrelation(&series, 20).unwrap();
        assert_eq!(rho[0], 1.0);
        let bound = 4.0 / (n as f64).sqrt();
        for k in 1..=20 {
            assert!(rho[k].abs() <= bound, "ρ_{k} = {} exceeds {bound}", rho[k]);
        }
    }

    #[test]
    fn autocorrelation_of_alternating_series() {
        let n = 10_000;
        let series: Vec<f64> = (0..n).map(|t| if t % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let rho = autocorrelation(&series, 2).unwrap();
        assert!((rho[1] + 1.0).abs() < 2.0 / n as f64);
    }

    #[test]
    fn autocorrelation_matches_ar1_theory() {
        // Bartlett's large-N standard error for the ρ̂_k of an AR(1)
        let n = 100_000;
        let phi = 0.9f64;
        let series = ar1(phi, n, 2);
        let rho = autocorrelation(&series, 10).unwrap();
        for k in 1..=10usize {
            let want = phi.powi(k as i32);
            let mut var = 0.0;
            // Bartlett sum truncated where terms become negligible
            for i in 1..2000usize {
                let r = |j: i64| phi.powi(j.unsigned_abs() as i32);
                let term = r(i as i64 + k as i64) + r(i as i64 - k as i64)
                    - 2.0 * want * r(i as i64);
                var += term * term;
            }
            let se = (var / n as f64).sqrt();
            assert!(
                (rho[k] - want).abs() < 3.0 * se.max(1e-3),
                "ρ_{k} = {} vs {want} (se {se})",
                rho[k]
            );
        }
    }

    #[test]
    fn autocorrelation_errors() {
        assert!(matches!(
            autocorrelation(&[1.0; 5], 2),
            Err(DiagError::TooShort(5))
        ));
        assert!(matches!(
            autocorrelation(&[2.5; 100], 2),
            Err(DiagError::ZeroVariance)
        ));
        let mut bad = iid_normal(50, 3);
        bad[7] = f64::NAN;
        assert!(matches!(autocorrelation(&bad, 2), Err(DiagError::NonFinite)));
    }

    #[test]
    fn ess_of_iid_series_is_near_n() {
        let n = 10_000;
        let series = iid_normal(n, 4);
        let e = ess(&series).unwrap();
        assert!((e - n as f64).abs() / (n as f64) < 0.10, "ESS = {e}");
    }

    #[test]
    fn ess_of_ar1_matches_closed_form() {
        // ESS → N(1−φ)/(1+φ)
        let n = 100_000;
        for (phi, seed) in [(0.5f64, 5u64), (0.3, 6), (0.9, 7)] {
            let series = ar1(phi, n, seed);
            let want = n as f64 * (1.0 - phi) / (1.0 + phi);
            let e = ess(&series).unwrap();
            assert!(
                (e - want).abs() / want < 0.10,
                "φ = {phi}: ESS {e} vs {want}"
            );
        }
    }

    #[test]
    fn ess_of_duplicated_series_divides_by_multiplicity() {
        let n = 100_000;
        let m = 4;
        let base = iid_normal(n / m, 8);
        let series: Vec<f64> = base.iter().flat_map(|&x| std::iter::repeat(x).take(m)).collect();
        let want = (n / m) as f64;
        let e = ess(&series).unwrap();
        assert!((e - want).abs() / want < 0.15, "ESS {e} vs {want}");
    }

    #[test]
    fn ess_never_exceeds_n_and_is_affine_invariant() {
        let series = ar1(0.7, 5_000, 9);
        let e = ess(&series).unwrap();
        assert!(e <= 5_000.0 && e > 0.0);
        let scaled: Vec<f64> = series.iter().map(|x| -3.5 * x + 11.0).collect();
        let e2 = ess(&scaled).unwrap();
        assert!((e - e2).abs() / e < 1e-10);
    }

    #[test]
    fn ess_of_subsampled_chain_scales() {
        let n = 200_000;
        // weakly correlated chain: thinning by m discards information
        // proportionally, so ESS(thinned) × m ≈ ESS(full)
        let m = 4;
        let series = ar1(0.05, n, 10);
        let sub: Vec<f64> = series.iter().step_by(m).copied().collect();
        let full = ess(&series).unwrap();
        let thinned = ess(&sub).unwrap();
        assert!(
            (thinned * m as f64 - full).abs() / full < 0.20,
            "{thinned} × {m} vs {full}"
        );

        // strongly correlated chain with m well below the correlation
        // time: thinning discards almost no information, ESS is preserved
        let m = 5;
        let series = ar1(0.95, n, 11);
        let sub: Vec<f64> = series.iter().step_by(m).copied().collect();
        let full = ess(&series).unwrap();
        let thinned = ess(&sub).unwrap();
        assert!(
            (thinned - full).abs() / full < 0.20,
            "thinned {thinned} vs full {full}"
        );
    }

    #[test]
    fn ess_report_on_degenerate_trace() {
        // a chain pinned against the support boundary rejects everything
        let data = crate::targets::NegBinData::new(vec![1, 2]).unwrap();
        let target = crate::targets::NegBinLikelihood::new(data);
        let config = SamplerConfig::new(SamplerKind::RandomWalk, 1e6).unwrap();
        let init = Point::from_slice(&[1.0, 0.5]).unwrap();
        let trace = run_chain(&target, &config, &init, 50, 11).unwrap();
        if trace.accepted().iter().any(|&a| a) {
            // with δ = 10⁶ this should not happen; make the failure loud
            panic!("expected a fully rejecting chain");
        }
        let report = ess_report(&trace).unwrap();
        assert_eq!(report.acceptance_rate, 0.0);
        assert_eq!(report.per_coordinate_ess, vec![1.0, 1.0]);
        assert_eq!(report.min_ess, 1.0);
    }

    #[test]
    fn ess_report_sanity_on_rw_chain() {
        let target = Gaussian::standard(1);
        let config = SamplerConfig::new(SamplerKind::RandomWalk, 5.0).unwrap();
        let init = Point::from_slice(&[0.0]).unwrap();
        let trace = run_chain(&target, &config, &init, 10_000, 12).unwrap();
        let report = ess_report(&trace).unwrap();
        assert!(report.min_ess > 10.0 && report.min_ess < 10_000.0);
        assert!(report.acceptance_rate > 0.0 && report.acceptance_rate < 1.0);
    }

    #[test]
    fn ess_report_equal_series_equal_ess() {
        // duplicate one coordinate into two: reports must match exactly
        let target = Gaussian::standard(1);
        let config = SamplerConfig::new(SamplerKind::RandomWalk, 2.0).unwrap();
        let init = Point::from_slice(&[0.0]).unwrap();
        let trace = run_chain(&target, &config, &init, 2_000, 13).unwrap();
        let series = trace.coordinate_series(0);
        let (e, _) = ess_with_lag(&series).unwrap();
        let report = ess_report(&trace).unwrap();
        assert_eq!(report.per_coordinate_ess[0], e);
        assert_eq!(report.min_ess, e);
        // determinism of the report itself
        assert_eq!(report, ess_report(&trace).unwrap());
    }
}
