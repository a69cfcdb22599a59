//! Target construction from command-line/config settings, with the
//! per-target experiment defaults.

use crate::config::{parse_pair, ConfigMap};
use crate::CliError;
use hmala::matfun::SymMatrix;
use hmala::targets::{
    Gaussian, GaussMixture, LogDensityEval, NegBinData, NegBinLikelihood, Point, TargetDensity,
};
use nalgebra::{DMatrix, DVector};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    NegBin,
    Mixture,
    Gaussian,
}

impl std::str::FromStr for TargetKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "negbin" | "negative-binomial" => Ok(TargetKind::NegBin),
            "mixture" | "gauss-mixture" => Ok(TargetKind::Mixture),
            "gaussian" | "normal" => Ok(TargetKind::Gaussian),
            other => Err(format!(
                "unknown target {other:?} (expected negbin, mixture or gaussian)"
            )),
        }
    }
}

impl TargetKind {
    pub fn label(&self) -> &'static str {
        match self {
            TargetKind::NegBin => "negbin",
            TargetKind::Mixture => "mixture",
            TargetKind::Gaussian => "gaussian",
        }
    }
}

/// A constructed target with its experiment defaults.
pub enum Target {
    NegBin(NegBinLikelihood),
    Mixture(GaussMixture),
    Gaussian(Gaussian),
}

impl TargetDensity for Target {
    fn dim(&self) -> usize {
        match self {
            Target::NegBin(t) => t.dim(),
            Target::Mixture(t) => t.dim(),
            Target::Gaussian(t) => t.dim(),
        }
    }

    fn eval(&self, theta: &Point) -> Result<LogDensityEval, hmala::targets::TargetError> {
        match self {
            Target::NegBin(t) => t.eval(theta),
            Target::Mixture(t) => t.eval(theta),
            Target::Gaussian(t) => t.eval(theta),
        }
    }
}

impl Target {
    pub fn kind(&self) -> TargetKind {
        match self {
            Target::NegBin(_) => TargetKind::NegBin,
            Target::Mixture(_) => TargetKind::Mixture,
            Target::Gaussian(_) => TargetKind::Gaussian,
        }
    }

    pub fn label(&self) -> &'static str {
        self.kind().label()
    }

    /// Coordinate names for CSV headers and plot axes.
    pub fn coord_names(&self) -> [&'static str; 2] {
        match self {
            Target::NegBin(_) => ["r", "p"],
            _ => ["x", "y"],
        }
    }

    /// Default chain start: the true parameters for the count experiment,
    /// the first mode for the mixture, the mean for the Gaussian.
    pub fn default_init(&self) -> Point {
        match self {
            Target::NegBin(_) => Point::from_slice(&[1.5, 0.4]).unwrap(),
            Target::Mixture(t) => t.means().0.clone(),
            Target::Gaussian(t) => t.mean().clone(),
        }
    }

    /// Default proposal-cloud anchors: a mode-like point, plus points in
    /// low-density regions (for the mixture: the saddle between the
    /// modes).
    pub fn default_anchors(&self) -> Vec<Point> {
        match self {
            Target::NegBin(t) => {
                let mle = newton_mode(t, &Point::from_slice(&[1.5, 0.4]).unwrap());
                let (r, p) = (mle.coords()[0], mle.coords()[1]);
                vec![
                    mle.clone(),
                    Point::from_slice(&[(r + 2.5).max(0.05), (p - 0.17).clamp(0.02, 0.98)]).unwrap(),
                    Point::from_slice(&[(r - 1.0).max(0.15), (p + 0.3).clamp(0.02, 0.98)]).unwrap(),
                ]
            }
            Target::Mixture(t) => vec![
                t.means().0.clone(),
                t.midpoint(),
                Point::from_slice(&[8.0, -2.0]).unwrap(),
            ],
            Target::Gaussian(t) => {
                let mu = t.mean().coords();
                vec![
                    t.mean().clone(),
                    Point::new(mu + DVector::from_element(mu.len(), 2.0)).unwrap(),
                    Point::new(mu - DVector::from_element(mu.len(), 3.0)).unwrap(),
                ]
            }
        }
    }
}

/// A few Newton steps from a starting point find the mode of a smooth
/// unimodal target; used only to pick a sensible default anchor.
fn newton_mode(target: &dyn TargetDensity, start: &Point) -> Point {
    let mut x = start.clone();
    for _ in 0..25 {
        let Ok(LogDensityEval::InSupport(e)) = target.eval(&x) else {
            return start.clone();
        };
        let Some(step) = e.hessian.as_matrix().clone().lu().solve(&e.gradient) else {
            return x;
        };
        let Ok(next) = Point::new(x.coords() - &step) else {
            return x;
        };
        // fall back once Newton leaves the support
        if !matches!(target.eval(&next), Ok(LogDensityEval::InSupport(_))) {
            return x;
        }
        let done = step.norm() < 1e-10;
        x = next;
        if done {
            break;
        }
    }
    x
}

/// Paper values for the mixture experiment. The second mean is the
/// reflection of the first so the density is bimodal with a saddle at the
/// origin; both are configurable.
pub const DEFAULT_MU1: [f64; 2] = [4.0, 4.0];
pub const DEFAULT_MU2: [f64; 2] = [-4.0, -4.0];
pub const DEFAULT_SIGMA: [f64; 3] = [3.0, 2.0, 3.0]; // s11, s12, s22

/// Builds the target named by `--target`, reading counts data when needed.
pub fn build_target(
    kind: TargetKind,
    config: &ConfigMap,
    data_path: &Path,
    mu1: Option<String>,
    mu2: Option<String>,
    mu: Option<String>,
    sigma: Option<String>,
) -> Result<Target, CliError> {
    let sigma_raw = match (sigma, config.get("sigma")) {
        (Some(s), _) => Some(s),
        (None, Some(s)) => Some(s.to_string()),
        (None, None) => None,
    };
    let sigma = match sigma_raw {
        Some(raw) => parse_sigma(&raw)?,
        None => sym_from_triplet(DEFAULT_SIGMA)?,
    };

    match kind {
        TargetKind::NegBin => {
            let text = std::fs::read_to_string(data_path).map_err(|e| {
                CliError::config(format!(
                    "counts file {}: {e} (run `hmala simulate-data` first or pass --data)",
                    data_path.display()
                ))
            })?;
            let data = NegBinData::from_lines(&text)
                .map_err(|e| CliError::config(format!("{}: {e}", data_path.display())))?;
            Ok(Target::NegBin(NegBinLikelihood::new(data)))
        }
        TargetKind::Mixture => {
            let m1 = resolve_point(mu1, config, "mu1", DEFAULT_MU1)?;
            let m2 = resolve_point(mu2, config, "mu2", DEFAULT_MU2)?;
            Ok(Target::Mixture(GaussMixture::new(m1, m2, sigma)?))
        }
        TargetKind::Gaussian => {
            let m = resolve_point(mu, config, "mu", [0.0, 0.0])?;
            Ok(Target::Gaussian(Gaussian::new(m, sigma)?))
        }
    }
}

fn resolve_point(
    flag: Option<String>,
    config: &ConfigMap,
    key: &str,
    default: [f64; 2],
) -> Result<Point, CliError> {
    let raw = match (flag, config.get(key)) {
        (Some(s), _) => Some(s),
        (None, Some(s)) => Some(s.to_string()),
        (None, None) => None,
    };
    let coords = match raw {
        Some(s) => parse_pair(&s)?,
        None => default,
    };
    Point::from_slice(&coords).map_err(|e| CliError::config(e.to_string()))
}

/// `s11,s12,s22` upper-triangle form of the 2×2 covariance.
fn parse_sigma(raw: &str) -> Result<SymMatrix, CliError> {
    let parts: Vec<f64> = raw
        .split(',')
        .map(str::trim)
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::config(format!("not a number in sigma: {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    if parts.len() != 3 {
        return Err(CliError::config(format!(
            "sigma must be `s11,s12,s22`, got {raw:?}"
        )));
    }
    sym_from_triplet([parts[0], parts[1], parts[2]])
}

fn sym_from_triplet(t: [f64; 3]) -> Result<SymMatrix, CliError> {
    SymMatrix::new(DMatrix::from_row_slice(2, 2, &[t[0], t[1], t[1], t[2]]))
        .map_err(|e| CliError::config(format!("sigma: {e}")))
}

/// Where the counts file lives unless `--data` points elsewhere.
pub fn default_data_path(out_dir: &Path) -> PathBuf {
    out_dir.join("counts.txt")
}
