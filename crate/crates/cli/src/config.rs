//! Flat key-value config files and flag/config/default resolution.
//!
//! The file format is one `key = value` pair per line; `#` starts a
//! comment. Keys use the same spelling as the long command-line flags.
//! A flag given on the command line always wins over the file.

use crate::CliError;
use std::collections::BTreeMap;
use std::path::Path;

/// Parsed config file contents.
#[derive(Debug, Clone, Default)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::config(format!(
                    "config line {}: expected `key = value`, got {raw:?}",
                    idx + 1
                )));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return Err(CliError::config(format!(
                    "config line {}: empty key or value",
                    idx + 1
                )));
            }
            entries.insert(key, value);
        }
        Ok(ConfigMap { entries })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }
}

/// One setting with flag-over-config-over-default precedence.
pub fn resolve<T: std::str::FromStr>(
    flag: Option<T>,
    config: &ConfigMap,
    key: &str,
    default: T,
) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    match config.get(key) {
        Some(raw) => raw
            .parse()
            .map_err(|e| CliError::config(format!("config key `{key}`: {e}"))),
        None => Ok(default),
    }
}

/// Like [`resolve`] but without a default; returns `None` when neither the
/// flag nor the config file provides a value.
pub fn resolve_opt<T: std::str::FromStr>(
    flag: Option<T>,
    config: &ConfigMap,
    key: &str,
) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = flag {
        return Ok(Some(v));
    }
    match config.get(key) {
        Some(raw) => raw
            .parse()
            .map(Some)
            .map_err(|e| CliError::config(format!("config key `{key}`: {e}"))),
        None => Ok(None),
    }
}

/// A comma-separated coordinate pair such as `1.5,0.4`.
pub fn parse_pair(raw: &str) -> Result<[f64; 2], CliError> {
    let parts: Vec<&str> = raw.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(CliError::config(format!(
            "expected two comma-separated numbers, got {raw:?}"
        )));
    }
    let x = parts[0]
        .parse()
        .map_err(|_| CliError::config(format!("not a number: {:?}", parts[0])))?;
    let y = parts[1]
        .parse()
        .map_err(|_| CliError::config(format!("not a number: {:?}", parts[1])))?;
    Ok([x, y])
}

/// Semicolon-separated anchor list: `r1,p1;r2,p2;...`.
pub fn parse_anchor_list(raw: &str) -> Result<Vec<[f64; 2]>, CliError> {
    raw.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_pair)
        .collect()
}

/// A step-size grid: either a single number, a comma list `a,b,c`, or a
/// log-spaced range `start:stop:count`.
pub fn parse_delta_grid(raw: &str) -> Result<Vec<f64>, CliError> {
    let grid: Vec<f64> = if raw.contains(':') {
        let parts: Vec<&str> = raw.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::config(format!(
                "expected start:stop:count, got {raw:?}"
            )));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|_| CliError::config(format!("not a number: {:?}", parts[0])))?;
        let stop: f64 = parts[1]
            .parse()
            .map_err(|_| CliError::config(format!("not a number: {:?}", parts[1])))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| CliError::config(format!("not a count: {:?}", parts[2])))?;
        if count < 2 || start <= 0.0 || stop <= start {
            return Err(CliError::config(format!(
                "need 0 < start < stop and count ≥ 2 in {raw:?}"
            )));
        }
        let (ls, le) = (start.ln(), stop.ln());
        (0..count)
            .map(|i| (ls + (le - ls) * i as f64 / (count - 1) as f64).exp())
            .collect()
    } else {
        raw.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| CliError::config(format!("not a number: {s:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    if grid.is_empty() {
        return Err(CliError::config("empty step-size grid"));
    }
    if grid.iter().any(|&d| !d.is_finite() || d <= 0.0) {
        return Err(CliError::config(format!(
            "step sizes must be positive and finite: {raw:?}"
        )));
    }
    Ok(grid)
}
