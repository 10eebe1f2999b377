//! TOML sweep configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Ramsey,
    Hr,
    Dh,
    Number,
    Homodyne,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Inclusive `steps`-point grid from `min` to `max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    #[serde(default = "one")]
    pub steps: usize,
}

fn one() -> usize {
    1
}

impl Range {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    pub fn point(x: f64) -> Self {
        Self::new(x, x, 1)
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.max } else { self.min + h * i as f64 })
            .collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() {
            return Err(Error::Precondition(format!("grid.{name}: bounds must be finite")));
        }
        if self.steps == 0 {
            return Err(Error::Precondition(format!("grid.{name}: steps must be at least 1")));
        }
        if self.min > self.max {
            return Err(Error::Precondition(format!(
                "grid.{name}: min {} exceeds max {}",
                self.min, self.max
            )));
        }
        Ok(())
    }
}

/// Per-parameter grids; absent entries fall back to each command's defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub gamma: Option<Range>,
    pub phi: Option<Range>,
    pub delta: Option<Range>,
    pub nu_tau: Option<Range>,
    pub omega_t1: Option<Range>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Restricts `validate` to one arrangement; all when absent.
    #[serde(default)]
    pub experiment: Option<Experiment>,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default = "default_tail")]
    pub fock_tail_tol: f64,
    #[serde(default)]
    pub output: Output,
}

fn default_tail() -> f64 {
    tolerances::FOCK_TAIL
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            experiment: None,
            grid: Grid::default(),
            fock_tail_tol: default_tail(),
            output: Output::default(),
        }
    }
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Precondition(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Precondition(format!("reading {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fock_tail_tol > 0.0 && self.fock_tail_tol < 1.0) {
            return Err(Error::Precondition(format!(
                "fock_tail_tol must lie in (0, 1), got {}",
                self.fock_tail_tol
            )));
        }
        let g = &self.grid;
        for (name, r) in [
            ("gamma", g.gamma),
            ("phi", g.phi),
            ("delta", g.delta),
            ("nu_tau", g.nu_tau),
            ("omega_t1", g.omega_t1),
        ] {
            if let Some(r) = r {
                r.validate(name)?;
            }
        }
        if let Some(r) = g.gamma {
            if r.min < 0.0 {
                return Err(Error::Precondition("grid.gamma: amplitudes must be nonnegative".into()));
            }
        }
        if let Some(r) = g.delta {
            if r.min < -1.0 || r.max > 1.0 {
                return Err(Error::Precondition("grid.delta must lie in [-1, 1]".into()));
            }
        }
        Ok(())
    }

    /// Values of a grid, or `default` when the key is absent.
    pub fn values_or(&self, r: Option<Range>, default: Range) -> Vec<f64> {
        r.unwrap_or(default).values()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = SweepConfig::from_toml("").unwrap();
        assert_eq!(c, SweepConfig::default());
        assert_eq!(c.fock_tail_tol, 1e-12);
    }

    #[test]
    fn parses_nested_grid() {
        let c = SweepConfig::from_toml(
            "experiment = \"homodyne\"\n[grid.gamma]\nmin = 0.0\nmax = 2.0\nsteps = 5\n[output]\nformat = \"json\"\n",
        )
        .unwrap();
        assert_eq!(c.experiment, Some(Experiment::Homodyne));
        assert_eq!(c.grid.gamma.unwrap().values(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(c.output.format, Format::Json);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(SweepConfig::from_toml("fock_tail_tol = 1.5").is_err());
        assert!(SweepConfig::from_toml("[grid.phi]\nmin = 1.0\nmax = 0.0").is_err());
        assert!(SweepConfig::from_toml("[grid.phi]\nmin = 0.0\nmax = 1.0\nsteps = 0").is_err());
        assert!(SweepConfig::from_toml("[grid.delta]\nmin = -2.0\nmax = 0.0").is_err());
        assert!(SweepConfig::from_toml("bogus = 1").is_err());
    }
}
