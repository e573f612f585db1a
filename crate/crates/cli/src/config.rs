//! Flat key-value experiment configuration (TOML) with validation.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use twistqa_core::models::AnnealConfig;
use twistqa_core::pauli::PauliSum;
use twistqa_core::{deformed_spin_star, hydrogen_hamiltonian};

/// Raised for malformed or inconsistent configuration; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// The experiment configuration document. All keys are top-level; unknown
/// keys are rejected so typos surface immediately.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// One of `hydrogen`, `spin_star`, `pauli_file`.
    pub problem: String,

    /// Path to a Pauli-sum text file (`problem = "pauli_file"` only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pauli_path: Option<PathBuf>,

    // spin-star parameters (`problem = "spin_star"` only)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_peripheral: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,

    // annealing parameters
    pub annealing_time: f64,
    #[serde(default = "default_time_steps")]
    pub n_time_steps: usize,
    pub gamma: f64,

    // variational parameters
    pub alpha: f64,
    pub n_steps: usize,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    #[serde(default)]
    pub seed: u64,

    // annealing-time scan: an explicit list, or a log-spaced range
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan_t: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan_points: Option<usize>,

    // spectral diagnostics
    #[serde(default = "default_n_points")]
    pub n_points: usize,
    #[serde(default = "default_n_levels")]
    pub n_levels: usize,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

fn default_time_steps() -> usize {
    AnnealConfig::DEFAULT_TIME_STEPS
}

fn default_fd_step() -> f64 {
    twistqa_core::variational::DEFAULT_FD_STEP
}

fn default_n_points() -> usize {
    201
}

fn default_n_levels() -> usize {
    6
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| err(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
        let mut config = Self::from_toml(&text)?;
        // pauli_path is resolved relative to the config file
        if let Some(rel) = &config.pauli_path {
            if rel.is_relative() {
                if let Some(dir) = path.parent() {
                    config.pauli_path = Some(dir.join(rel));
                }
            }
        }
        config.check_paths()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match self.problem.as_str() {
            "hydrogen" => {}
            "spin_star" => {
                if self.n_peripheral.unwrap_or(0) == 0 {
                    return Err(err(
                        "field `n_peripheral`: spin_star needs n_peripheral >= 1",
                    ));
                }
            }
            "pauli_file" => {
                if self.pauli_path.is_none() {
                    return Err(err(
                        "field `pauli_path`: required when problem = \"pauli_file\"",
                    ));
                }
            }
            other => {
                return Err(err(format!(
                    "field `problem`: expected hydrogen | spin_star | pauli_file, got `{other}`"
                )));
            }
        }
        if !(self.annealing_time > 0.0) {
            return Err(err(format!(
                "field `annealing_time`: must be positive, got {}",
                self.annealing_time
            )));
        }
        if self.n_time_steps < 2 {
            return Err(err(format!(
                "field `n_time_steps`: must be at least 2, got {}",
                self.n_time_steps
            )));
        }
        if !(self.gamma >= 0.0) {
            return Err(err(format!(
                "field `gamma`: must be nonnegative, got {}",
                self.gamma
            )));
        }
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(err(format!(
                "field `alpha`: must be finite and nonnegative, got {}",
                self.alpha
            )));
        }
        if !(self.fd_step > 0.0) {
            return Err(err(format!(
                "field `fd_step`: must be positive, got {}",
                self.fd_step
            )));
        }
        if let Some(ts) = &self.scan_t {
            if ts.is_empty() {
                return Err(err("field `scan_t`: list must not be empty"));
            }
            if ts.iter().any(|t| !(*t > 0.0)) {
                return Err(err("field `scan_t`: all annealing times must be positive"));
            }
        } else if self.scan_min.is_some() || self.scan_max.is_some() || self.scan_points.is_some() {
            let lo = self
                .scan_min
                .ok_or_else(|| err("field `scan_min`: required with scan_max/scan_points"))?;
            let hi = self
                .scan_max
                .ok_or_else(|| err("field `scan_max`: required with scan_min/scan_points"))?;
            let n = self.scan_points.unwrap_or(20);
            if !(lo > 0.0) || !(hi > lo) {
                return Err(err(format!(
                    "fields `scan_min`/`scan_max`: need 0 < scan_min < scan_max, got {lo} and {hi}"
                )));
            }
            if n < 1 {
                return Err(err("field `scan_points`: must be at least 1"));
            }
        }
        if self.n_points < 2 {
            return Err(err(format!(
                "field `n_points`: must be at least 2, got {}",
                self.n_points
            )));
        }
        if self.n_levels < 2 {
            return Err(err(format!(
                "field `n_levels`: must be at least 2, got {}",
                self.n_levels
            )));
        }
        Ok(())
    }

    fn check_paths(&self) -> Result<(), ConfigError> {
        if let Some(p) = &self.pauli_path {
            if !p.exists() {
                return Err(err(format!(
                    "field `pauli_path`: {} does not exist",
                    p.display()
                )));
            }
        }
        Ok(())
    }

    /// Build the problem Hamiltonian selected by this configuration.
    pub fn build_problem(&self) -> Result<PauliSum, ConfigError> {
        match self.problem.as_str() {
            "hydrogen" => Ok(hydrogen_hamiltonian()),
            "spin_star" => deformed_spin_star(
                self.n_peripheral.expect("validated"),
                self.omega.unwrap_or(1.0),
                self.omega1.unwrap_or(1.0),
                self.coupling.unwrap_or(15.0),
            )
            .map_err(|e| err(format!("spin_star construction failed: {e}"))),
            "pauli_file" => {
                let path = self.pauli_path.as_ref().expect("validated");
                let text = std::fs::read_to_string(path)
                    .map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
                PauliSum::from_text(&text).map_err(|e| err(format!("{}: {e}", path.display())))
            }
            _ => unreachable!("validated"),
        }
    }

    pub fn anneal_config(&self) -> Result<AnnealConfig, ConfigError> {
        AnnealConfig::new(self.annealing_time, self.n_time_steps, self.gamma)
            .map_err(|e| err(e.to_string()))
    }

    /// Scan grid: the explicit list when given, otherwise the log-spaced
    /// range (defaulting to 20 points spanning [annealing_time/10, 10·annealing_time]).
    pub fn scan_values(&self) -> Vec<f64> {
        if let Some(ts) = &self.scan_t {
            return ts.clone();
        }
        let lo = self.scan_min.unwrap_or(self.annealing_time / 10.0);
        let hi = self.scan_max.unwrap_or(self.annealing_time * 10.0);
        let n = self.scan_points.unwrap_or(20);
        log_spaced(lo, hi, n)
    }
}

pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (llo + (lhi - llo) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Presets shipped with the binary, encoding the reference experiments.
pub const PRESETS: &[(&str, &str)] = &[
    (
        "hydrogen-paper",
        include_str!("../../../presets/hydrogen-paper.toml"),
    ),
    (
        "spinstar-paper",
        include_str!("../../../presets/spinstar-paper.toml"),
    ),
];

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
problem = "hydrogen"
annealing_time = 5.0
gamma = 1e-4
alpha = 0.05
n_steps = 10
"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let config = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(config.n_time_steps, 2000);
        assert_eq!(config.n_points, 201);
        assert_eq!(config.seed, 0);
        assert!((config.fd_step - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("{MINIMAL}\nnot_a_key = 3\n");
        let e = ExperimentConfig::from_toml(&text).unwrap_err();
        assert!(e.0.contains("not_a_key"), "{e}");
    }

    #[test]
    fn spin_star_requires_peripheral_count() {
        let text = MINIMAL.replace("\"hydrogen\"", "\"spin_star\"");
        let e = ExperimentConfig::from_toml(&text).unwrap_err();
        assert!(e.0.contains("n_peripheral"), "{e}");
    }

    #[test]
    fn bad_problem_kind_names_the_field() {
        let text = MINIMAL.replace("\"hydrogen\"", "\"helium\"");
        let e = ExperimentConfig::from_toml(&text).unwrap_err();
        assert!(e.0.contains("`problem`"), "{e}");
    }

    #[test]
    fn negative_gamma_is_rejected() {
        let text = MINIMAL.replace("gamma = 1e-4", "gamma = -1.0");
        let e = ExperimentConfig::from_toml(&text).unwrap_err();
        assert!(e.0.contains("`gamma`"), "{e}");
    }

    #[test]
    fn log_spacing_hits_both_ends() {
        let v = log_spaced(0.5, 500.0, 20);
        assert_eq!(v.len(), 20);
        assert!((v[0] - 0.5).abs() < 1e-12);
        assert!((v[19] - 500.0).abs() < 1e-9);
        assert!(v.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn shipped_presets_parse_and_validate() {
        for (name, text) in PRESETS {
            let config =
                ExperimentConfig::from_toml(text).unwrap_or_else(|e| panic!("preset {name}: {e}"));
            config.build_problem().unwrap();
        }
    }
}
