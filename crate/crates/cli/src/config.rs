//! Flat TOML run configuration.
//!
//! Every key is optional. A command-line flag overrides the same key here,
//! and a key here overrides the built-in default. Relative paths are
//! resolved against the directory holding the config file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    // paths
    pub log: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub fixture: Option<PathBuf>,
    pub scenario: Option<PathBuf>,
    pub paper_baseline: Option<bool>,
    pub format: Option<String>,
    pub lenient: Option<bool>,

    // simulation
    pub level: Option<String>,
    pub policy: Option<String>,
    pub episodes: Option<u32>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,

    // economics
    pub c_elec: Option<f64>,
    pub c_shock: Option<f64>,
    pub r_base: Option<f64>,
    pub sla_timeout_s: Option<f64>,
    pub p_failure: Option<f64>,
    pub c_human_op: Option<f64>,
    pub target_runtime_hr: Option<f64>,
    pub distance_scale_maintenance: Option<bool>,
    pub settlement: Option<String>,
    pub deliveries_per_day: Option<f64>,
    pub collision_rate: Option<f64>,
    pub sla_compliance: Option<f64>,

    // analysis
    pub axes: Option<Vec<String>>,
    pub frontier: Option<String>,
    pub curve_max: Option<u64>,
    pub entries: Option<Vec<String>>,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<RunConfig, CliError> {
        toml::from_str(text).map_err(|e| CliError::Validation(format!("run config: {e}")))
    }

    pub fn load(path: &Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        let mut config = RunConfig::from_toml_str(&text)?;
        if let Some(dir) = path.parent() {
            config.rebase(dir);
        }
        Ok(config)
    }

    fn rebase(&mut self, dir: &Path) {
        for path in [&mut self.log, &mut self.out, &mut self.fixture, &mut self.scenario]
            .into_iter()
            .flatten()
        {
            if path.is_relative() {
                *path = dir.join(&*path);
            }
        }
        if let Some(entries) = &mut self.entries {
            for entry in entries.iter_mut() {
                if let Some((id, p)) = entry.split_once('=') {
                    if Path::new(p).is_relative() {
                        *entry = format!("{id}={}", dir.join(p).display());
                    }
                }
            }
        }
    }
}

/// Parse an optional config string with `FromStr`, naming the key on error.
pub(crate) fn parse_key<T>(key: &str, value: Option<&str>) -> Result<Option<T>, CliError>
where
    T: std::str::FromStr<Err = String>,
{
    value
        .map(|v| v.parse().map_err(|e| CliError::Validation(format!("config key `{key}`: {e}"))))
        .transpose()
}
