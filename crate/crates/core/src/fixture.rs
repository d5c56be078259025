//! Versioned baseline input bundles.
//!
//! The bundled baseline ships as `data/paper_baseline.toml`; alternate
//! calibrations are plain edits of a copy of that file.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::econ::{
    CostParams, EconError, EconInputs, HardwareBom, ProjectionPolicy, RunMetrics, Settlement, TrainingStats,
};

pub const FORMAT_VERSION: u32 = 1;

const BUNDLED: &str = include_str!("../data/paper_baseline.toml");

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("fixture parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("unsupported fixture format_version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
    #[error(transparent)]
    Econ(#[from] EconError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Published evaluation statistics of one policy (mean ± std where given).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationTable {
    pub episodes: u64,
    pub arrival_rate: f64,
    pub collision_rate: f64,
    pub timeout_rate: f64,
    pub sla_compliance: f64,
    pub mean_collision_impulse: f64,
    pub collision_impulse_std: f64,
    pub mean_power_w: f64,
    pub mean_power_std: f64,
    pub max_power_w: f64,
    pub max_power_std: f64,
    pub runtime_hr: f64,
    pub distance_m: f64,
    pub timeout_s: f64,
}

impl EvaluationTable {
    pub fn run_metrics(&self) -> RunMetrics {
        RunMetrics {
            sla_compliance: self.sla_compliance,
            collision_rate: self.collision_rate,
            mean_collision_impulse: self.mean_collision_impulse,
            mean_power_w: self.mean_power_w,
            runtime_hr: self.runtime_hr,
            collision_exposure: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Baseline {
    pub format_version: u32,
    pub policy_id: String,
    pub bom: HardwareBom,
    pub training: TrainingStats,
    pub evaluation: EvaluationTable,
    pub params: CostParams,
    pub projection: ProjectionPolicy,
}

impl Baseline {
    pub fn bundled() -> Baseline {
        Baseline::from_toml_str(BUNDLED).expect("bundled baseline fixture is valid")
    }

    pub fn from_toml_str(text: &str) -> Result<Baseline, FixtureError> {
        let baseline: Baseline = toml::from_str(text)?;
        if baseline.format_version != FORMAT_VERSION {
            return Err(FixtureError::Version(baseline.format_version));
        }
        baseline.bom.validate()?;
        baseline.training.validate()?;
        baseline.params.validate()?;
        baseline.projection.validate()?;
        baseline.evaluation.run_metrics().validate()?;
        Ok(baseline)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Baseline, FixtureError> {
        Baseline::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn inputs(&self) -> EconInputs {
        EconInputs {
            bom: self.bom.clone(),
            training: self.training,
            metrics: self.evaluation.run_metrics(),
            params: self.params,
            projection: self.projection,
            settlement: Settlement::default(),
            deliveries_per_day: None,
        }
    }
}
