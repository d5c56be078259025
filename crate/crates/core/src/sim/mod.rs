//! Deterministic 2D kinematic micro-simulator for sidewalk deliveries.
//!
//! A unicycle robot drives from a start point to a goal disc on a bounded
//! strip, optionally among pedestrians. Every episode is a pure function of
//! `(scenario, policy, master_seed, episode_index)`, so batches can run on
//! any number of threads and still produce identical logs.

mod config;
mod episode;
mod geom;
mod pedestrian;
mod policy;
mod seed;

pub use config::{Level, PowerModel, RobotParams, ScenarioConfig, ScenarioFile};
pub use episode::{run_episode, run_episode_traced, simulate, TraceSample};
pub use geom::{wrap_angle, Arena, Disc, Vec2};
pub use pedestrian::{pedestrian_step, random_point, Pedestrian};
pub use policy::{Command, Controller, Observation, PolicyController, PolicyOverrides, PolicySpec};
pub use seed::{episode_rng, episode_seed, mix64, EpisodeRng, GOLDEN_GAMMA};

use rayon::prelude::*;
use thiserror::Error;

use crate::log::EpisodeRecord;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    Config(String),
    #[error("episode {episode_index} (seed {seed}) produced a non-finite state at step {step}")]
    NonFinite { episode_index: u64, seed: u64, step: u64 },
}

/// Run every episode of `scenario` on the global thread pool.
/// Output is in episode-index order.
pub fn run_batch(scenario: &ScenarioConfig, policy: &PolicySpec) -> Result<Vec<EpisodeRecord>, SimError> {
    if scenario.n_episodes == 0 {
        return Err(SimError::Config("n_episodes must be >= 1".into()));
    }
    scenario.validate()?;
    policy.validate()?;
    (0..u64::from(scenario.n_episodes))
        .into_par_iter()
        .map(|i| run_episode(scenario, policy, i))
        .collect()
}

/// [`run_batch`] on a dedicated pool of `workers` threads.
pub fn run_batch_with_workers(
    scenario: &ScenarioConfig,
    policy: &PolicySpec,
    workers: usize,
) -> Result<Vec<EpisodeRecord>, SimError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| SimError::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_batch(scenario, policy))
}
