use std::cmp::Ordering;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use super::AnalysisError;
use crate::econ::{
    build_report, Bep, CostParams, EconInputs, EconReport, HardwareBom, ProjectionPolicy, Settlement,
    TrainingStats,
};
use crate::log::{aggregate_with, read_log, to_run_metrics, AggregateOptions, EpisodeRecord, LogError, ReadOptions};

/// Economics shared by every policy on a leaderboard.
#[derive(Debug, Clone, PartialEq)]
pub struct EconConfig {
    pub bom: HardwareBom,
    pub training: TrainingStats,
    pub params: CostParams,
    pub projection: ProjectionPolicy,
    pub settlement: Settlement,
    pub deliveries_per_day: Option<f64>,
    pub read: ReadOptions,
    pub aggregate: AggregateOptions,
}

impl EconConfig {
    /// Shared config taken from a complete set of inputs; the run metrics
    /// are discarded since each policy supplies its own.
    pub fn from_inputs(inputs: &EconInputs) -> Self {
        EconConfig {
            bom: inputs.bom.clone(),
            training: inputs.training,
            params: inputs.params,
            projection: inputs.projection,
            settlement: inputs.settlement,
            deliveries_per_day: inputs.deliveries_per_day,
            read: ReadOptions {
                timeout_s: inputs.params.sla_timeout_s,
                ..ReadOptions::default()
            },
            aggregate: AggregateOptions {
                sla_timeout_s: inputs.params.sla_timeout_s,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeaderboardInput {
    pub policy_id: String,
    pub log_path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeaderboardRow {
    pub policy_id: String,
    pub episodes: u64,
    pub success_rate: f64,
    pub collision_rate: f64,
    pub path_length_m: f64,
    pub run_cost: f64,
    pub energy_cost: f64,
    pub maintenance_cost: f64,
    pub revenue: f64,
    pub profit: f64,
    pub bep: Bep,
}

impl LeaderboardRow {
    fn new(policy_id: &str, episodes: u64, success_rate: f64, path_length_m: f64, report: &EconReport) -> Self {
        LeaderboardRow {
            policy_id: policy_id.to_string(),
            episodes,
            success_rate,
            collision_rate: report.collision_rate,
            path_length_m,
            run_cost: report.run_cost_total,
            energy_cost: report.energy_cost,
            maintenance_cost: report.maintenance_cost,
            revenue: report.revenue,
            profit: report.profit,
            bep: report.bep,
        }
    }
}

/// Profit descending, then finite BEPs (smallest first) before NotViable,
/// then policy id ascending.
pub fn rank_order(a: &LeaderboardRow, b: &LeaderboardRow) -> Ordering {
    b.profit
        .total_cmp(&a.profit)
        .then_with(|| a.bep.cmp(&b.bep))
        .then_with(|| a.policy_id.cmp(&b.policy_id))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Leaderboard {
    pub rows: Vec<LeaderboardRow>,
    /// Policies left out in lenient mode, with the reason.
    pub skipped: Vec<(String, String)>,
}

fn evaluate(policy_id: &str, records: &[EpisodeRecord], config: &EconConfig) -> Result<LeaderboardRow, AnalysisError> {
    let log_err = |source: LogError| AnalysisError::Log {
        policy: policy_id.to_string(),
        source,
    };
    let summary = aggregate_with(records, config.aggregate).map_err(log_err)?;
    let inputs = EconInputs {
        bom: config.bom.clone(),
        training: config.training,
        metrics: to_run_metrics(&summary),
        params: config.params,
        projection: config.projection,
        settlement: config.settlement,
        deliveries_per_day: config.deliveries_per_day,
    };
    let report = build_report(&inputs)?;
    Ok(LeaderboardRow::new(
        policy_id,
        summary.n_episodes,
        summary.arrival_rate,
        summary.distance_mean,
        &report,
    ))
}

fn assemble(
    results: Vec<(String, Result<LeaderboardRow, AnalysisError>)>,
    lenient: bool,
) -> Result<Leaderboard, AnalysisError> {
    if results.is_empty() {
        return Err(AnalysisError::Invalid("a leaderboard needs at least one policy".into()));
    }
    let mut rows = Vec::with_capacity(results.len());
    let mut skipped = Vec::new();
    for (policy_id, result) in results {
        match result {
            Ok(row) => rows.push(row),
            Err(e) if lenient => {
                log::warn!("skipping policy {policy_id}: {e}");
                skipped.push((policy_id, e.to_string()));
            }
            Err(e) => return Err(e),
        }
    }
    if rows.is_empty() {
        return Err(AnalysisError::Invalid("every policy failed to evaluate".into()));
    }
    rows.sort_by(rank_order);
    Ok(Leaderboard { rows, skipped })
}

/// Rank policies from their episode logs.
///
/// A policy whose log cannot be read, parsed or evaluated fails the whole
/// leaderboard unless `lenient`, in which case it is skipped and listed.
pub fn leaderboard(inputs: &[LeaderboardInput], config: &EconConfig, lenient: bool) -> Result<Leaderboard, AnalysisError> {
    let results = inputs
        .par_iter()
        .map(|input| {
            let result = read_log(&input.log_path, &config.read)
                .map_err(|source| AnalysisError::Log {
                    policy: input.policy_id.clone(),
                    source,
                })
                .and_then(|records| evaluate(&input.policy_id, &records, config));
            (input.policy_id.clone(), result)
        })
        .collect();
    assemble(results, lenient)
}

/// Rank policies from in-memory records.
pub fn leaderboard_from_records(
    inputs: &[(String, Vec<EpisodeRecord>)],
    config: &EconConfig,
    lenient: bool,
) -> Result<Leaderboard, AnalysisError> {
    let results = inputs
        .par_iter()
        .map(|(policy_id, records)| (policy_id.clone(), evaluate(policy_id, records, config)))
        .collect();
    assemble(results, lenient)
}
