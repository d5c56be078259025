//! Sensitivity sweeps, viability frontiers, break-even curves, leaderboards
//! and artifact emission.

mod curve;
pub mod emit;
mod frontier;
mod leaderboard;
mod sweep;

pub use curve::{bep_curve, curve_for, BepCurve, MAX_CURVE_POINTS};
pub use emit::{emit_report, parse_curve_csv, parse_report_csv, render, Artifact, Format};
pub use frontier::{bisect, frontier, Bisection, FrontierPoint, FrontierSolution, PROFIT_TOLERANCE};
pub use leaderboard::{
    leaderboard, leaderboard_from_records, rank_order, EconConfig, Leaderboard, LeaderboardInput, LeaderboardRow,
};
pub use sweep::{sweep, Axis, AxisRange, SweepCell, SweepGrid, SweepSpec, MAX_GRID_CELLS};

use thiserror::Error;

use crate::econ::EconError;
use crate::log::LogError;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Econ(#[from] EconError),
    #[error("policy {policy}: {source}")]
    Log {
        policy: String,
        #[source]
        source: LogError,
    },
    #[error("{0}")]
    Unsupported(String),
    #[error("CSV parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
