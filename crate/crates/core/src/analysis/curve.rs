use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::econ::{break_even, cumulative_position, Bep, EconReport};

/// Upper bound on the number of points in an emitted curve.
pub const MAX_CURVE_POINTS: usize = 10_000;

/// Cumulative position against the number of completed runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BepCurve {
    pub pre_run_total: f64,
    pub profit_per_run: f64,
    pub n_max: u64,
    pub stride: u64,
    /// `(runs, cumulative USD)`, starting at 0 and always ending at `n_max`.
    pub points: Vec<(u64, f64)>,
    /// Exact break-even run, independent of the stride.
    pub break_even: Bep,
}

impl BepCurve {
    /// The break-even run if it falls within the plotted range.
    pub fn crossing(&self) -> Option<u64> {
        self.break_even.runs().filter(|&n| n <= self.n_max)
    }
}

pub fn bep_curve(report: &EconReport, n_max: u64) -> Result<BepCurve, AnalysisError> {
    curve_for(report.pre_run_total, report.profit, n_max)
}

pub fn curve_for(pre_run_total: f64, profit_per_run: f64, n_max: u64) -> Result<BepCurve, AnalysisError> {
    if n_max < 1 {
        return Err(AnalysisError::Invalid("curve length n_max must be >= 1".into()));
    }
    // n_max / stride + 2 points at most (start, interior, forced endpoint)
    let stride = n_max.div_ceil(MAX_CURVE_POINTS as u64 - 2).max(1);
    let mut points: Vec<(u64, f64)> = (0..=n_max)
        .step_by(stride as usize)
        .map(|n| (n, cumulative_position(pre_run_total, profit_per_run, n)))
        .collect();
    if points.last().map(|p| p.0) != Some(n_max) {
        points.push((n_max, cumulative_position(pre_run_total, profit_per_run, n_max)));
    }
    Ok(BepCurve {
        pre_run_total,
        profit_per_run,
        n_max,
        stride,
        points,
        break_even: break_even(pre_run_total, profit_per_run),
    })
}
