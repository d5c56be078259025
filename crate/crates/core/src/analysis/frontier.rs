use rayon::prelude::*;
use serde::Serialize;

use super::sweep::{grid_points, with_overrides, Axis, AxisRange, SweepSpec};
use super::AnalysisError;
use crate::econ::{build_report, Bep, EconInputs, Settlement};

/// Profit magnitude accepted as break-even, USD per run.
pub const PROFIT_TOLERANCE: f64 = 1e-6;
const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FrontierSolution {
    Root { value: f64, profit: f64, bep: Bep },
    /// Profit has the same sign at both ends of the bracket.
    NoRoot { profit_lo: f64, profit_hi: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontierPoint {
    /// Values of the fixed axes, in sweep-spec order without the free axis.
    pub fixed: Vec<(Axis, f64)>,
    pub free_axis: Axis,
    pub solution: FrontierSolution,
}

impl FrontierPoint {
    pub fn root(&self) -> Option<f64> {
        match self.solution {
            FrontierSolution::Root { value, .. } => Some(value),
            FrontierSolution::NoRoot { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bisection {
    Root(f64),
    NoRoot { f_lo: f64, f_hi: f64 },
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// Halves the bracket until it cannot shrink further in floating point,
/// then returns whichever end has the smaller `|f|`. An end already within
/// `tol` of zero is a root even without a sign change.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Bisection {
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if f_lo.signum() == f_hi.signum() && f_lo != 0.0 && f_hi != 0.0 {
        return if f_lo.abs() <= tol && f_lo.abs() <= f_hi.abs() {
            Bisection::Root(lo)
        } else if f_hi.abs() <= tol {
            Bisection::Root(hi)
        } else {
            Bisection::NoRoot { f_lo, f_hi }
        };
    }
    for _ in 0..MAX_BISECTIONS {
        if f_lo == 0.0 {
            return Bisection::Root(lo);
        }
        if f_hi == 0.0 {
            return Bisection::Root(hi);
        }
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    Bisection::Root(if f_lo.abs() <= f_hi.abs() { lo } else { hi })
}

fn profit_at(inputs: &EconInputs, axis: Axis, value: f64) -> Result<f64, AnalysisError> {
    let mut inputs = inputs.clone();
    axis.set(&mut inputs, value);
    Ok(build_report(&inputs)?.profit)
}

/// For every combination of the other axes, solve `profit = 0` along
/// `free_axis` within its range.
///
/// Profit is affine in each supported axis, hence monotone, so bisection
/// brackets the unique root whenever the end values differ in sign. The
/// search always uses unrounded settlement so that profit is continuous.
pub fn frontier(spec: &SweepSpec, free_axis: Axis) -> Result<Vec<FrontierPoint>, AnalysisError> {
    spec.validate()?;
    let free = *spec
        .axes
        .iter()
        .find(|r| r.axis == free_axis)
        .ok_or_else(|| AnalysisError::Invalid(format!("free axis {free_axis} is not part of the sweep")))?;
    let fixed_axes: Vec<AxisRange> = spec.axes.iter().copied().filter(|r| r.axis != free_axis).collect();

    let mut baseline = spec.baseline.clone();
    baseline.settlement = Settlement::Exact;

    grid_points(&fixed_axes)
        .into_par_iter()
        .map(|coords| {
            let inputs = with_overrides(&baseline, &fixed_axes, &coords);
            let mut failure = None;
            let outcome = bisect(
                |x| match profit_at(&inputs, free_axis, x) {
                    Ok(p) => p,
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::NAN
                    }
                },
                free.lo,
                free.hi,
                PROFIT_TOLERANCE,
            );
            if let Some(e) = failure {
                return Err(e);
            }
            let solution = match outcome {
                Bisection::Root(value) => {
                    let mut at_root = inputs.clone();
                    free_axis.set(&mut at_root, value);
                    let report = build_report(&at_root)?;
                    if report.profit.abs() > PROFIT_TOLERANCE {
                        return Err(AnalysisError::Invalid(format!(
                            "bisection on {free_axis} stalled at profit {}",
                            report.profit
                        )));
                    }
                    FrontierSolution::Root {
                        value,
                        profit: report.profit,
                        bep: report.bep,
                    }
                }
                Bisection::NoRoot { f_lo, f_hi } => FrontierSolution::NoRoot {
                    profit_lo: f_lo,
                    profit_hi: f_hi,
                },
            };
            Ok(FrontierPoint {
                fixed: fixed_axes.iter().map(|r| r.axis).zip(coords).collect(),
                free_axis,
                solution,
            })
        })
        .collect()
}
