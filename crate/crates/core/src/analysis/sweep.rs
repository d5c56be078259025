use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::econ::{build_report, EconInputs, EconReport};

/// A scalar input that sweeps and frontiers can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    CollisionRate,
    SlaCompliance,
    MeanPower,
    CShock,
    RBase,
}

impl Axis {
    pub const ALL: [Axis; 5] = [
        Axis::CollisionRate,
        Axis::SlaCompliance,
        Axis::MeanPower,
        Axis::CShock,
        Axis::RBase,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axis::CollisionRate => "collision_rate",
            Axis::SlaCompliance => "sla_compliance",
            Axis::MeanPower => "mean_power",
            Axis::CShock => "c_shock",
            Axis::RBase => "r_base",
        }
    }

    pub fn is_fraction(self) -> bool {
        matches!(self, Axis::CollisionRate | Axis::SlaCompliance)
    }

    pub fn get(self, inputs: &EconInputs) -> f64 {
        match self {
            Axis::CollisionRate => inputs.metrics.collision_rate,
            Axis::SlaCompliance => inputs.metrics.sla_compliance,
            Axis::MeanPower => inputs.metrics.mean_power_w,
            Axis::CShock => inputs.params.c_shock,
            Axis::RBase => inputs.params.r_base,
        }
    }

    pub fn set(self, inputs: &mut EconInputs, value: f64) {
        match self {
            Axis::CollisionRate => inputs.metrics.collision_rate = value,
            Axis::SlaCompliance => inputs.metrics.sla_compliance = value,
            Axis::MeanPower => inputs.metrics.mean_power_w = value,
            Axis::CShock => inputs.params.c_shock = value,
            Axis::RBase => inputs.params.r_base = value,
        }
    }

    fn in_domain(self, value: f64) -> bool {
        value.is_finite() && value >= 0.0 && (!self.is_fraction() || value <= 1.0)
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "collision_rate" | "collision" => Ok(Axis::CollisionRate),
            "sla_compliance" | "sla" => Ok(Axis::SlaCompliance),
            "mean_power" | "power" => Ok(Axis::MeanPower),
            "c_shock" => Ok(Axis::CShock),
            "r_base" => Ok(Axis::RBase),
            other => Err(format!(
                "unknown axis `{other}` (expected collision_rate, sla_compliance, mean_power, c_shock or r_base)"
            )),
        }
    }
}

/// Upper bound on the number of cells in one sweep.
pub const MAX_GRID_CELLS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl AxisRange {
    pub fn new(axis: Axis, lo: f64, hi: f64, steps: usize) -> Self {
        AxisRange { axis, lo, hi, steps }
    }

    /// A single point; used to pin an axis at one value.
    pub fn point(axis: Axis, value: f64) -> Self {
        AxisRange::new(axis, value, value, 1)
    }

    pub fn validate(&self) -> Result<(), AnalysisError> {
        let axis = self.axis;
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.lo > self.hi {
            return Err(AnalysisError::Invalid(format!(
                "{axis}: range [{}, {}] must satisfy lo <= hi",
                self.lo, self.hi
            )));
        }
        if !axis.in_domain(self.lo) || !axis.in_domain(self.hi) {
            return Err(AnalysisError::Invalid(format!(
                "{axis}: range [{}, {}] leaves the valid domain",
                self.lo, self.hi
            )));
        }
        match self.steps {
            0 => Err(AnalysisError::Invalid(format!("{axis}: steps must be >= 1"))),
            1 if self.lo != self.hi => Err(AnalysisError::Invalid(format!(
                "{axis}: a range with lo < hi needs at least 2 steps"
            ))),
            _ => Ok(()),
        }
    }

    /// Evenly spaced values; the last is exactly `hi`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps <= 1 {
            return vec![self.lo];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * (i as f64 / last)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axes: Vec<AxisRange>,
    pub baseline: EconInputs,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.axes.is_empty() {
            return Err(AnalysisError::Invalid("a sweep needs at least one axis".into()));
        }
        for (i, range) in self.axes.iter().enumerate() {
            range.validate()?;
            if self.axes[..i].iter().any(|r| r.axis == range.axis) {
                return Err(AnalysisError::Invalid(format!("axis {} appears twice", range.axis)));
            }
        }
        let cells = self
            .axes
            .iter()
            .try_fold(1usize, |acc, r| acc.checked_mul(r.steps))
            .filter(|&n| n <= MAX_GRID_CELLS);
        if cells.is_none() {
            return Err(AnalysisError::Invalid(format!(
                "the grid would exceed {MAX_GRID_CELLS} cells"
            )));
        }
        build_report(&self.baseline)?;
        Ok(())
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|r| r.steps.max(1)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCell {
    /// One value per sweep axis, in axis order.
    pub coords: Vec<f64>,
    pub report: EconReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub axes: Vec<AxisRange>,
    pub shape: Vec<usize>,
    /// Row-major: the last axis varies fastest.
    pub cells: Vec<SweepCell>,
}

impl SweepGrid {
    pub fn get(&self, index: &[usize]) -> Option<&SweepCell> {
        if index.len() != self.shape.len() || index.iter().zip(&self.shape).any(|(i, n)| i >= n) {
            return None;
        }
        let flat = index.iter().zip(&self.shape).fold(0, |acc, (i, n)| acc * n + i);
        self.cells.get(flat)
    }
}

/// Coordinates of every cell in row-major order.
pub(crate) fn grid_points(axes: &[AxisRange]) -> Vec<Vec<f64>> {
    let values: Vec<Vec<f64>> = axes.iter().map(AxisRange::values).collect();
    let mut points = vec![Vec::with_capacity(axes.len())];
    for axis_values in &values {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                axis_values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    points
}

pub(crate) fn with_overrides(baseline: &EconInputs, axes: &[AxisRange], coords: &[f64]) -> EconInputs {
    let mut inputs = baseline.clone();
    for (range, &value) in axes.iter().zip(coords) {
        range.axis.set(&mut inputs, value);
    }
    inputs
}

/// Evaluate the economics on the Cartesian product of the axis values.
pub fn sweep(spec: &SweepSpec) -> Result<SweepGrid, AnalysisError> {
    spec.validate()?;
    let cells = grid_points(&spec.axes)
        .into_par_iter()
        .map(|coords| {
            let report = build_report(&with_overrides(&spec.baseline, &spec.axes, &coords))?;
            Ok(SweepCell { coords, report })
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    Ok(SweepGrid {
        axes: spec.axes.clone(),
        shape: spec.shape(),
        cells,
    })
}
