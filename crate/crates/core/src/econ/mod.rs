//! Unit economics of a single delivery robot.
//!
//! Pre-run (fixed) costs are the hardware bill of materials plus the wear
//! accrued while collecting training data. Run (variable) costs are energy,
//! collision-driven maintenance and expected human rescue. Revenue is the
//! base delivery fee gated by on-time delivery. Everything here is a pure
//! function of its inputs.

mod settle;

pub use settle::{fixed, group_thousands, round_half_even, whole_dollars, Settlement, CENT, MILL};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Profit per run at or below this is treated as non-viable.
pub const VIABILITY_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EconError {
    #[error("invalid {field}: {reason}")]
    Invalid { field: String, reason: String },
}

impl EconError {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        EconError::Invalid {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

fn check_non_negative(field: &str, value: f64) -> Result<(), EconError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(EconError::invalid(field, format!("must be a finite value >= 0, got {value}")))
    }
}

fn check_fraction(field: &str, value: f64) -> Result<(), EconError> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(EconError::invalid(field, format!("must lie in [0, 1], got {value}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BomItem {
    pub name: String,
    pub unit_cost: f64,
    pub quantity: u32,
}

/// Hardware bill of materials for one robot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareBom {
    pub items: Vec<BomItem>,
}

impl HardwareBom {
    pub fn new(items: Vec<BomItem>) -> Result<Self, EconError> {
        let bom = HardwareBom { items };
        bom.validate()?;
        Ok(bom)
    }

    pub fn validate(&self) -> Result<(), EconError> {
        if self.items.is_empty() {
            return Err(EconError::invalid("bom", "at least one item is required"));
        }
        for item in &self.items {
            check_non_negative(&format!("bom item `{}` unit_cost", item.name), item.unit_cost)?;
            if item.quantity == 0 {
                return Err(EconError::invalid(
                    format!("bom item `{}` quantity", item.name),
                    "must be >= 1",
                ));
            }
        }
        Ok(())
    }

    pub fn total(&self) -> f64 {
        self.items
            .iter()
            .map(|item| item.unit_cost * f64::from(item.quantity))
            .sum()
    }
}

/// Calibrated economic coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostParams {
    /// USD per kWh.
    pub c_elec: f64,
    /// Fraction of hardware cost charged per N·s of collision impulse.
    pub c_shock: f64,
    /// Base delivery fee, USD.
    pub r_base: f64,
    /// Deliveries later than this earn nothing, seconds.
    pub sla_timeout_s: f64,
    /// Probability that a run needs a human rescue.
    pub p_failure: f64,
    /// USD per human intervention.
    pub c_human_op: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams {
            c_elec: 0.20,
            c_shock: 1e-5,
            r_base: 3.49,
            sla_timeout_s: 600.0,
            p_failure: 0.0,
            c_human_op: 0.0,
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<(), EconError> {
        check_non_negative("c_elec", self.c_elec)?;
        check_non_negative("c_shock", self.c_shock)?;
        check_non_negative("r_base", self.r_base)?;
        check_non_negative("sla_timeout_s", self.sla_timeout_s)?;
        check_fraction("p_failure", self.p_failure)?;
        check_non_negative("c_human_op", self.c_human_op)
    }
}

/// Statistics of the episodes run while collecting training data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingStats {
    pub episodes: u64,
    pub collision_rate: f64,
    /// Mean impulse over colliding episodes, N·s.
    pub mean_collision_impulse: f64,
    pub mean_episode_time_s: f64,
}

impl TrainingStats {
    pub fn validate(&self) -> Result<(), EconError> {
        check_fraction("training collision_rate", self.collision_rate)?;
        check_non_negative("training mean_collision_impulse", self.mean_collision_impulse)?;
        check_non_negative("training mean_episode_time_s", self.mean_episode_time_s)
    }
}

/// Per-run operating statistics of a policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunMetrics {
    pub sla_compliance: f64,
    pub collision_rate: f64,
    /// Mean impulse given that a collision happened, N·s.
    pub mean_collision_impulse: f64,
    pub mean_power_w: f64,
    pub runtime_hr: f64,
    /// Expected collision opportunities per run relative to the measured
    /// episode. 1 unless a projection scales exposure with distance.
    #[serde(default = "unit_exposure")]
    pub collision_exposure: f64,
}

fn unit_exposure() -> f64 {
    1.0
}

impl RunMetrics {
    pub fn validate(&self) -> Result<(), EconError> {
        check_fraction("sla_compliance", self.sla_compliance)?;
        check_fraction("collision_rate", self.collision_rate)?;
        check_non_negative("mean_collision_impulse", self.mean_collision_impulse)?;
        check_non_negative("mean_power_w", self.mean_power_w)?;
        check_non_negative("collision_exposure", self.collision_exposure)?;
        if !(self.runtime_hr.is_finite() && self.runtime_hr > 0.0) {
            return Err(EconError::invalid("runtime_hr", format!("must be > 0, got {}", self.runtime_hr)));
        }
        Ok(())
    }
}

/// How micro-testbed metrics are normalised to a full delivery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionPolicy {
    /// Runtime of the projected delivery; `None` keeps the measured runtime.
    pub target_runtime_hr: Option<f64>,
    /// Scale expected collisions by `target_distance_m / source_distance_m`.
    #[serde(default)]
    pub distance_scale_maintenance: bool,
    #[serde(default = "default_source_distance")]
    pub source_distance_m: f64,
    #[serde(default = "default_target_distance")]
    pub target_distance_m: f64,
}

fn default_source_distance() -> f64 {
    20.0
}

fn default_target_distance() -> f64 {
    6000.0
}

impl Default for ProjectionPolicy {
    /// 20 m / 0.1 hr testbed episodes projected to a 6 km, 1 hr delivery.
    fn default() -> Self {
        ProjectionPolicy {
            target_runtime_hr: Some(1.0),
            distance_scale_maintenance: false,
            source_distance_m: default_source_distance(),
            target_distance_m: default_target_distance(),
        }
    }
}

impl ProjectionPolicy {
    pub fn identity() -> Self {
        ProjectionPolicy {
            target_runtime_hr: None,
            ..ProjectionPolicy::default()
        }
    }

    pub fn validate(&self) -> Result<(), EconError> {
        if let Some(target) = self.target_runtime_hr {
            if !(target.is_finite() && target > 0.0) {
                return Err(EconError::invalid("target_runtime_hr", format!("must be > 0, got {target}")));
            }
        }
        if self.distance_scale_maintenance {
            for (field, value) in [
                ("source_distance_m", self.source_distance_m),
                ("target_distance_m", self.target_distance_m),
            ] {
                if !(value.is_finite() && value > 0.0) {
                    return Err(EconError::invalid(field, format!("must be > 0, got {value}")));
                }
            }
        }
        Ok(())
    }
}

/// Break-even point in whole runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Bep {
    Runs(u64),
    NotViable,
}

impl Bep {
    pub fn runs(self) -> Option<u64> {
        match self {
            Bep::Runs(n) => Some(n),
            Bep::NotViable => None,
        }
    }

    pub fn is_viable(self) -> bool {
        matches!(self, Bep::Runs(_))
    }
}

impl std::fmt::Display for Bep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bep::Runs(n) => write!(f, "{n}"),
            Bep::NotViable => f.write_str("None"),
        }
    }
}

/// Share of each component in the run cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostShares {
    pub energy: f64,
    pub maintenance: f64,
    pub rescue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconReport {
    pub hardware_cost: f64,
    pub training_cost: f64,
    pub pre_run_total: f64,
    pub energy_cost: f64,
    pub maintenance_cost: f64,
    pub rescue_cost: f64,
    pub run_cost_total: f64,
    pub sla_compliance: f64,
    pub collision_rate: f64,
    pub revenue: f64,
    pub profit: f64,
    pub bep: Bep,
    /// Unrounded `pre_run_total / profit`, present when viable.
    pub bep_ratio: Option<f64>,
    /// All zero when the run cost is zero.
    pub cost_shares: CostShares,
    pub time_to_profitability_days: Option<f64>,
    pub settlement: Settlement,
}

/// Everything `build_report` needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconInputs {
    pub bom: HardwareBom,
    pub training: TrainingStats,
    pub metrics: RunMetrics,
    pub params: CostParams,
    pub projection: ProjectionPolicy,
    #[serde(default)]
    pub settlement: Settlement,
    #[serde(default)]
    pub deliveries_per_day: Option<f64>,
}

pub fn hardware_cost(bom: &HardwareBom) -> Result<f64, EconError> {
    bom.validate()?;
    Ok(bom.total())
}

/// Wear accrued over the training episodes:
/// `c_shock × impulse × collision_rate × episodes × hardware`.
pub fn training_cost(stats: &TrainingStats, params: &CostParams, hardware: f64) -> f64 {
    params.c_shock
        * stats.mean_collision_impulse
        * stats.collision_rate
        * stats.episodes as f64
        * hardware
}

pub fn energy_cost(metrics: &RunMetrics, params: &CostParams) -> f64 {
    let kwh = metrics.mean_power_w / 1000.0 * metrics.runtime_hr;
    kwh * params.c_elec
}

/// Expected wear per run: `c_shock × impulse × collision_rate × hardware`,
/// times the collision exposure of the run.
pub fn maintenance_cost(metrics: &RunMetrics, params: &CostParams, hardware: f64) -> f64 {
    params.c_shock
        * metrics.mean_collision_impulse
        * metrics.collision_rate
        * metrics.collision_exposure
        * hardware
}

pub fn rescue_cost(params: &CostParams) -> f64 {
    params.p_failure * params.c_human_op
}

/// Expected revenue: base fee times the fraction of on-time deliveries.
pub fn revenue(metrics: &RunMetrics, params: &CostParams) -> f64 {
    params.r_base * metrics.sla_compliance
}

/// 1 for an on-time delivery, 0 for a late one. The deadline is inclusive.
pub fn sla_factor(delivery_time_s: f64, params: &CostParams) -> u8 {
    u8::from(delivery_time_s <= params.sla_timeout_s)
}

pub fn profit_per_run(revenue: f64, energy: f64, maintenance: f64, rescue: f64) -> f64 {
    revenue - (energy + maintenance + rescue)
}

/// Raw `pre_run_total / profit`, or `None` when the profit does not exceed
/// [`VIABILITY_EPSILON`].
pub fn break_even_ratio(pre_run_total: f64, profit_per_run: f64) -> Option<f64> {
    (profit_per_run > VIABILITY_EPSILON).then(|| pre_run_total / profit_per_run)
}

/// First whole run at which the cumulative position is no longer negative.
pub fn break_even(pre_run_total: f64, profit_per_run: f64) -> Bep {
    let Some(ratio) = break_even_ratio(pre_run_total, profit_per_run) else {
        return Bep::NotViable;
    };
    if !ratio.is_finite() || ratio >= u64::MAX as f64 {
        return Bep::Runs(u64::MAX);
    }
    let mut runs = ratio.max(0.0).ceil() as u64;
    // The ceiling of the quotient can be off by one from the product form
    // n × profit − pre_run; settle on the product form so the two agree.
    if ratio < (1u64 << 52) as f64 {
        while cumulative_position(pre_run_total, profit_per_run, runs) < 0.0 {
            runs += 1;
        }
        while runs > 0 && cumulative_position(pre_run_total, profit_per_run, runs - 1) >= 0.0 {
            runs -= 1;
        }
    }
    Bep::Runs(runs)
}

/// Net position after `n_runs` deliveries; negative is a cumulative loss.
pub fn cumulative_position(pre_run_total: f64, profit_per_run: f64, n_runs: u64) -> f64 {
    n_runs as f64 * profit_per_run - pre_run_total
}

/// Normalise measured metrics to the delivery described by `policy`.
///
/// Rates, impulse, power and SLA compliance pass through unchanged; only the
/// runtime (and, when enabled, collision exposure) is replaced.
pub fn project(metrics: &RunMetrics, policy: &ProjectionPolicy) -> Result<RunMetrics, EconError> {
    policy.validate()?;
    let mut projected = *metrics;
    if let Some(target) = policy.target_runtime_hr {
        projected.runtime_hr = target;
    }
    if policy.distance_scale_maintenance {
        projected.collision_exposure =
            metrics.collision_exposure * policy.target_distance_m / policy.source_distance_m;
    }
    Ok(projected)
}

pub fn build_report(inputs: &EconInputs) -> Result<EconReport, EconError> {
    inputs.training.validate()?;
    inputs.metrics.validate()?;
    inputs.params.validate()?;
    if let Some(per_day) = inputs.deliveries_per_day {
        if !(per_day.is_finite() && per_day > 0.0) {
            return Err(EconError::invalid("deliveries_per_day", format!("must be > 0, got {per_day}")));
        }
    }
    let settle = inputs.settlement;
    let params = &inputs.params;

    let hardware = hardware_cost(&inputs.bom)?;
    let training = settle.cost(training_cost(&inputs.training, params, hardware));
    let hardware = settle.cost(hardware);
    // sums of settled items are exact multiples of the quantum; settling
    // again only strips floating-point noise
    let pre_run_total = settle.cost(hardware + training);

    let metrics = project(&inputs.metrics, &inputs.projection)?;
    let energy = settle.cost(energy_cost(&metrics, params));
    let maintenance = settle.cost(maintenance_cost(&metrics, params, hardware));
    let rescue = settle.cost(rescue_cost(params));
    let run_cost_total = settle.cost(energy + maintenance + rescue);
    let revenue = settle.revenue(revenue(&metrics, params));
    let profit = settle.revenue(profit_per_run(revenue, energy, maintenance, rescue));

    let bep = break_even(pre_run_total, profit);
    let cost_shares = if run_cost_total > 0.0 {
        CostShares {
            energy: energy / run_cost_total,
            maintenance: maintenance / run_cost_total,
            rescue: rescue / run_cost_total,
        }
    } else {
        CostShares {
            energy: 0.0,
            maintenance: 0.0,
            rescue: 0.0,
        }
    };
    let time_to_profitability_days = match (bep, inputs.deliveries_per_day) {
        (Bep::Runs(n), Some(per_day)) => Some(n as f64 / per_day),
        _ => None,
    };

    Ok(EconReport {
        hardware_cost: hardware,
        training_cost: training,
        pre_run_total,
        energy_cost: energy,
        maintenance_cost: maintenance,
        rescue_cost: rescue,
        run_cost_total,
        sla_compliance: metrics.sla_compliance,
        collision_rate: metrics.collision_rate,
        revenue,
        profit,
        bep,
        bep_ratio: break_even_ratio(pre_run_total, profit),
        cost_shares,
        time_to_profitability_days,
        settlement: settle,
    })
}
