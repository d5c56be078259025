use serde::{Deserialize, Serialize};

use super::exact::ExactSum;
use super::record::{EpisodeRecord, Termination};
use super::LogError;
use crate::econ::{RunMetrics, TrainingStats};

/// Count, sum and sum of squares of one quantity, kept exactly.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Moments {
    count: u64,
    sum: ExactSum,
    sum_sq: ExactSum,
}

impl Moments {
    pub fn push(&mut self, value: f64) {
        self.count += 1;
        self.sum.add(value);
        self.sum_sq.add_square(value);
    }

    pub fn merge(&mut self, other: &Moments) {
        self.count += other.count;
        self.sum.merge(&other.sum);
        self.sum_sq.merge(&other.sum_sq);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Mean, or 0 when empty.
    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.sum.value() / self.count as f64
        }
    }

    /// Sample standard deviation (n − 1 denominator), or 0 below two samples.
    pub fn std(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        let sum = self.sum.value();
        let var = (self.sum_sq.value() - sum * sum / n) / (n - 1.0);
        var.max(0.0).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateOptions {
    /// Arrivals later than this do not count toward SLA compliance, seconds.
    pub sla_timeout_s: f64,
}

impl Default for AggregateOptions {
    fn default() -> Self {
        AggregateOptions { sla_timeout_s: 600.0 }
    }
}

/// Mergeable sufficient statistics over a set of episodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Accumulator {
    opts: AggregateOptions,
    arrivals: u64,
    on_time_arrivals: u64,
    collisions: u64,
    timeouts: u64,
    impulse: Moments,
    impulse_all: Moments,
    power: Moments,
    max_power: Moments,
    duration: Moments,
    distance: Moments,
}

impl Accumulator {
    pub fn new(opts: AggregateOptions) -> Self {
        Accumulator {
            opts,
            arrivals: 0,
            on_time_arrivals: 0,
            collisions: 0,
            timeouts: 0,
            impulse: Moments::default(),
            impulse_all: Moments::default(),
            power: Moments::default(),
            max_power: Moments::default(),
            duration: Moments::default(),
            distance: Moments::default(),
        }
    }

    pub fn push(&mut self, record: &EpisodeRecord) {
        match record.termination {
            Termination::Arrive => {
                self.arrivals += 1;
                if record.duration_s <= self.opts.sla_timeout_s {
                    self.on_time_arrivals += 1;
                }
            }
            Termination::Collision => {
                self.collisions += 1;
                self.impulse.push(record.collision_impulse_ns);
            }
            Termination::Timeout => self.timeouts += 1,
        }
        self.impulse_all.push(record.collision_impulse_ns);
        self.power.push(record.mean_power_w);
        self.max_power.push(record.max_power_w);
        self.duration.push(record.duration_s);
        self.distance.push(record.distance_m);
    }

    pub fn merge(&mut self, other: &Accumulator) -> Result<(), LogError> {
        if self.opts != other.opts {
            return Err(LogError::Aggregate(
                "cannot merge summaries aggregated with different SLA timeouts".into(),
            ));
        }
        self.arrivals += other.arrivals;
        self.on_time_arrivals += other.on_time_arrivals;
        self.collisions += other.collisions;
        self.timeouts += other.timeouts;
        self.impulse.merge(&other.impulse);
        self.impulse_all.merge(&other.impulse_all);
        self.power.merge(&other.power);
        self.max_power.merge(&other.max_power);
        self.duration.merge(&other.duration);
        self.distance.merge(&other.distance);
        Ok(())
    }

    pub fn len(&self) -> u64 {
        self.arrivals + self.collisions + self.timeouts
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn summary(&self) -> Result<EvaluationSummary, LogError> {
        if self.is_empty() {
            return Err(LogError::Aggregate("no episodes to aggregate".into()));
        }
        let n = self.len() as f64;
        Ok(EvaluationSummary {
            n_episodes: self.len(),
            arrival_count: self.arrivals,
            collision_count: self.collisions,
            timeout_count: self.timeouts,
            on_time_arrival_count: self.on_time_arrivals,
            arrival_rate: self.arrivals as f64 / n,
            collision_rate: self.collisions as f64 / n,
            timeout_rate: self.timeouts as f64 / n,
            sla_compliance: self.on_time_arrivals as f64 / n,
            impulse_mean: self.impulse.mean(),
            impulse_std: self.impulse.std(),
            impulse_mean_all: self.impulse_all.mean(),
            impulse_std_all: self.impulse_all.std(),
            power_mean: self.power.mean(),
            power_std: self.power.std(),
            max_power_mean: self.max_power.mean(),
            max_power_std: self.max_power.std(),
            duration_mean: self.duration.mean(),
            distance_mean: self.distance.mean(),
            sla_timeout_s: self.opts.sla_timeout_s,
            stats: self.clone(),
        })
    }
}

/// Aggregated rates and moments of an episode log.
///
/// Impulse moments without a suffix are conditional on a collision; the
/// `_all` variants include the zero impulse of non-colliding episodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationSummary {
    pub n_episodes: u64,
    pub arrival_count: u64,
    pub collision_count: u64,
    pub timeout_count: u64,
    pub on_time_arrival_count: u64,
    pub arrival_rate: f64,
    pub collision_rate: f64,
    pub timeout_rate: f64,
    pub sla_compliance: f64,
    pub impulse_mean: f64,
    pub impulse_std: f64,
    pub impulse_mean_all: f64,
    pub impulse_std_all: f64,
    pub power_mean: f64,
    pub power_std: f64,
    pub max_power_mean: f64,
    pub max_power_std: f64,
    pub duration_mean: f64,
    pub distance_mean: f64,
    pub sla_timeout_s: f64,
    #[serde(skip)]
    stats: Accumulator,
}

impl EvaluationSummary {
    /// Combine two shards; equal to aggregating the concatenated records.
    pub fn merge(&self, other: &EvaluationSummary) -> Result<EvaluationSummary, LogError> {
        let mut stats = self.stats.clone();
        stats.merge(&other.stats)?;
        stats.summary()
    }
}

pub fn aggregate(records: &[EpisodeRecord]) -> Result<EvaluationSummary, LogError> {
    aggregate_with(records, AggregateOptions::default())
}

pub fn aggregate_with(records: &[EpisodeRecord], opts: AggregateOptions) -> Result<EvaluationSummary, LogError> {
    let mut acc = Accumulator::new(opts);
    records.iter().for_each(|r| acc.push(r));
    acc.summary()
}

/// Per-run metrics as consumed by the economics engine. Runtime is the mean
/// episode duration in hours.
pub fn to_run_metrics(summary: &EvaluationSummary) -> RunMetrics {
    RunMetrics {
        sla_compliance: summary.sla_compliance,
        collision_rate: summary.collision_rate,
        mean_collision_impulse: summary.impulse_mean,
        mean_power_w: summary.power_mean,
        runtime_hr: summary.duration_mean / 3600.0,
        collision_exposure: 1.0,
    }
}

pub fn training_stats_from_log(records: &[EpisodeRecord]) -> Result<TrainingStats, LogError> {
    let summary = aggregate(records)?;
    Ok(TrainingStats {
        episodes: summary.n_episodes,
        collision_rate: summary.collision_rate,
        mean_collision_impulse: summary.impulse_mean,
        mean_episode_time_s: summary.duration_mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(termination: Termination, duration: f64, impulse: f64, power: f64) -> EpisodeRecord {
        EpisodeRecord {
            episode_id: "e".into(),
            scenario_id: "s".into(),
            policy_id: "p".into(),
            seed: 0,
            termination,
            duration_s: duration,
            distance_m: 20.0,
            collision_impulse_ns: impulse,
            mean_power_w: power,
            max_power_w: power + 100.0,
            energy_wh: power * duration / 3600.0,
        }
    }

    #[test]
    fn rates_from_baseline_mix_counts() {
        let mut records = Vec::new();
        records.extend((0..54).map(|_| rec(Termination::Collision, 300.0, 501.7, 551.7)));
        records.extend((0..43).map(|_| rec(Termination::Arrive, 300.0, 0.0, 551.7)));
        records.extend((0..3).map(|_| rec(Termination::Timeout, 600.0, 0.0, 551.7)));
        let s = aggregate(&records).unwrap();
        assert_eq!((s.collision_rate, s.arrival_rate, s.timeout_rate), (0.54, 0.43, 0.03));
        assert!((s.arrival_rate + s.collision_rate + s.timeout_rate - 1.0).abs() < 1e-12);
        assert!((s.impulse_mean - 501.7).abs() < 1e-9);
        assert_eq!(s.impulse_std, 0.0);
        assert!((s.impulse_mean_all - 501.7 * 0.54).abs() < 1e-9);
    }

    #[test]
    fn single_arrival() {
        let s = aggregate(&[rec(Termination::Arrive, 10.0, 0.0, 300.0)]).unwrap();
        assert_eq!(s.arrival_rate, 1.0);
        assert_eq!(s.collision_count, 0);
        assert_eq!((s.impulse_mean, s.impulse_std), (0.0, 0.0));
        assert_eq!(s.power_std, 0.0);
        let m = to_run_metrics(&s);
        assert_eq!(m.collision_rate, 0.0);
        assert_eq!(m.sla_compliance, 1.0);
    }

    #[test]
    fn empty_log_is_an_error() {
        assert!(aggregate(&[]).is_err());
        assert!(training_stats_from_log(&[]).is_err());
    }

    #[test]
    fn late_arrivals_earn_nothing() {
        let records = [
            rec(Termination::Arrive, 590.0, 0.0, 300.0),
            rec(Termination::Arrive, 610.0, 0.0, 300.0),
        ];
        let s = aggregate(&records).unwrap();
        assert_eq!(s.arrival_rate, 1.0);
        assert_eq!(s.sla_compliance, 0.5);
        let relaxed = aggregate_with(&records, AggregateOptions { sla_timeout_s: 900.0 }).unwrap();
        assert_eq!(relaxed.sla_compliance, 1.0);
        assert!(s.merge(&relaxed).is_err());
    }

    #[test]
    fn sample_std_uses_n_minus_one() {
        let records: Vec<_> = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]
            .iter()
            .map(|&p| rec(Termination::Arrive, 10.0, 0.0, p))
            .collect();
        let s = aggregate(&records).unwrap();
        assert_eq!(s.power_mean, 5.0);
        // population variance 4, sample variance 32 / 7
        assert!((s.power_std - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn training_stats_all_arrivals() {
        let records: Vec<_> = (0..5).map(|_| rec(Termination::Arrive, 100.0, 0.0, 300.0)).collect();
        let t = training_stats_from_log(&records).unwrap();
        assert_eq!(t.episodes, 5);
        assert_eq!(t.collision_rate, 0.0);
        assert_eq!(t.mean_episode_time_s, 100.0);
    }
}
