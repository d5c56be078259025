mod common;

use common::{exact, naive_moments, record, to_f64};
use costnav::log::{aggregate, aggregate_with, AggregateOptions, EpisodeRecord, ExactSum, Termination};
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn termination() -> impl Strategy<Value = Termination> {
    prop_oneof![Just(Termination::Arrive), Just(Termination::Collision), Just(Termination::Timeout)]
}

/// Magnitudes spread over many binades so that naive summation would lose bits.
fn wide() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), 1e-3..1.0f64, 1.0..1e3f64, 1e3..1e7f64]
}

fn episode() -> impl Strategy<Value = (Termination, f64, f64, f64)> {
    (termination(), 1.0..1200.0f64, wide(), wide())
}

fn records() -> impl Strategy<Value = Vec<EpisodeRecord>> {
    prop::collection::vec(episode(), 1..120).prop_map(|eps| {
        eps.into_iter()
            .enumerate()
            .map(|(i, (t, d, j, p))| {
                let d = if t == Termination::Timeout { d.max(600.0) } else { d };
                record(i, t, d, j, p)
            })
            .collect()
    })
}

fn column(records: &[EpisodeRecord], f: impl Fn(&EpisodeRecord) -> f64) -> Vec<f64> {
    records.iter().map(f).collect()
}

fn public_fields(records: &[EpisodeRecord]) -> serde_json::Value {
    serde_json::to_value(aggregate(records).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn moments_match_exact_rational_reference(rs in records()) {
        let s = aggregate(&rs).unwrap();
        let n = rs.len();
        let count = |t| rs.iter().filter(|r| r.termination == t).count();
        prop_assert_eq!(s.n_episodes as usize, n);
        prop_assert_eq!(s.arrival_count as usize, count(Termination::Arrive));
        prop_assert_eq!(s.collision_count as usize, count(Termination::Collision));
        prop_assert_eq!(s.timeout_count as usize, count(Termination::Timeout));
        let on_time = rs.iter().filter(|r| r.termination == Termination::Arrive && r.duration_s <= 600.0).count();
        prop_assert_eq!(s.sla_compliance, on_time as f64 / n as f64);
        prop_assert!((s.arrival_rate + s.collision_rate + s.timeout_rate - 1.0).abs() <= 1e-12);

        let hits: Vec<f64> = rs.iter()
            .filter(|r| r.termination == Termination::Collision)
            .map(|r| r.collision_impulse_ns)
            .collect();
        let cond = naive_moments(&hits);
        prop_assert_eq!(s.impulse_mean.to_bits(), cond.mean.to_bits());
        prop_assert_eq!(s.impulse_std.to_bits(), cond.std.to_bits());
        let all = naive_moments(&column(&rs, |r| r.collision_impulse_ns));
        prop_assert_eq!(s.impulse_mean_all.to_bits(), all.mean.to_bits());
        prop_assert_eq!(s.impulse_std_all.to_bits(), all.std.to_bits());
        let power = naive_moments(&column(&rs, |r| r.mean_power_w));
        prop_assert_eq!(s.power_mean.to_bits(), power.mean.to_bits());
        prop_assert_eq!(s.power_std.to_bits(), power.std.to_bits());
        let max_power = naive_moments(&column(&rs, |r| r.max_power_w));
        prop_assert_eq!(s.max_power_mean.to_bits(), max_power.mean.to_bits());
        prop_assert_eq!(s.max_power_std.to_bits(), max_power.std.to_bits());
        prop_assert_eq!(s.duration_mean.to_bits(), naive_moments(&column(&rs, |r| r.duration_s)).mean.to_bits());
        prop_assert_eq!(s.distance_mean.to_bits(), naive_moments(&column(&rs, |r| r.distance_m)).mean.to_bits());
    }

    #[test]
    fn shard_merge_equals_concatenation(rs in records(), cut in 0.0..1.0f64) {
        prop_assume!(rs.len() >= 2);
        let k = ((rs.len() - 1) as f64 * cut) as usize + 1;
        let merged = aggregate(&rs[..k]).unwrap().merge(&aggregate(&rs[k..]).unwrap()).unwrap();
        prop_assert_eq!(serde_json::to_value(&merged).unwrap(), public_fields(&rs));
    }

    #[test]
    fn order_does_not_matter(rs in records(), seed in any::<u64>()) {
        let mut shuffled = rs.clone();
        // cheap deterministic permutation
        let n = shuffled.len();
        let mut state = seed | 1;
        for i in (1..n).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        prop_assert_eq!(public_fields(&shuffled), public_fields(&rs));
    }

    #[test]
    fn exact_sum_is_correctly_rounded(xs in prop::collection::vec(prop_oneof![-1e16..1e16f64, -1.0..1.0f64, -1e-8..1e-8f64], 0..200)) {
        let mut acc = ExactSum::new();
        let mut reference = BigRational::zero();
        for &x in &xs {
            acc.add(x);
            reference += exact(x);
        }
        prop_assert_eq!(acc.value().to_bits(), to_f64(&reference).to_bits());
    }
}

#[test]
fn cancellation_is_exact() {
    let mut acc = ExactSum::new();
    for x in [1e16, 1.0, -1e16, 1.0] {
        acc.add(x);
    }
    assert_eq!(acc.value(), 2.0);
}

#[test]
fn late_arrivals_break_the_sla_only() {
    let rs = vec![
        record(0, Termination::Arrive, 300.0, 0.0, 100.0),
        record(1, Termination::Arrive, 700.0, 0.0, 100.0),
        record(2, Termination::Collision, 50.0, 40.0, 100.0),
        record(3, Termination::Timeout, 600.0, 0.0, 100.0),
    ];
    let s = aggregate(&rs).unwrap();
    assert_eq!(s.arrival_rate, 0.5);
    assert_eq!(s.sla_compliance, 0.25);
    assert_eq!(s.impulse_mean, 40.0);
    assert_eq!(s.impulse_mean_all, 10.0);
    let lax = aggregate_with(&rs, AggregateOptions { sla_timeout_s: 800.0 }).unwrap();
    assert_eq!(lax.sla_compliance, 0.5);
    assert!(s.merge(&lax).is_err());
}

#[test]
fn empty_log_is_an_error() {
    assert!(aggregate(&[]).is_err());
}
