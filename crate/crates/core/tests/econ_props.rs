use costnav::analysis::curve_for;
use costnav::econ::{
    break_even, build_report, cumulative_position, energy_cost, maintenance_cost, revenue, Bep, EconInputs,
    RunMetrics, Settlement,
};
use costnav::fixture::Baseline;
use proptest::prelude::*;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

fn exact_inputs() -> EconInputs {
    let mut inputs = Baseline::bundled().inputs();
    inputs.settlement = Settlement::Exact;
    inputs
}

fn metrics() -> impl Strategy<Value = RunMetrics> {
    (0.0..=1.0f64, 0.0..=1.0f64, 0.0..5000.0f64, 0.0..2000.0f64, 0.01..5.0f64).prop_map(|(sla, rate, j, p, hr)| {
        RunMetrics {
            sla_compliance: sla,
            collision_rate: rate,
            mean_collision_impulse: j,
            mean_power_w: p,
            runtime_hr: hr,
            collision_exposure: 1.0,
        }
    })
}

/// Smallest n with a non-negative cumulative position, by walking up from 0.
fn scan(pre: f64, profit: f64) -> u64 {
    let mut n = 0;
    while cumulative_position(pre, profit, n) < 0.0 {
        n += 1;
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bep_matches_linear_scan(pre in 0.0..5e4f64, profit in 0.5..500.0f64) {
        prop_assert_eq!(break_even(pre, profit), Bep::Runs(scan(pre, profit)));
    }

    #[test]
    fn bep_is_minimal(pre in 0.0..1e9f64, profit in 1e-3..1e3f64) {
        let Bep::Runs(n) = break_even(pre, profit) else { panic!("viable profit") };
        prop_assert!(cumulative_position(pre, profit, n) >= 0.0);
        prop_assert!(n == 0 || cumulative_position(pre, profit, n - 1) < 0.0);
    }

    #[test]
    fn non_positive_profit_is_not_viable(pre in 0.0..1e6f64, profit in -1e3..=0.0f64) {
        prop_assert_eq!(break_even(pre, profit), Bep::NotViable);
    }

    #[test]
    fn curve_crossing_is_the_break_even(pre in 0.0..5e4f64, profit in 0.5..500.0f64, extra in 0u64..50_000) {
        let bep = break_even(pre, profit).runs().unwrap();
        let curve = curve_for(pre, profit, bep + extra + 1).unwrap();
        prop_assert_eq!(curve.crossing(), Some(bep));
        prop_assert_eq!(curve.break_even, Bep::Runs(bep));
        let first = curve.points.iter().find(|(_, v)| *v >= 0.0).map(|(n, _)| *n).unwrap();
        prop_assert!(first >= bep);
        let before: Vec<_> = curve.points.iter().filter(|(n, _)| *n < bep).collect();
        prop_assert!(before.iter().all(|(_, v)| *v < 0.0));
        if curve.stride == 1 {
            prop_assert_eq!(first, bep);
        }
    }

    #[test]
    fn cost_components_are_linear(m in metrics(), k in 0.0..4.0f64) {
        let params = exact_inputs().params;
        let hw = 11_589.0;
        let mut scaled = m;
        scaled.mean_power_w *= k;
        prop_assert!(close(energy_cost(&scaled, &params), k * energy_cost(&m, &params)));
        let mut scaled = m;
        scaled.mean_collision_impulse *= k;
        prop_assert!(close(maintenance_cost(&scaled, &params, hw), k * maintenance_cost(&m, &params, hw)));
        prop_assert!(close(maintenance_cost(&m, &params, k * hw), k * maintenance_cost(&m, &params, hw)));
        let mut p2 = params;
        p2.r_base *= k;
        prop_assert!(close(revenue(&m, &p2), k * revenue(&m, &params)));
    }

    #[test]
    fn profit_is_monotone(a in 0.0..=1.0f64, b in 0.0..=1.0f64, s in 0.0..=1.0f64, settle_ledger in any::<bool>()) {
        let mut inputs = exact_inputs();
        if settle_ledger {
            inputs.settlement = Settlement::Ledger;
        }
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let at = |rate: f64, sla: f64| {
            let mut i = inputs.clone();
            i.metrics.collision_rate = rate;
            i.metrics.sla_compliance = sla;
            build_report(&i).unwrap()
        };
        let (r_lo, r_hi) = (at(lo, s), at(hi, s));
        prop_assert!(r_hi.profit <= r_lo.profit);
        prop_assert!(r_hi.bep >= r_lo.bep);
        let (r_lo, r_hi) = (at(s, lo), at(s, hi));
        prop_assert!(r_hi.profit >= r_lo.profit);
        prop_assert!(r_hi.bep <= r_lo.bep);
    }

    #[test]
    fn report_is_internally_consistent(m in metrics(), ledger in any::<bool>()) {
        let mut inputs = exact_inputs();
        inputs.metrics = m;
        inputs.projection.target_runtime_hr = None;
        if ledger {
            inputs.settlement = Settlement::Ledger;
        }
        let r = build_report(&inputs).unwrap();
        let slack = if ledger { 1e-9 } else { 1e-12 * r.revenue.abs().max(r.run_cost_total).max(1.0) };
        prop_assert!((r.run_cost_total - (r.energy_cost + r.maintenance_cost + r.rescue_cost)).abs() <= slack);
        prop_assert!((r.profit - (r.revenue - r.run_cost_total)).abs() <= slack);
        prop_assert!(r.energy_cost >= 0.0 && r.maintenance_cost >= 0.0);
        prop_assert_eq!(r.bep, break_even(r.pre_run_total, r.profit));
    }
}

#[test]
fn known_break_even_by_scan() {
    // a profitable counterfactual: 0.121 per run against the baseline pre-run total
    let pre = 27_827.02;
    assert_eq!(break_even(pre, 0.121), Bep::Runs(scan(pre, 0.121)));
    assert_eq!(break_even(pre, 0.121), Bep::Runs(229_976));
}

#[test]
fn zero_pre_run_cost_breaks_even_immediately() {
    assert_eq!(break_even(0.0, 1.0), Bep::Runs(0));
}

#[test]
fn huge_ratios_saturate() {
    assert_eq!(break_even(1e300, 1e-3), Bep::Runs(u64::MAX));
}
