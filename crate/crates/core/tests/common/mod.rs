//! Helpers shared by the integration tests: record builders and a naive
//! exact-arithmetic reference for the aggregator.
#![allow(dead_code)]

use costnav::analysis::Axis;
use costnav::econ::EconInputs;
use costnav::log::{EpisodeRecord, Termination};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A self-consistent record; energy follows from power and duration.
pub fn record(id: usize, termination: Termination, duration_s: f64, impulse: f64, power: f64) -> EpisodeRecord {
    EpisodeRecord {
        episode_id: format!("ep-{id:05}"),
        scenario_id: "synthetic".into(),
        policy_id: "synthetic".into(),
        seed: id as u64,
        termination,
        duration_s,
        distance_m: duration_s * 1.5,
        collision_impulse_ns: if termination == Termination::Collision { impulse } else { 0.0 },
        mean_power_w: power,
        max_power_w: power * 1.25,
        energy_wh: power * duration_s / 3600.0,
    }
}

pub fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

/// Round a rational to the nearest double, ties to even. Only the normal
/// range is handled, which is all the tests produce.
pub fn to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let negative = q.is_negative();
    let q = q.abs();
    let two = BigInt::from(2u8);
    let lo_m = BigInt::one() << 52usize;
    let hi_m = BigInt::one() << 53usize;
    let mut e = q.numer().bits() as i64 - q.denom().bits() as i64 - 52;
    let (m, num, den) = loop {
        let (num, den) = if e >= 0 {
            (q.numer().clone(), q.denom() << e as usize)
        } else {
            (q.numer() << (-e) as usize, q.denom().clone())
        };
        let m = &num / &den;
        if m < lo_m {
            e -= 1;
        } else if m >= hi_m {
            e += 1;
        } else {
            break (m, num, den);
        }
    };
    let rem = &num - &m * &den;
    let twice = &rem * &two;
    let mut m = m;
    if twice > den || (twice == den && (&m % &two) == BigInt::one()) {
        m += 1;
    }
    let mantissa: f64 = m.to_string().parse().unwrap();
    let value = mantissa * 2f64.powi(e as i32);
    if negative {
        -value
    } else {
        value
    }
}

/// Mean and sample deviation from exactly accumulated sums.
pub struct NaiveMoments {
    pub mean: f64,
    pub std: f64,
}

pub fn naive_moments(values: &[f64]) -> NaiveMoments {
    if values.is_empty() {
        return NaiveMoments { mean: 0.0, std: 0.0 };
    }
    let mut sum = BigRational::zero();
    let mut sum_sq = BigRational::zero();
    for &v in values {
        let q = exact(v);
        sum_sq += &q * &q;
        sum += q;
    }
    let n = values.len() as f64;
    let s = to_f64(&sum);
    let mean = s / n;
    let std = if values.len() < 2 {
        0.0
    } else {
        ((to_f64(&sum_sq) - s * s / n) / (n - 1.0)).max(0.0).sqrt()
    };
    NaiveMoments { mean, std }
}

/// Closed-form zero of profit along each axis, written out from the cost
/// model rather than through the library.
pub fn closed_form_root(i: &EconInputs, axis: Axis) -> f64 {
    let hw: f64 = i.bom.items.iter().map(|b| b.unit_cost * b.quantity as f64).sum();
    let hours = i.projection.target_runtime_hr.unwrap_or(i.metrics.runtime_hr);
    let p = &i.params;
    let m = &i.metrics;
    let energy = m.mean_power_w / 1000.0 * hours * p.c_elec;
    let wear_per_rate = p.c_shock * m.mean_collision_impulse * hw;
    let maintenance = wear_per_rate * m.collision_rate;
    let rescue = p.p_failure * p.c_human_op;
    let income = p.r_base * m.sla_compliance;
    match axis {
        Axis::CollisionRate => (income - energy - rescue) / wear_per_rate,
        Axis::SlaCompliance => (energy + maintenance + rescue) / p.r_base,
        Axis::MeanPower => (income - maintenance - rescue) * 1000.0 / (hours * p.c_elec),
        Axis::CShock => (income - energy - rescue) / (m.mean_collision_impulse * m.collision_rate * hw),
        Axis::RBase => (energy + maintenance + rescue) / m.sla_compliance,
    }
}
