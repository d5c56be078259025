//! Ledger settlement and presentation of currency amounts.

use serde::{Deserialize, Serialize};

/// One cent.
pub const CENT: f64 = 0.01;
/// One mill, a tenth of a cent. Expected revenue is quoted at this precision.
pub const MILL: f64 = 0.001;

/// How line items are settled before they are composed into totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Settlement {
    /// Cost items are settled to cents and revenue to mills, then totals are
    /// exact sums of the settled items. Matches published cost ledgers.
    #[default]
    Ledger,
    /// No rounding anywhere; every value is the raw floating-point result.
    Exact,
}

impl Settlement {
    pub fn cost(self, amount: f64) -> f64 {
        match self {
            Settlement::Ledger => round_half_even(amount, CENT),
            Settlement::Exact => amount,
        }
    }

    pub fn revenue(self, amount: f64) -> f64 {
        match self {
            Settlement::Ledger => round_half_even(amount, MILL),
            Settlement::Exact => amount,
        }
    }
}

impl std::str::FromStr for Settlement {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ledger" => Ok(Settlement::Ledger),
            "exact" => Ok(Settlement::Exact),
            other => Err(format!("unknown settlement `{other}` (expected ledger or exact)")),
        }
    }
}

/// Round `amount` to a multiple of `quantum`, ties to even.
///
/// A decimal tie such as 2.675 is stored a hair off the midpoint, so ties are
/// detected within a few ulps of the scaled value.
pub fn round_half_even(amount: f64, quantum: f64) -> f64 {
    if !amount.is_finite() || quantum <= 0.0 {
        return amount;
    }
    // Dividing by an integral scale lands on the nearest double to the
    // decimal result, so 3140 / 100 is exactly the literal 31.40.
    let scale = (1.0 / quantum).round();
    let integral_scale = scale >= 1.0 && ((1.0 / quantum) - scale).abs() < 1e-9;
    let scaled = if integral_scale { amount * scale } else { amount / quantum };
    let tol = 8.0 * f64::EPSILON * scaled.abs().max(1.0);
    let floor = scaled.floor();
    let frac = scaled - floor;
    let units = if (frac - 0.5).abs() <= tol {
        if floor.rem_euclid(2.0) == 0.0 {
            floor
        } else {
            floor + 1.0
        }
    } else {
        scaled.round()
    };
    if integral_scale {
        units / scale
    } else {
        units * quantum
    }
}

/// Whole dollars with thousands separators: `27,827`.
pub fn whole_dollars(amount: f64) -> String {
    let rounded = round_half_even(amount, 1.0);
    let sign = if rounded < 0.0 { "-" } else { "" };
    format!("{sign}{}", group_thousands(rounded.abs() as u64))
}

/// Fixed decimals, no grouping: `31.40`, `-30.009`.
pub fn fixed(amount: f64, decimals: usize) -> String {
    let quantum = 10f64.powi(-(decimals as i32));
    let rounded = round_half_even(amount, quantum);
    // avoid "-0.00"
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    format!("{rounded:.decimals$}")
}

pub fn group_thousands(value: u64) -> String {
    let digits = value.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}
