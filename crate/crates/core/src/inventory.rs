//! Continuous-review (s,Q) analytics under Poisson demand.
//!
//! These are the single-location building blocks shared by both echelons:
//! expected shortage over a lead time, order fill rate, and the cycle-average
//! on-hand stock.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Reorder point `s` and batch size `Q`, in whatever unit the echelon counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SQPolicy {
    reorder_point: u32,
    order_quantity: u32,
}

impl SQPolicy {
    pub fn new(reorder_point: u32, order_quantity: u32) -> Result<Self> {
        if order_quantity == 0 {
            return Err(invalid("order_quantity", "must be >= 1"));
        }
        Ok(Self {
            reorder_point,
            order_quantity,
        })
    }

    pub fn reorder_point(&self) -> u32 {
        self.reorder_point
    }

    pub fn order_quantity(&self) -> u32 {
        self.order_quantity
    }
}

/// Poisson demand stream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoissonDemand {
    rate_per_day: f64,
}

impl PoissonDemand {
    pub fn new(rate_per_day: f64) -> Result<Self> {
        if !(rate_per_day.is_finite() && rate_per_day > 0.0) {
            return Err(invalid("rate_per_day", format!("must be > 0, got {rate_per_day}")));
        }
        Ok(Self { rate_per_day })
    }

    pub fn rate_per_day(&self) -> f64 {
        self.rate_per_day
    }

    /// Expected demand over `days`.
    pub fn mean_over(&self, days: f64) -> f64 {
        self.rate_per_day * days
    }
}

/// `E[(D - s)^+]` for `D ~ Poisson(mean_demand)`.
///
/// Evaluated through the finite complement
/// `E[(D - s)^+] = m - s + Σ_{k<s} (s - k) P(D = k)`, which needs no
/// truncation. Absolute error is a few ulps of `max(m, s)`.
pub fn expected_shortage(s: u32, mean_demand: f64) -> f64 {
    debug_assert!(mean_demand >= 0.0);
    if mean_demand <= 0.0 {
        return 0.0;
    }
    if s == 0 {
        return mean_demand;
    }
    let ln_m = mean_demand.ln();
    let mut ln_pmf = -mean_demand;
    let mut below = 0.0;
    for k in 0..s {
        if k > 0 {
            ln_pmf += ln_m - (k as f64).ln();
        }
        below += (s - k) as f64 * ln_pmf.exp();
    }
    (mean_demand - s as f64 + below).max(0.0)
}

/// Order fill rate `1 - ES/Q`, clamped to [0, 1].
pub fn fill_rate(expected_shortage: f64, order_quantity: u32) -> Result<f64> {
    if !(expected_shortage >= 0.0) {
        return Err(invalid(
            "expected_shortage",
            format!("must be >= 0, got {expected_shortage}"),
        ));
    }
    if order_quantity == 0 {
        return Err(invalid("order_quantity", "must be >= 1"));
    }
    Ok((1.0 - expected_shortage / order_quantity as f64).clamp(0.0, 1.0))
}

/// Cycle-average on-hand stock `Q/2 + s - E[N(τ)] + 1/2`.
///
/// May be negative for policies with heavy backordering; callers screen those
/// out through the fill-rate requirement.
pub fn mean_stock(policy: &SQPolicy, expected_leadtime_demand: f64) -> f64 {
    policy.order_quantity as f64 / 2.0 + policy.reorder_point as f64 - expected_leadtime_demand + 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Direct tail sum, truncated once terms drop below 1e-15 of the running
    /// total or past `s + 40 sqrt(m) + 40`.
    fn tail_sum(s: u32, m: f64) -> f64 {
        let cap = (s as f64 + 40.0 * m.sqrt() + 40.0).ceil() as u64;
        let mut pmf = (-m).exp();
        let mut total = 0.0;
        for k in 1..=cap {
            pmf *= m / k as f64;
            if k > s as u64 {
                let term = (k - s as u64) as f64 * pmf;
                total += term;
                if total > 0.0 && term < 1e-15 * total && (k as f64) > m {
                    break;
                }
            }
        }
        total
    }

    #[test]
    fn zero_reorder_point_returns_mean() {
        assert_relative_eq!(expected_shortage(0, 1.0), 1.0);
        assert_eq!(expected_shortage(3, 0.0), 0.0);
    }

    #[test]
    fn reference_values() {
        assert_relative_eq!(expected_shortage(2, 1.0), 0.103_638_323_514_326_99, max_relative = 1e-12);
        assert!(expected_shortage(10, 0.01) < 1e-12);
    }

    #[test]
    fn closed_form_matches_tail_sum_on_grid() {
        for s in 0..=60u32 {
            for i in 0..=60 {
                let m = 0.5 * i as f64;
                let a = expected_shortage(s, m);
                let b = tail_sum(s, m);
                assert!((a - b).abs() < 1e-10, "s={s} m={m}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn huge_mean_tends_to_m_minus_s() {
        let es = expected_shortage(10, 5_000.0);
        assert_relative_eq!(es, 4_990.0, max_relative = 1e-12);
    }

    #[test]
    fn fill_rate_cases() {
        assert_eq!(fill_rate(0.0, 4).unwrap(), 1.0);
        assert_relative_eq!(fill_rate(0.103_638_323_514_326_99, 4).unwrap(), 0.974_090_419_121_418_2, max_relative = 1e-12);
        assert_eq!(fill_rate(4.0, 4).unwrap(), 0.0);
        assert_eq!(fill_rate(7.0, 4).unwrap(), 0.0);
        assert!(fill_rate(-0.1, 4).is_err());
        assert!(fill_rate(f64::NAN, 4).is_err());
        assert!(fill_rate(0.1, 0).is_err());
    }

    #[test]
    fn mean_stock_cases() {
        let p = SQPolicy::new(3, 4).unwrap();
        assert_eq!(mean_stock(&p, 0.0), 5.5);
        assert_eq!(mean_stock(&SQPolicy::new(4, 20).unwrap(), 2.0), 12.5);
        assert_eq!(mean_stock(&SQPolicy::new(4, 4).unwrap(), 1.3) - mean_stock(&p, 1.3), 1.0);
    }

    #[test]
    fn policy_and_demand_validation() {
        assert!(SQPolicy::new(0, 0).is_err());
        assert!(SQPolicy::new(0, 1).is_ok());
        assert!(PoissonDemand::new(0.0).is_err());
        assert_relative_eq!(PoissonDemand::new(0.5).unwrap().mean_over(4.0), 2.0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn shortage_monotone(s in 0u32..40, m in 0.0..30.0f64, dm in 0.0..5.0f64) {
                let base = expected_shortage(s, m);
                prop_assert!(expected_shortage(s + 1, m) <= base + 1e-12);
                prop_assert!(expected_shortage(s, m + dm) >= base - 1e-12);
            }

            #[test]
            fn fill_rate_monotone_in_s(s in 0u32..40, m in 0.0..30.0f64, q in 1u32..30) {
                let a = fill_rate(expected_shortage(s, m), q).unwrap();
                let b = fill_rate(expected_shortage(s + 1, m), q).unwrap();
                prop_assert!(b >= a - 1e-12);
            }

            #[test]
            fn closed_form_vs_tail_sum(s in 0u32..=60, m in 0.0..=30.0f64) {
                prop_assert!((expected_shortage(s, m) - tail_sum(s, m)).abs() < 1e-10);
            }
        }
    }
}
