//! Analytical model of the ground → parking orbit → constellation plane
//! supply chain.
//!
//! Evaluation is feed-forward: plane demand, parking demand, parking lead
//! time and shortages, parking availability, the probability of being served
//! by the i-th closest parking orbit, and finally the plane lead-time mixture
//! and its shortages and stock.

use std::f64::consts::TAU;
use std::sync::atomic::{AtomicBool, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::inventory::{self, SQPolicy};
use crate::leadtime::LeadTimeDistribution;
use crate::orbits::{CircularOrbit, EarthConstants, TransferGeometry};
use crate::scenario::Scenario;

/// Below this many planes the merged plane-order stream is a poor Poisson approximation.
pub const SUPERPOSITION_MIN_PLANES: u32 = 20;

fn default_days_per_year() -> f64 {
    365.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstellationConfig {
    pub h_plane_km: f64,
    pub inclination_deg: f64,
    pub n_plane: u32,
    pub n_sats: u32,
    pub lambda_sat_per_year: f64,
    #[serde(default = "default_days_per_year")]
    pub n_days_per_year: f64,
}

impl ConstellationConfig {
    pub fn validate(&self) -> Result<()> {
        CircularOrbit::new(self.h_plane_km, self.inclination_deg).map_err(|e| match e {
            Error::InvalidParameter { reason, .. } => invalid("constellation.h_plane_km/inclination_deg", reason),
            other => other,
        })?;
        if self.n_plane == 0 {
            return Err(invalid("constellation.n_plane", "must be >= 1"));
        }
        if self.n_sats == 0 {
            return Err(invalid("constellation.n_sats", "must be >= 1"));
        }
        if !(self.lambda_sat_per_year.is_finite() && self.lambda_sat_per_year >= 0.0) {
            return Err(invalid(
                "constellation.lambda_sat_per_year",
                format!("must be >= 0, got {}", self.lambda_sat_per_year),
            ));
        }
        if !(self.n_days_per_year.is_finite() && self.n_days_per_year > 0.0) {
            return Err(invalid("constellation.n_days_per_year", "must be > 0"));
        }
        Ok(())
    }

    pub fn plane_orbit(&self) -> Result<CircularOrbit> {
        CircularOrbit::new(self.h_plane_km, self.inclination_deg)
    }
}

/// Decision vector. Parking quantities are multiples of `q_plane`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpareStrategy {
    pub n_parking: u32,
    pub h_parking_km: f64,
    pub q_plane: u32,
    pub s_plane: u32,
    pub k_q_parking: u32,
    pub k_s_parking: u32,
}

impl SpareStrategy {
    pub fn validate(&self, cfg: &ConstellationConfig) -> Result<()> {
        for (name, v) in [
            ("strategy.n_parking", self.n_parking),
            ("strategy.q_plane", self.q_plane),
            ("strategy.k_q_parking", self.k_q_parking),
        ] {
            if v == 0 {
                return Err(invalid(name, "must be >= 1"));
            }
        }
        if !(self.h_parking_km.is_finite() && self.h_parking_km > 0.0) {
            return Err(invalid("strategy.h_parking_km", "must be > 0"));
        }
        if self.h_parking_km >= cfg.h_plane_km {
            return Err(invalid(
                "strategy.h_parking_km",
                format!(
                    "parking altitude {} km must be below the constellation altitude {} km",
                    self.h_parking_km, cfg.h_plane_km
                ),
            ));
        }
        Ok(())
    }

    /// Parking batch size in satellites.
    pub fn q_parking(&self) -> u32 {
        self.k_q_parking * self.q_plane
    }

    /// Parking reorder point in satellites.
    pub fn s_parking(&self) -> u32 {
        self.k_s_parking * self.q_plane
    }

    pub fn plane_policy(&self) -> SQPolicy {
        SQPolicy::new(self.s_plane, self.q_plane).expect("q_plane validated >= 1")
    }

    /// Parking policy in batch units.
    pub fn parking_policy(&self) -> SQPolicy {
        SQPolicy::new(self.k_s_parking, self.k_q_parking).expect("k_q validated >= 1")
    }

    pub fn parking_orbit(&self, cfg: &ConstellationConfig) -> Result<CircularOrbit> {
        CircularOrbit::new(self.h_parking_km, cfg.inclination_deg)
    }

    /// `[N_parking, h_parking, Q_plane, s_plane, k_Q, k_s]`.
    pub fn as_vector(&self) -> [f64; 6] {
        [
            self.n_parking as f64,
            self.h_parking_km,
            self.q_plane as f64,
            self.s_plane as f64,
            self.k_q_parking as f64,
            self.k_s_parking as f64,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaunchParams {
    pub mu_launch_days: f64,
    pub pt_launch_days: f64,
    pub cap_launch: u32,
}

impl LaunchParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu_launch_days.is_finite() && self.mu_launch_days > 0.0) {
            return Err(invalid("launch.mu_launch_days", "must be > 0"));
        }
        if !(self.pt_launch_days.is_finite() && self.pt_launch_days >= 0.0) {
            return Err(invalid("launch.pt_launch_days", "must be >= 0"));
        }
        if self.cap_launch == 0 {
            return Err(invalid("launch.cap_launch", "must be >= 1"));
        }
        Ok(())
    }
}

/// P(i-th closest parking orbit supplies the order), i = 1..N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupplyProbabilities {
    /// Values straight from the binomial sum; they add up to `1 - (1 - P_av)^N`.
    pub raw: Vec<f64>,
    /// `raw` rescaled to a proper distribution.
    pub normalized: Vec<f64>,
    /// Probability that every parking orbit is stocked out, dropped by the rescaling.
    pub neglected_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyMetrics {
    pub lambda_plane_per_day: f64,
    /// Batches per day per parking orbit; zero when there is no parking echelon.
    pub lambda_parking_batches_per_day: f64,
    pub p_av: f64,
    pub supply_probabilities: Vec<f64>,
    pub neglected_supply_mass: f64,
    pub es_plane: f64,
    pub es_parking_batches: f64,
    pub rho_plane: f64,
    pub rho_parking: f64,
    pub mean_stock_plane: f64,
    pub mean_stock_parking_batches: f64,
    pub mean_leadtime_plane_days: f64,
    pub mean_leadtime_parking_days: f64,
}

impl PolicyMetrics {
    /// `ρ_plane^N_plane · ρ_parking^N_parking`.
    pub fn fill_rate_product(&self, n_plane: u32, n_parking: u32) -> f64 {
        self.rho_plane.powi(n_plane as i32) * self.rho_parking.powi(n_parking as i32)
    }
}

static SUPERPOSITION_WARNED: AtomicBool = AtomicBool::new(false);

/// Failures per plane per day.
pub fn plane_demand_rate(cfg: &ConstellationConfig) -> f64 {
    cfg.n_sats as f64 * cfg.lambda_sat_per_year / cfg.n_days_per_year
}

/// Plane orders (batches) per day arriving at each parking orbit.
pub fn parking_demand_rate(cfg: &ConstellationConfig, strategy: &SpareStrategy) -> f64 {
    if cfg.n_plane < SUPERPOSITION_MIN_PLANES && !SUPERPOSITION_WARNED.swap(true, Ordering::Relaxed) {
        log::warn!(
            "n_plane = {} < {}: merged plane orders are only approximately Poisson",
            cfg.n_plane,
            SUPERPOSITION_MIN_PLANES
        );
    }
    cfg.n_plane as f64 * plane_demand_rate(cfg) / strategy.q_plane as f64 / strategy.n_parking as f64
}

/// Ground-to-parking lead time: processing time plus an exponential launch-window wait.
pub fn parking_leadtime(lp: &LaunchParams) -> Result<LeadTimeDistribution> {
    LeadTimeDistribution::shifted_exponential(lp.pt_launch_days, lp.mu_launch_days)
}

/// Expected backordered batches per parking replenishment cycle.
pub fn parking_expected_shortage(
    cfg: &ConstellationConfig,
    strategy: &SpareStrategy,
    lp: &LaunchParams,
) -> Result<f64> {
    let rate = parking_demand_rate(cfg, strategy);
    let leadtime = parking_leadtime(lp)?;
    expected_shortage_over(&leadtime, strategy.k_s_parking, rate)
}

/// `∫ ES_τ(s) f(τ) dτ` with Poisson(rate·τ) lead-time demand.
pub fn expected_shortage_over(leadtime: &LeadTimeDistribution, s: u32, rate_per_day: f64) -> Result<f64> {
    if rate_per_day <= 0.0 {
        return Ok(0.0);
    }
    leadtime.expect(|tau| inventory::expected_shortage(s, rate_per_day * tau))
}

/// Probability that a visited parking orbit has a batch on hand.
pub fn parking_availability(es_parking: f64, k_q: u32) -> Result<f64> {
    if k_q == 0 {
        return Err(invalid("k_q_parking", "must be >= 1"));
    }
    if !(0.0..=k_q as f64).contains(&es_parking) {
        return Err(invalid(
            "es_parking",
            format!("must lie in [0, {k_q}], got {es_parking}"),
        ));
    }
    Ok(1.0 - es_parking / k_q as f64)
}

fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Probability that the i-th closest parking orbit is the closest one with stock.
pub fn supply_probabilities(p_av: f64, n_parking: u32) -> Result<SupplyProbabilities> {
    if !(p_av > 0.0 && p_av <= 1.0) {
        return Err(invalid("p_av", format!("must lie in (0, 1], got {p_av}")));
    }
    if n_parking == 0 {
        return Err(invalid("n_parking", "must be >= 1"));
    }
    let n = n_parking;
    let q = 1.0 - p_av;
    let raw: Vec<f64> = (1..=n)
        .map(|i| {
            (1..=n - i + 1)
                .map(|k| binomial(n - i, k - 1) * p_av.powi(k as i32) * q.powi((n - k) as i32))
                .sum()
        })
        .collect();
    let total: f64 = raw.iter().sum();
    let normalized = raw.iter().map(|p| p / total).collect();
    Ok(SupplyProbabilities {
        raw,
        normalized,
        neglected_mass: q.powi(n as i32),
    })
}

/// Parking-to-plane lead time: a mixture of uniform drift-wait windows, one per
/// parking orbit ranked by closeness, weighted by the supply probabilities.
pub fn plane_leadtime(
    cfg: &ConstellationConfig,
    strategy: &SpareStrategy,
    p_av: f64,
    consts: &EarthConstants,
) -> Result<LeadTimeDistribution> {
    let geometry = TransferGeometry::new(&strategy.parking_orbit(cfg)?, &cfg.plane_orbit()?, consts)?;
    let probs = supply_probabilities(p_av, strategy.n_parking)?;
    Ok(plane_leadtime_from(&geometry, strategy.n_parking, probs.normalized))
}

pub(crate) fn plane_leadtime_from(
    geometry: &TransferGeometry,
    n_parking: u32,
    weights: Vec<f64>,
) -> LeadTimeDistribution {
    let step = TAU / n_parking as f64;
    let segments = (0..n_parking)
        .map(|i| {
            (
                geometry.lead_time_days(i as f64 * step),
                geometry.lead_time_days((i + 1) as f64 * step),
            )
        })
        .collect();
    LeadTimeDistribution::MixtureOfUniforms { weights, segments }
}

/// Expected backordered satellites per plane replenishment cycle.
pub fn plane_expected_shortage(
    cfg: &ConstellationConfig,
    strategy: &SpareStrategy,
    leadtime: &LeadTimeDistribution,
) -> Result<f64> {
    expected_shortage_over(leadtime, strategy.s_plane, plane_demand_rate(cfg))
}

pub fn plane_fill_rate(es_plane: f64, strategy: &SpareStrategy) -> Result<f64> {
    inventory::fill_rate(es_plane, strategy.q_plane)
}

pub fn parking_fill_rate(es_parking: f64, strategy: &SpareStrategy) -> Result<f64> {
    inventory::fill_rate(es_parking, strategy.k_q_parking)
}

/// Mean on-hand stock averaged over the lead-time law. The inner lead-time
/// demand is taken at its mean `rate·τ`, so the integral collapses to
/// `Q/2 + s + 1/2 - rate·E[τ]`.
pub fn mean_stock_over(policy: &SQPolicy, rate_per_day: f64, leadtime: &LeadTimeDistribution) -> f64 {
    inventory::mean_stock(policy, rate_per_day * leadtime.mean())
}

pub fn plane_mean_stock(cfg: &ConstellationConfig, strategy: &SpareStrategy, leadtime: &LeadTimeDistribution) -> f64 {
    mean_stock_over(&strategy.plane_policy(), plane_demand_rate(cfg), leadtime)
}

/// In batches of `q_plane`.
pub fn parking_mean_stock(cfg: &ConstellationConfig, strategy: &SpareStrategy, lp: &LaunchParams) -> Result<f64> {
    Ok(mean_stock_over(
        &strategy.parking_policy(),
        parking_demand_rate(cfg, strategy),
        &parking_leadtime(lp)?,
    ))
}

/// Full analytic evaluation of a multi-echelon strategy.
pub fn evaluate_strategy(scenario: &Scenario, strategy: &SpareStrategy) -> Result<PolicyMetrics> {
    let cfg = &scenario.constellation;
    strategy.validate(cfg)?;
    let lambda_plane = plane_demand_rate(cfg);
    let lambda_parking = parking_demand_rate(cfg, strategy);

    let parking_lt = parking_leadtime(&scenario.launch)?;
    let es_parking = expected_shortage_over(&parking_lt, strategy.k_s_parking, lambda_parking)?;
    let rho_parking = parking_fill_rate(es_parking, strategy)?;
    let stock_parking = mean_stock_over(&strategy.parking_policy(), lambda_parking, &parking_lt);
    // ES above k_Q means the parking orbit is essentially never stocked
    let p_av = parking_availability(es_parking.min(strategy.k_q_parking as f64), strategy.k_q_parking)?;
    if p_av <= 0.0 {
        return Err(Error::Infeasible(format!(
            "parking orbits are never available (ES_parking = {es_parking:.3} batches)"
        )));
    }

    let geometry = TransferGeometry::new(
        &strategy.parking_orbit(cfg)?,
        &cfg.plane_orbit()?,
        &scenario.earth,
    )?;
    let probs = supply_probabilities(p_av, strategy.n_parking)?;
    let plane_lt = plane_leadtime_from(&geometry, strategy.n_parking, probs.normalized.clone());
    let es_plane = expected_shortage_over(&plane_lt, strategy.s_plane, lambda_plane)?;
    let rho_plane = plane_fill_rate(es_plane, strategy)?;
    let stock_plane = mean_stock_over(&strategy.plane_policy(), lambda_plane, &plane_lt);

    Ok(PolicyMetrics {
        lambda_plane_per_day: lambda_plane,
        lambda_parking_batches_per_day: lambda_parking,
        p_av,
        supply_probabilities: probs.normalized,
        neglected_supply_mass: probs.neglected_mass,
        es_plane,
        es_parking_batches: es_parking,
        rho_plane,
        rho_parking,
        mean_stock_plane: stock_plane,
        mean_stock_parking_batches: stock_parking,
        mean_leadtime_plane_days: plane_lt.mean(),
        mean_leadtime_parking_days: parking_lt.mean(),
    })
}

/// Baseline without parking orbits: each plane is resupplied by its own
/// launch of `Q_plane` satellites.
pub fn evaluate_inplane_only(cfg: &ConstellationConfig, policy: &SQPolicy, lp: &LaunchParams) -> Result<PolicyMetrics> {
    if policy.order_quantity() > lp.cap_launch {
        return Err(Error::CapacityExceeded {
            quantity: policy.order_quantity(),
            capacity: lp.cap_launch,
        });
    }
    let lambda_plane = plane_demand_rate(cfg);
    let leadtime = parking_leadtime(lp)?;
    let es_plane = expected_shortage_over(&leadtime, policy.reorder_point(), lambda_plane)?;
    let rho_plane = inventory::fill_rate(es_plane, policy.order_quantity())?;
    Ok(PolicyMetrics {
        lambda_plane_per_day: lambda_plane,
        lambda_parking_batches_per_day: 0.0,
        p_av: 1.0,
        supply_probabilities: Vec::new(),
        neglected_supply_mass: 0.0,
        es_plane,
        es_parking_batches: 0.0,
        rho_plane,
        rho_parking: 1.0,
        mean_stock_plane: mean_stock_over(policy, lambda_plane, &leadtime),
        mean_stock_parking_batches: 0.0,
        mean_leadtime_plane_days: leadtime.mean(),
        mean_leadtime_parking_days: 0.0,
    })
}
