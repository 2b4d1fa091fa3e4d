//! Total expected spare strategy annual cost (TESSAC), in million US$/year.

use serde::{Deserialize, Serialize};

use crate::chain::{
    evaluate_strategy, parking_demand_rate, plane_demand_rate, ConstellationConfig, LaunchParams, PolicyMetrics,
    SpareStrategy,
};
use crate::error::{invalid, Error, Result};
use crate::inventory::SQPolicy;
use crate::orbits::{hohmann_transfer, TransferResult};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostParams {
    pub p_sat_musd: f64,
    pub p_holding_musd_per_sat_year: f64,
    pub p_launch_full_musd: f64,
    pub p_launch_unit_musd: f64,
    pub eps_maneuvering_musd_per_kg: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            p_sat_musd: 0.5,
            p_holding_musd_per_sat_year: 0.5,
            p_launch_full_musd: 47.6,
            p_launch_unit_musd: 10.0,
            eps_maneuvering_musd_per_kg: 0.001,
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("costs.p_sat_musd", self.p_sat_musd),
            ("costs.p_holding_musd_per_sat_year", self.p_holding_musd_per_sat_year),
            ("costs.p_launch_full_musd", self.p_launch_full_musd),
            ("costs.p_launch_unit_musd", self.p_launch_unit_musd),
            ("costs.eps_maneuvering_musd_per_kg", self.eps_maneuvering_musd_per_kg),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(name, format!("must be >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub manufacturing: f64,
    pub holding: f64,
    pub launch: f64,
    pub maneuvering: f64,
    pub tessac: f64,
}

impl CostBreakdown {
    pub fn new(manufacturing: f64, holding: f64, launch: f64, maneuvering: f64) -> Self {
        Self {
            manufacturing,
            holding,
            launch,
            maneuvering,
            tessac: manufacturing + holding + launch + maneuvering,
        }
    }
}

/// Cheaper of a dedicated full rocket and one unit launcher per satellite.
pub fn launch_price(quantity: u32, cp: &CostParams, cap_launch: u32) -> Result<f64> {
    if quantity == 0 {
        return Err(invalid("q_parking", "must be >= 1"));
    }
    if quantity > cap_launch {
        return Err(Error::CapacityExceeded {
            quantity,
            capacity: cap_launch,
        });
    }
    Ok(cp.p_launch_full_musd.min(quantity as f64 * cp.p_launch_unit_musd))
}

pub fn tessac(
    cfg: &ConstellationConfig,
    strategy: &SpareStrategy,
    metrics: &PolicyMetrics,
    transfer: &TransferResult,
    cp: &CostParams,
    lp: &LaunchParams,
) -> Result<CostBreakdown> {
    let days = cfg.n_days_per_year;
    let n_plane = cfg.n_plane as f64;
    let n_parking = strategy.n_parking as f64;
    let q_plane = strategy.q_plane as f64;
    let lambda_plane = plane_demand_rate(cfg);
    let lambda_parking = parking_demand_rate(cfg, strategy);

    let manufacturing = cp.p_sat_musd * lambda_plane * n_plane * days;
    let holding = cp.p_holding_musd_per_sat_year
        * (metrics.mean_stock_plane * n_plane + metrics.mean_stock_parking_batches * q_plane * n_parking);
    let price = launch_price(strategy.q_parking(), cp, lp.cap_launch)?;
    let launch = price * lambda_parking * q_plane / strategy.q_parking() as f64 * n_parking * days;
    let maneuvering = transfer.fuel_mass_kg * lambda_plane * n_plane * days * cp.eps_maneuvering_musd_per_kg;
    Ok(CostBreakdown::new(manufacturing, holding.max(0.0), launch, maneuvering))
}

/// Metrics and cost of a strategy with the launch capacity lifted to
/// `Q_parking`, so candidates over capacity still get a price.
pub fn evaluate_uncapped(scenario: &Scenario, strategy: &SpareStrategy) -> Result<(PolicyMetrics, CostBreakdown)> {
    let metrics = evaluate_strategy(scenario, strategy)?;
    let cfg = &scenario.constellation;
    let transfer = hohmann_transfer(
        &strategy.parking_orbit(cfg)?,
        &cfg.plane_orbit()?,
        &scenario.satellite,
        &scenario.earth,
    )?;
    let mut launch = scenario.launch;
    launch.cap_launch = launch.cap_launch.max(strategy.q_parking());
    let cost = tessac(cfg, strategy, &metrics, &transfer, &scenario.costs, &launch)?;
    Ok((metrics, cost))
}

/// Baseline cost: one launch of `Q_plane` per plane order, no transfer burn,
/// holding on in-plane stock only.
pub fn tessac_inplane_only(
    cfg: &ConstellationConfig,
    policy: &SQPolicy,
    metrics: &PolicyMetrics,
    cp: &CostParams,
    lp: &LaunchParams,
) -> Result<CostBreakdown> {
    let days = cfg.n_days_per_year;
    let n_plane = cfg.n_plane as f64;
    let lambda_plane = plane_demand_rate(cfg);
    let q = policy.order_quantity();
    let manufacturing = cp.p_sat_musd * lambda_plane * n_plane * days;
    let holding = cp.p_holding_musd_per_sat_year * metrics.mean_stock_plane * n_plane;
    let price = launch_price(q, cp, lp.cap_launch)?;
    let launch = price * lambda_plane / q as f64 * n_plane * days;
    Ok(CostBreakdown::new(manufacturing, holding.max(0.0), launch, 0.0))
}
