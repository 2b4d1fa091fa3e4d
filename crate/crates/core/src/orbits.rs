//! Circular-orbit mechanics used by the spare supply chain.
//!
//! Covers the J2 nodal regression rate of a circular orbit, co-planar
//! Hohmann raises between circular orbits, and the lead time of a
//! parking-to-plane delivery (drift wait until the planes align, followed by
//! the half-ellipse flight).

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const SECONDS_PER_DAY: f64 = 86_400.0;

/// Gravitational constants of the central body.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EarthConstants {
    pub mu_km3_s2: f64,
    pub r_earth_km: f64,
    pub j2: f64,
}

impl Default for EarthConstants {
    fn default() -> Self {
        Self {
            mu_km3_s2: 398_600.4418,
            r_earth_km: 6_378.137,
            j2: 0.001_082_63,
        }
    }
}

impl EarthConstants {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("earth.mu_km3_s2", self.mu_km3_s2),
            ("earth.r_earth_km", self.r_earth_km),
            ("earth.j2", self.j2),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(name, format!("must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// A circular orbit. Inclination is held in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularOrbit {
    altitude_km: f64,
    inclination_rad: f64,
}

impl CircularOrbit {
    pub fn new(altitude_km: f64, inclination_deg: f64) -> Result<Self> {
        if !(altitude_km.is_finite() && altitude_km > 0.0) {
            return Err(invalid("altitude_km", format!("must be > 0, got {altitude_km}")));
        }
        if !(0.0..=180.0).contains(&inclination_deg) {
            return Err(invalid(
                "inclination_deg",
                format!("must lie in [0, 180], got {inclination_deg}"),
            ));
        }
        Ok(Self {
            altitude_km,
            inclination_rad: inclination_deg.to_radians(),
        })
    }

    pub fn altitude_km(&self) -> f64 {
        self.altitude_km
    }

    pub fn inclination_rad(&self) -> f64 {
        self.inclination_rad
    }

    pub fn inclination_deg(&self) -> f64 {
        self.inclination_rad.to_degrees()
    }

    pub fn semi_major_axis_km(&self, consts: &EarthConstants) -> f64 {
        consts.r_earth_km + self.altitude_km
    }

    /// Mean motion in rad/s.
    pub fn mean_motion(&self, consts: &EarthConstants) -> f64 {
        let a = self.semi_major_axis_km(consts);
        (consts.mu_km3_s2 / (a * a * a)).sqrt()
    }

    pub fn period_days(&self, consts: &EarthConstants) -> f64 {
        TAU / self.mean_motion(consts) / SECONDS_PER_DAY
    }
}

/// Satellite propulsion properties needed to size a transfer burn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SatelliteParams {
    pub dry_mass_kg: f64,
    pub exhaust_velocity_km_s: f64,
}

impl Default for SatelliteParams {
    fn default() -> Self {
        Self {
            dry_mass_kg: 150.0,
            exhaust_velocity_km_s: 2.16,
        }
    }
}

impl SatelliteParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.dry_mass_kg.is_finite() && self.dry_mass_kg > 0.0) {
            return Err(invalid("satellite.dry_mass_kg", "must be > 0"));
        }
        if !(self.exhaust_velocity_km_s.is_finite() && self.exhaust_velocity_km_s > 0.0) {
            return Err(invalid("satellite.exhaust_velocity_km_s", "must be > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferResult {
    pub delta_v_km_s: f64,
    pub fuel_mass_kg: f64,
    pub time_of_flight_days: f64,
}

/// Nodal regression rate dΩ/dt in rad/day. Negative for prograde orbits.
pub fn raan_drift_rate(orbit: &CircularOrbit, consts: &EarthConstants) -> f64 {
    let a = orbit.semi_major_axis_km(consts);
    let n = orbit.mean_motion(consts);
    let mut cos_i = orbit.inclination_rad.cos();
    // cos(pi/2) is 6e-17 in floating point; polar orbits do not precess
    if cos_i.abs() < 1e-15 {
        cos_i = 0.0;
    }
    let rate = -1.5 * n * consts.r_earth_km.powi(2) * consts.j2 / (a * a) * cos_i;
    rate * SECONDS_PER_DAY
}

/// Drift rate of the parking plane relative to the constellation plane, rad/day.
pub fn relative_drift_rate(
    parking: &CircularOrbit,
    plane: &CircularOrbit,
    consts: &EarthConstants,
) -> f64 {
    raan_drift_rate(parking, consts) - raan_drift_rate(plane, consts)
}

/// Co-planar Hohmann raise from `from` to `to`.
pub fn hohmann_transfer(
    from: &CircularOrbit,
    to: &CircularOrbit,
    sat: &SatelliteParams,
    consts: &EarthConstants,
) -> Result<TransferResult> {
    if from.altitude_km > to.altitude_km {
        return Err(Error::LoweringTransfer {
            from_km: from.altitude_km,
            to_km: to.altitude_km,
        });
    }
    if (from.inclination_rad - to.inclination_rad).abs() > 1e-12 {
        return Err(Error::InclinationMismatch {
            from_deg: from.inclination_deg(),
            to_deg: to.inclination_deg(),
        });
    }
    let mu = consts.mu_km3_s2;
    let a0 = from.semi_major_axis_km(consts);
    let a1 = to.semi_major_axis_km(consts);
    let sum = a0 + a1;
    let dv = (mu / a0).sqrt() * ((2.0 * a1 / sum).sqrt() - 1.0)
        + (mu / a1).sqrt() * (1.0 - (2.0 * a0 / sum).sqrt());
    // rounding can leave a tiny negative value when a0 == a1
    let dv = dv.max(0.0);
    let fuel = sat.dry_mass_kg * (dv / sat.exhaust_velocity_km_s).exp_m1();
    let tof_s = PI * (sum.powi(3) / (8.0 * mu)).sqrt();
    Ok(TransferResult {
        delta_v_km_s: dv,
        fuel_mass_kg: fuel,
        time_of_flight_days: tof_s / SECONDS_PER_DAY,
    })
}

/// Precomputed parking-to-plane geometry: relative drift and flight time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferGeometry {
    pub relative_rate_rad_day: f64,
    pub time_of_flight_days: f64,
}

impl TransferGeometry {
    pub fn new(parking: &CircularOrbit, plane: &CircularOrbit, consts: &EarthConstants) -> Result<Self> {
        if parking.altitude_km >= plane.altitude_km {
            return Err(invalid(
                "h_parking_km",
                format!(
                    "parking altitude {} km must be below constellation altitude {} km",
                    parking.altitude_km, plane.altitude_km
                ),
            ));
        }
        let rel = relative_drift_rate(parking, plane, consts);
        if rel == 0.0 || !rel.is_finite() {
            return Err(Error::NoRelativeDrift);
        }
        let tof = PI
            * ((parking.semi_major_axis_km(consts) + plane.semi_major_axis_km(consts)).powi(3)
                / (8.0 * consts.mu_km3_s2))
                .sqrt()
            / SECONDS_PER_DAY;
        Ok(Self {
            relative_rate_rad_day: rel,
            time_of_flight_days: tof,
        })
    }

    /// Drift wait plus flight time for a remaining RAAN gap of `delta_raan_rad`.
    pub fn lead_time_days(&self, delta_raan_rad: f64) -> f64 {
        delta_raan_rad / self.relative_rate_rad_day.abs() + self.time_of_flight_days
    }

    /// Days for the parking plane to sweep a full revolution relative to the constellation.
    pub fn synodic_period_days(&self) -> f64 {
        TAU / self.relative_rate_rad_day.abs()
    }
}

/// Lead time in days for a delivery whose parking plane still has to drift
/// `delta_raan_rad` before it lines up with the destination plane.
pub fn transfer_time(
    delta_raan_rad: f64,
    parking: &CircularOrbit,
    plane: &CircularOrbit,
    consts: &EarthConstants,
) -> Result<f64> {
    if !(0.0..=TAU).contains(&delta_raan_rad) {
        return Err(invalid(
            "delta_raan_rad",
            format!("must lie in [0, 2π], got {delta_raan_rad}"),
        ));
    }
    let geometry = TransferGeometry::new(parking, plane, consts)?;
    Ok(geometry.lead_time_days(delta_raan_rad))
}
