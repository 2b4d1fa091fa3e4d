//! Fixed inputs shared by every evaluation: constellation geometry, launch
//! logistics, prices, satellite propulsion and Earth constants.

use serde::{Deserialize, Serialize};

use crate::chain::{ConstellationConfig, LaunchParams};
use crate::cost::CostParams;
use crate::error::Result;
use crate::orbits::{EarthConstants, SatelliteParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub constellation: ConstellationConfig,
    pub launch: LaunchParams,
    pub costs: CostParams,
    pub satellite: SatelliteParams,
    pub earth: EarthConstants,
}

impl Scenario {
    /// The 40x40 LEO reference constellation at 1200 km / 50 deg with
    /// 0.05 failures per satellite-year, Soyuz-like launch cadence and the
    /// reference price list.
    pub fn case_study() -> Self {
        Self {
            constellation: ConstellationConfig {
                h_plane_km: 1200.0,
                inclination_deg: 50.0,
                n_plane: 40,
                n_sats: 40,
                lambda_sat_per_year: 0.05,
                n_days_per_year: 365.0,
            },
            launch: LaunchParams {
                mu_launch_days: 66.7,
                pt_launch_days: 90.0,
                cap_launch: 34,
            },
            costs: CostParams::default(),
            satellite: SatelliteParams::default(),
            earth: EarthConstants::default(),
        }
    }

    pub fn with_failure_rate(mut self, lambda_sat_per_year: f64) -> Self {
        self.constellation.lambda_sat_per_year = lambda_sat_per_year;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.constellation.validate()?;
        self.launch.validate()?;
        self.costs.validate()?;
        self.satellite.validate()?;
        self.earth.validate()
    }
}
