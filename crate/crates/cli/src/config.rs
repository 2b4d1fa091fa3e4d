//! JSON run configuration. Unknown keys are rejected and every error names
//! the offending key path.

use std::path::Path;

use anyhow::{bail, Context, Result};
use constellation_spares::chain::{ConstellationConfig, LaunchParams};
use constellation_spares::optimizer::{GaParams, OptimizationProblem, VariableBounds};
use constellation_spares::orbits::{EarthConstants, SatelliteParams};
use constellation_spares::sim::SimSettings;
use constellation_spares::validation::TradeSpace;
use constellation_spares::{CostParams, Scenario, SpareStrategy};
use serde::{Deserialize, Serialize};

/// Reference constellation, launch cadence, price list and strategy.
pub const CASE_STUDY: &str = include_str!("../config/case_study.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    pub constellation: ConstellationConfig,
    pub launch: LaunchParams,
    #[serde(default)]
    pub costs: CostParams,
    #[serde(default)]
    pub satellite: SatelliteParams,
    #[serde(default)]
    pub earth: EarthConstants,
    /// Required by `evaluate` and `simulate` only.
    #[serde(default)]
    pub strategy: Option<SpareStrategy>,
    #[serde(default)]
    pub simulation: SimSettings,
    #[serde(default)]
    pub optimization: OptimizationSection,
    #[serde(default)]
    pub validation: ValidationSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizationSection {
    pub rho_target: f64,
    pub bounds: VariableBounds,
    pub ga: GaParams,
    pub sensitivity_rates: Vec<f64>,
}

impl Default for OptimizationSection {
    fn default() -> Self {
        Self {
            rho_target: 0.95,
            bounds: VariableBounds::default(),
            ga: GaParams::default(),
            sensitivity_rates: vec![0.001, 0.005, 0.01, 0.05, 0.1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidationSection {
    pub cases: usize,
    pub rho_target: f64,
    pub space: TradeSpace,
}

impl Default for ValidationSection {
    fn default() -> Self {
        Self {
            cases: 25,
            rho_target: 0.95,
            space: TradeSpace::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                anyhow::anyhow!("config: {inner}")
            } else {
                anyhow::anyhow!("config key `{path}`: {inner}")
            }
        })
    }

    /// Reads `path`, or the bundled case study when `None`.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                Self::from_json(&text)
            }
            None => Self::from_json(CASE_STUDY),
        }
    }

    pub fn scenario(&self) -> Scenario {
        Scenario {
            constellation: self.constellation.clone(),
            launch: self.launch,
            costs: self.costs,
            satellite: self.satellite,
            earth: self.earth,
        }
    }

    pub fn strategy(&self) -> Result<SpareStrategy> {
        match self.strategy {
            Some(s) => Ok(s),
            None => bail!("config key `strategy` is required for this command"),
        }
    }

    pub fn problem(&self) -> OptimizationProblem {
        OptimizationProblem {
            scenario: self.scenario(),
            rho_target: self.optimization.rho_target,
            bounds: self.optimization.bounds,
            ga: self.optimization.ga,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_config_is_the_case_study() {
        let cfg = RunConfig::load(None).unwrap();
        assert_eq!(cfg.scenario(), Scenario::case_study());
        assert_eq!(cfg.seed, 1);
        assert!(cfg.strategy.is_some());
        assert_eq!(cfg.problem().validate().ok(), Some(()));
    }

    #[test]
    fn unknown_key_is_reported_with_its_path() {
        let text = CASE_STUDY.replace("\"cap_launch\"", "\"cap_lunch\"");
        let err = RunConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("launch") && err.contains("cap_lunch"), "{err}");
    }

    #[test]
    fn missing_key_is_named() {
        let text = CASE_STUDY.replace("\"n_sats\": 40,", "");
        let err = RunConfig::from_json(&text).unwrap_err().to_string();
        assert!(err.contains("constellation") && err.contains("n_sats"), "{err}");
    }

    #[test]
    fn sections_fall_back_to_defaults() {
        let text = r#"{
            "constellation": {"h_plane_km": 1200, "inclination_deg": 50, "n_plane": 40, "n_sats": 40, "lambda_sat_per_year": 0.05},
            "launch": {"mu_launch_days": 66.7, "pt_launch_days": 90, "cap_launch": 34}
        }"#;
        let cfg = RunConfig::from_json(text).unwrap();
        assert_eq!(cfg.scenario(), Scenario::case_study());
        assert_eq!(cfg.simulation, SimSettings::default());
        assert!(cfg.strategy().is_err());
    }

    #[test]
    fn round_trips_through_json() {
        let cfg = RunConfig::load(None).unwrap();
        let again = RunConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, again);
    }
}
