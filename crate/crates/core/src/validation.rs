//! Accuracy study of the analytic model against simulation, and the
//! exponential fit of launch gaps.
//!
//! Test problems are drawn by Latin hypercube sampling over an 11-parameter
//! trade space. For each problem the reorder points are sized analytically to
//! meet `ρ_plane^N_plane ≥ 0.95` and `ρ_parking^N_parking ≥ 0.95`; the model
//! outputs are then compared with an independent estimate, normally a
//! simulation batch.

use std::io::{Read, Write};

use chrono::{DateTime, NaiveDate, NaiveDateTime};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{
    evaluate_strategy, parking_demand_rate, parking_expected_shortage, parking_fill_rate, plane_demand_rate,
    SpareStrategy,
};
use crate::cost::evaluate_uncapped;
use crate::error::{invalid, Error, Result};
use crate::orbits::TransferGeometry;
use crate::scenario::Scenario;
use crate::sim::{derive_seed, run_batch, SimConfig, SimSettings};

/// Synthetic launch record: 31 ISO-8601 dates whose gaps average 66.7 days.
pub const SOYUZ_LIKE_LAUNCHES: &str = include_str!("../data/soyuz_like_launches.csv");

/// Largest reorder point tried when sizing.
pub const MAX_REORDER_POINT: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealRange {
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntRange {
    pub lo: u32,
    pub hi: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TradeSpace {
    pub pt_launch_days: RealRange,
    pub h_plane_km: RealRange,
    pub h_parking_km: RealRange,
    pub inclination_deg: RealRange,
    pub lambda_sat_per_year: RealRange,
    pub mu_launch_days: RealRange,
    pub n_plane: IntRange,
    pub n_parking: IntRange,
    pub n_sats: IntRange,
    pub q_plane: IntRange,
    pub k_q_parking: IntRange,
}

impl Default for TradeSpace {
    fn default() -> Self {
        let r = |lo, hi| RealRange { lo, hi };
        let i = |lo, hi| IntRange { lo, hi };
        Self {
            pt_launch_days: r(30.0, 120.0),
            h_plane_km: r(1000.0, 2000.0),
            h_parking_km: r(700.0, 1000.0),
            inclination_deg: r(30.0, 70.0),
            lambda_sat_per_year: r(0.001, 0.1),
            mu_launch_days: r(30.0, 90.0),
            n_plane: i(20, 40),
            n_parking: i(1, 20),
            n_sats: i(20, 60),
            q_plane: i(1, 10),
            k_q_parking: i(1, 10),
        }
    }
}

/// Number of sampled dimensions.
pub const TRADE_SPACE_DIMS: usize = 11;

impl TradeSpace {
    pub fn validate(&self) -> Result<()> {
        for (name, r) in [
            ("validation.space.pt_launch_days", self.pt_launch_days),
            ("validation.space.h_plane_km", self.h_plane_km),
            ("validation.space.h_parking_km", self.h_parking_km),
            ("validation.space.inclination_deg", self.inclination_deg),
            ("validation.space.lambda_sat_per_year", self.lambda_sat_per_year),
            ("validation.space.mu_launch_days", self.mu_launch_days),
        ] {
            if !(r.lo.is_finite() && r.hi.is_finite() && r.lo <= r.hi) {
                return Err(invalid(name, format!("need lo <= hi, got ({}, {})", r.lo, r.hi)));
            }
        }
        for (name, r) in [
            ("validation.space.n_plane", self.n_plane),
            ("validation.space.n_parking", self.n_parking),
            ("validation.space.n_sats", self.n_sats),
            ("validation.space.q_plane", self.q_plane),
            ("validation.space.k_q_parking", self.k_q_parking),
        ] {
            if r.lo == 0 || r.lo > r.hi {
                return Err(invalid(name, format!("need 1 <= lo <= hi, got ({}, {})", r.lo, r.hi)));
            }
        }
        Ok(())
    }

    /// Maps a point of the unit hypercube into the space. Integer dimensions
    /// cover `[lo - 1/2, hi + 1/2]` and round to the nearest integer.
    pub fn map_unit(&self, u: &[f64; TRADE_SPACE_DIMS]) -> CaseParameters {
        let real = |r: RealRange, x: f64| r.lo + x * (r.hi - r.lo);
        let int = |r: IntRange, x: f64| {
            let v = (r.lo as f64 - 0.5 + x * (r.hi - r.lo + 1) as f64).round();
            (v.max(r.lo as f64) as u32).min(r.hi)
        };
        CaseParameters {
            pt_launch_days: real(self.pt_launch_days, u[0]),
            h_plane_km: real(self.h_plane_km, u[1]),
            h_parking_km: real(self.h_parking_km, u[2]),
            inclination_deg: real(self.inclination_deg, u[3]),
            lambda_sat_per_year: real(self.lambda_sat_per_year, u[4]),
            mu_launch_days: real(self.mu_launch_days, u[5]),
            n_plane: int(self.n_plane, u[6]),
            n_parking: int(self.n_parking, u[7]),
            n_sats: int(self.n_sats, u[8]),
            q_plane: int(self.q_plane, u[9]),
            k_q_parking: int(self.k_q_parking, u[10]),
        }
    }
}

/// One sampled test problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseParameters {
    pub pt_launch_days: f64,
    pub h_plane_km: f64,
    pub h_parking_km: f64,
    pub inclination_deg: f64,
    pub lambda_sat_per_year: f64,
    pub mu_launch_days: f64,
    pub n_plane: u32,
    pub n_parking: u32,
    pub n_sats: u32,
    pub q_plane: u32,
    pub k_q_parking: u32,
}

impl CaseParameters {
    /// `base` with the sampled constellation and launch fields substituted.
    pub fn scenario(&self, base: &Scenario) -> Scenario {
        let mut sc = base.clone();
        let c = &mut sc.constellation;
        c.h_plane_km = self.h_plane_km;
        c.inclination_deg = self.inclination_deg;
        c.n_plane = self.n_plane;
        c.n_sats = self.n_sats;
        c.lambda_sat_per_year = self.lambda_sat_per_year;
        sc.launch.pt_launch_days = self.pt_launch_days;
        sc.launch.mu_launch_days = self.mu_launch_days;
        sc
    }

    /// Strategy with the given reorder points.
    pub fn strategy(&self, s_plane: u32, k_s_parking: u32) -> SpareStrategy {
        SpareStrategy {
            n_parking: self.n_parking,
            h_parking_km: self.h_parking_km,
            q_plane: self.q_plane,
            s_plane,
            k_q_parking: self.k_q_parking,
            k_s_parking,
        }
    }
}

/// Latin hypercube design on `[0, 1)^dims`: in every dimension the `n` points
/// occupy the `n` strata `[k/n, (k+1)/n)` exactly once.
pub fn lhs_unit<R: Rng>(n: usize, dims: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut points = vec![vec![0.0; dims]; n];
    let mut strata: Vec<usize> = (0..n).collect();
    for d in 0..dims {
        strata.shuffle(rng);
        for (p, &k) in points.iter_mut().zip(&strata) {
            p[d] = (k as f64 + rng.random::<f64>()) / n as f64;
        }
    }
    points
}

/// Up to this many extra designs are drawn when rounding creates duplicate cases.
pub const LHS_RETRIES: usize = 10;

pub fn lhs_sample(space: &TradeSpace, n: usize, seed: u64) -> Result<Vec<CaseParameters>> {
    if n == 0 {
        return Err(invalid("validation.n", "must be >= 1"));
    }
    space.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for attempt in 0..=LHS_RETRIES {
        cases = lhs_unit(n, TRADE_SPACE_DIMS, &mut rng)
            .iter()
            .map(|u| space.map_unit(u.as_slice().try_into().expect("fixed dimension")))
            .collect();
        let unique = (0..n).all(|i| (0..i).all(|j| cases[i] != cases[j]));
        if unique {
            break;
        }
        if attempt == LHS_RETRIES {
            log::warn!("Latin hypercube design still has duplicate cases after {LHS_RETRIES} redraws");
        }
    }
    Ok(cases)
}

/// Upper bound on the long-run fill rate of a location that keeps at most one
/// order of `q` units outstanding and whose deliveries arrive on average at
/// least `min_cycle_days` apart: it receives at most `q / min_cycle_days`
/// units per day whatever its reorder point.
///
/// For a parking orbit the cycle is the mean launch lead time. For a plane it
/// is the alignment spacing `T_syn / N_parking`: a delivery leaves its parking
/// orbit at alignment, so the next one cannot depart before the next
/// alignment slot.
pub fn throughput_ceiling(q: u32, demand_per_day: f64, min_cycle_days: f64) -> f64 {
    let demand = demand_per_day * min_cycle_days;
    if demand <= 0.0 {
        1.0
    } else {
        (q as f64 / demand).min(1.0)
    }
}

/// Smallest reorder points in `1..=MAX_REORDER_POINT`, parking first, such that
/// `ρ_parking^N_parking ≥ target` and then `ρ_plane^N_plane ≥ target`.
///
/// A case is infeasible when no point in range meets its requirement, or when
/// a location's [`throughput_ceiling`] is already below its per-location target.
pub fn size_reorder_points(scenario: &Scenario, case: &CaseParameters, target: f64) -> Result<(u32, u32)> {
    let cfg = &scenario.constellation;
    let parking_ceiling = throughput_ceiling(
        case.k_q_parking,
        parking_demand_rate(cfg, &case.strategy(1, 1)),
        scenario.launch.pt_launch_days + scenario.launch.mu_launch_days,
    );
    if parking_ceiling.powi(case.n_parking as i32) < target {
        return Err(Error::Infeasible(format!(
            "parking replenishment throughput caps the fill rate at {parking_ceiling:.3}"
        )));
    }
    let k_s = (1..=MAX_REORDER_POINT)
        .find(|&k| {
            let s = case.strategy(1, k);
            parking_expected_shortage(cfg, &s, &scenario.launch)
                .and_then(|es| parking_fill_rate(es.min(s.k_q_parking as f64), &s))
                .is_ok_and(|rho| rho.powi(s.n_parking as i32) >= target)
        })
        .ok_or_else(|| Error::Infeasible(format!("no parking reorder point up to {MAX_REORDER_POINT} meets {target}")))?;
    let geometry = TransferGeometry::new(
        &case.strategy(1, k_s).parking_orbit(cfg)?,
        &cfg.plane_orbit()?,
        &scenario.earth,
    )?;
    let plane_ceiling = throughput_ceiling(
        case.q_plane,
        plane_demand_rate(cfg),
        geometry.synodic_period_days() / case.n_parking as f64,
    );
    if plane_ceiling.powi(cfg.n_plane as i32) < target {
        return Err(Error::Infeasible(format!(
            "plane replenishment throughput caps the fill rate at {plane_ceiling:.3}"
        )));
    }
    let s_plane = (1..=MAX_REORDER_POINT)
        .find(|&s| {
            evaluate_strategy(scenario, &case.strategy(s, k_s))
                .is_ok_and(|m| m.rho_plane.powi(cfg.n_plane as i32) >= target)
        })
        .ok_or_else(|| Error::Infeasible(format!("no plane reorder point up to {MAX_REORDER_POINT} meets {target}")))?;
    Ok((s_plane, k_s))
}

/// `|sim - model| / sim · 100`.
pub fn relative_error(sim_value: f64, model_value: f64, metric: &'static str) -> Result<f64> {
    if sim_value == 0.0 {
        return Err(Error::ZeroReference { metric });
    }
    Ok((sim_value - model_value).abs() / sim_value.abs() * 100.0)
}

/// The five compared outputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Outputs {
    pub mean_stock_plane: f64,
    pub mean_stock_parking: f64,
    pub rho_plane: f64,
    pub rho_parking: f64,
    pub tessac: f64,
}

pub const OUTPUT_NAMES: [&str; 5] = ["mean_stock_plane", "mean_stock_parking", "rho_plane", "rho_parking", "tessac"];

impl Outputs {
    pub fn as_array(&self) -> [f64; 5] {
        [
            self.mean_stock_plane,
            self.mean_stock_parking,
            self.rho_plane,
            self.rho_parking,
            self.tessac,
        ]
    }
}

/// Reference estimate of the outputs for one case.
pub trait OutputEstimator: Sync {
    fn estimate(&self, scenario: &Scenario, strategy: &SpareStrategy, seed: u64) -> Result<Outputs>;
}

pub fn analytic_outputs(scenario: &Scenario, strategy: &SpareStrategy) -> Result<Outputs> {
    let (m, cost) = evaluate_uncapped(scenario, strategy)?;
    Ok(Outputs {
        mean_stock_plane: m.mean_stock_plane,
        mean_stock_parking: m.mean_stock_parking_batches,
        rho_plane: m.rho_plane,
        rho_parking: m.rho_parking,
        tessac: cost.tessac,
    })
}

/// The analytic model itself; comparing against it gives zero error.
pub struct AnalyticEstimator;

impl OutputEstimator for AnalyticEstimator {
    fn estimate(&self, scenario: &Scenario, strategy: &SpareStrategy, _seed: u64) -> Result<Outputs> {
        analytic_outputs(scenario, strategy)
    }
}

/// Across-replication means of a simulation batch.
pub struct SimulationEstimator(pub SimSettings);

impl OutputEstimator for SimulationEstimator {
    fn estimate(&self, scenario: &Scenario, strategy: &SpareStrategy, seed: u64) -> Result<Outputs> {
        let cfg = SimConfig {
            scenario: scenario.clone(),
            strategy: *strategy,
            settings: self.0,
            seed,
        };
        let r = run_batch(&cfg)?;
        Ok(Outputs {
            mean_stock_plane: r.mean_stock_plane.mean,
            mean_stock_parking: r.mean_stock_parking_batches.mean,
            rho_plane: r.rho_plane.mean,
            rho_parking: r.rho_parking.mean,
            tessac: r.tessac.mean,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub index: usize,
    pub parameters: CaseParameters,
    pub s_plane: u32,
    pub k_s_parking: u32,
    pub model: Outputs,
    pub reference: Outputs,
    /// Percent errors in `OUTPUT_NAMES` order; `None` where the reference is zero.
    pub errors_pct: [Option<f64>; 5],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub requested: usize,
    pub cases: Vec<CaseReport>,
    /// Cases dropped before comparison, with the reason.
    pub excluded: Vec<(usize, String)>,
    /// Mean percent error per output over the cases where it is defined.
    pub mean_errors_pct: [Option<f64>; 5],
}

/// Problem parameters fixed across all cases, the fill-rate target used for
/// sizing, and the reference estimator.
pub fn run_validation<E: OutputEstimator>(
    space: &TradeSpace,
    n: usize,
    base: &Scenario,
    target: f64,
    estimator: &E,
    seed: u64,
) -> Result<ErrorReport> {
    base.validate()?;
    if !(target > 0.0 && target < 1.0) {
        return Err(invalid("validation.rho_target", "must lie in (0, 1)"));
    }
    let samples = lhs_sample(space, n, derive_seed(seed, "lhs", 0))?;
    let outcomes: Vec<std::result::Result<CaseReport, String>> = samples
        .par_iter()
        .enumerate()
        .map(|(index, params)| {
            let run = || -> Result<CaseReport> {
                let sc = params.scenario(base);
                let (s_plane, k_s) = size_reorder_points(&sc, params, target)?;
                let strategy = params.strategy(s_plane, k_s);
                let model = analytic_outputs(&sc, &strategy)?;
                let reference = estimator.estimate(&sc, &strategy, derive_seed(seed, "case", index as u64))?;
                let r = reference.as_array();
                let m = model.as_array();
                let errors_pct = std::array::from_fn(|i| relative_error(r[i], m[i], OUTPUT_NAMES[i]).ok());
                Ok(CaseReport {
                    index,
                    parameters: *params,
                    s_plane,
                    k_s_parking: k_s,
                    model,
                    reference,
                    errors_pct,
                })
            };
            run().map_err(|e| e.to_string())
        })
        .collect();

    let mut cases = Vec::new();
    let mut excluded = Vec::new();
    for (index, o) in outcomes.into_iter().enumerate() {
        match o {
            Ok(c) => cases.push(c),
            Err(reason) => {
                log::warn!("validation case {index} excluded: {reason}");
                excluded.push((index, reason));
            }
        }
    }
    let mean_errors_pct = std::array::from_fn(|i| {
        let xs: Vec<f64> = cases.iter().filter_map(|c| c.errors_pct[i]).collect();
        (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
    });
    Ok(ErrorReport {
        requested: n,
        cases,
        excluded,
        mean_errors_pct,
    })
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct CaseRow {
    case: usize,
    pt_launch_days: f64,
    h_plane_km: f64,
    h_parking_km: f64,
    inclination_deg: f64,
    lambda_sat_per_year: f64,
    mu_launch_days: f64,
    n_plane: u32,
    n_parking: u32,
    n_sats: u32,
    q_plane: u32,
    k_q_parking: u32,
    s_plane: u32,
    k_s_parking: u32,
    err_mean_stock_plane_pct: Option<f64>,
    err_mean_stock_parking_pct: Option<f64>,
    err_rho_plane_pct: Option<f64>,
    err_rho_parking_pct: Option<f64>,
    err_tessac_pct: Option<f64>,
}

/// One row per compared case: sampled parameters, sized reorder points, errors.
pub fn write_case_csv<W: Write>(writer: W, report: &ErrorReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for c in &report.cases {
        let p = &c.parameters;
        let e = c.errors_pct;
        w.serialize(CaseRow {
            case: c.index,
            pt_launch_days: p.pt_launch_days,
            h_plane_km: p.h_plane_km,
            h_parking_km: p.h_parking_km,
            inclination_deg: p.inclination_deg,
            lambda_sat_per_year: p.lambda_sat_per_year,
            mu_launch_days: p.mu_launch_days,
            n_plane: p.n_plane,
            n_parking: p.n_parking,
            n_sats: p.n_sats,
            q_plane: p.q_plane,
            k_q_parking: p.k_q_parking,
            s_plane: c.s_plane,
            k_s_parking: c.k_s_parking,
            err_mean_stock_plane_pct: e[0],
            err_mean_stock_parking_pct: e[1],
            err_rho_plane_pct: e[2],
            err_rho_parking_pct: e[3],
            err_tessac_pct: e[4],
        })?;
    }
    w.flush()?;
    Ok(())
}

/// One row per output with its mean relative error.
pub fn write_summary_csv<W: Write>(writer: W, report: &ErrorReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["output", "mean_relative_error_pct", "cases"])?;
    for (i, name) in OUTPUT_NAMES.iter().enumerate() {
        let count = report.cases.iter().filter(|c| c.errors_pct[i].is_some()).count();
        let value = report.mean_errors_pct[i].map(|v| v.to_string()).unwrap_or_default();
        w.write_record([name.to_string(), value, count.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.naive_utc());
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M"] {
        if let Ok(dt) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(dt);
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
}

/// Reads one ISO-8601 date or date-time per line from the first CSV column.
/// A first line that does not parse is taken as a header; blank lines are skipped.
pub fn parse_launch_dates<R: Read>(reader: R) -> Result<Vec<NaiveDateTime>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut dates = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        let field = record.get(0).unwrap_or("");
        if field.is_empty() {
            continue;
        }
        match parse_timestamp(field) {
            Some(t) => dates.push(t),
            None if line == 0 => continue,
            None => return Err(Error::DateParse(format!("line {}: {field:?}", line + 1))),
        }
    }
    Ok(dates)
}

/// Gaps between consecutive timestamps, in days.
pub fn launch_gaps_days(dates: &[NaiveDateTime]) -> Result<Vec<f64>> {
    if dates.len() < 2 {
        return Err(Error::InsufficientData(dates.len()));
    }
    dates
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let d = w[1] - w[0];
            if d < chrono::TimeDelta::zero() {
                Err(Error::UnsortedDates(i + 1))
            } else {
                Ok(d.num_milliseconds() as f64 / 86_400_000.0)
            }
        })
        .collect()
}

/// Maximum-likelihood mean of an exponential fit to the launch gaps, which is
/// the sample mean of the gaps.
pub fn fit_launch_gaps(dates: &[NaiveDateTime]) -> Result<f64> {
    let gaps = launch_gaps_days(dates)?;
    Ok(gaps.iter().sum::<f64>() / gaps.len() as f64)
}
