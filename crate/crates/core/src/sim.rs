//! Discrete-event Monte Carlo of the two-echelon spare supply chain.
//!
//! Failures arrive as one merged Poisson stream over all planes. Each plane
//! and each parking orbit runs an `(s, Q)` policy with at most one order
//! outstanding. A plane order takes one batch from the stocked parking orbit
//! with the shortest drift-plus-transfer time at the order instant; if every
//! parking orbit is empty the order queues until the next parking arrival.
//! Parking orbits are restocked from the ground after `pt + Exp(μ)` days.
//!
//! Randomness is drawn through [`Stochastics`] so tests can replace it with a
//! scripted source. The default source is ChaCha8 seeded with the master seed,
//! with the replication index selecting the stream.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::f64::consts::TAU;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{plane_demand_rate, LaunchParams, SpareStrategy};
use crate::cost::CostBreakdown;
use crate::error::{invalid, Result};
use crate::orbits::{hohmann_transfer, TransferGeometry};
use crate::scenario::Scenario;

/// Stock levels at time zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialStock {
    /// Every location starts at `s + Q`.
    Full,
    /// Every location starts at an independent uniform draw from
    /// `{s + 1, ..., s + Q}`, the long-run law of the inventory position.
    #[default]
    Stationary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSettings {
    pub horizon_years: f64,
    /// Initial period excluded from every statistic.
    pub warmup_years: f64,
    pub replications: u32,
    pub initial_stock: InitialStock,
    pub record_events: bool,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            horizon_years: 15.0,
            warmup_years: 1.0,
            replications: 100,
            initial_stock: InitialStock::default(),
            record_events: false,
        }
    }
}

impl SimSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.horizon_years.is_finite() && self.horizon_years > 0.0) {
            return Err(invalid("simulation.horizon_years", "must be > 0"));
        }
        if !(self.warmup_years.is_finite() && self.warmup_years >= 0.0 && self.warmup_years < self.horizon_years) {
            return Err(invalid("simulation.warmup_years", "must lie in [0, horizon_years)"));
        }
        if self.replications == 0 {
            return Err(invalid("simulation.replications", "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub scenario: Scenario,
    pub strategy: SpareStrategy,
    pub settings: SimSettings,
    pub seed: u64,
}

impl SimConfig {
    pub fn new(scenario: Scenario, strategy: SpareStrategy, seed: u64) -> Self {
        Self {
            scenario,
            strategy,
            settings: SimSettings::default(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        self.strategy.validate(&self.scenario.constellation)?;
        self.settings.validate()?;
        self.geometry().map(|_| ())
    }

    fn geometry(&self) -> Result<TransferGeometry> {
        let cfg = &self.scenario.constellation;
        TransferGeometry::new(&self.strategy.parking_orbit(cfg)?, &cfg.plane_orbit()?, &self.scenario.earth)
    }
}

/// Mixes a master seed with a label and an index into an independent seed:
/// FNV-1a over the label bytes, then the SplitMix64 finalizer over
/// `master ^ label_hash ^ index * 0x9E3779B97F4A7C15`.
pub fn derive_seed(master: u64, label: &str, index: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = master ^ h ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Source of every random quantity the simulation consumes.
pub trait Stochastics {
    /// Days until the next failure anywhere, given the total failure rate.
    fn failure_gap(&mut self, total_rate_per_day: f64) -> f64;
    fn failed_plane(&mut self, n_plane: usize) -> usize;
    /// Ground-to-parking delivery delay.
    fn launch_delay(&mut self, launch: &LaunchParams) -> f64;
    /// Initial stock above the reorder point, in `1..=q`.
    fn initial_excess(&mut self, q: u32) -> u32;
}

/// ChaCha8 stream `replication` of the master seed.
pub struct RandomStochastics {
    rng: ChaCha8Rng,
}

impl RandomStochastics {
    pub fn new(seed: u64, replication: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(replication);
        Self { rng }
    }
}

impl Stochastics for RandomStochastics {
    fn failure_gap(&mut self, total_rate_per_day: f64) -> f64 {
        if total_rate_per_day <= 0.0 {
            return f64::INFINITY;
        }
        Exp::new(total_rate_per_day).expect("positive rate").sample(&mut self.rng)
    }

    fn failed_plane(&mut self, n_plane: usize) -> usize {
        self.rng.random_range(0..n_plane)
    }

    fn launch_delay(&mut self, launch: &LaunchParams) -> f64 {
        launch.pt_launch_days + Exp::new(1.0 / launch.mu_launch_days).expect("positive mean").sample(&mut self.rng)
    }

    fn initial_excess(&mut self, q: u32) -> u32 {
        self.rng.random_range(1..=q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Failure,
    Backorder,
    PlaneOrder,
    /// A parking orbit ships one batch toward a plane.
    Dispatch,
    PlaneArrival,
    /// A parking orbit orders a batch group from the ground.
    LaunchOrder,
    ParkingArrival,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Plane,
    Parking,
}

/// One line of the optional event log. `stock` is the level after the event,
/// in satellites for planes and batches for parking orbits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub time_days: f64,
    pub event: EventKind,
    pub location: Location,
    pub index: usize,
    pub stock: i64,
}

pub fn write_event_log<W: Write>(writer: W, events: &[EventRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for e in events {
        w.serialize(e)?;
    }
    w.flush()?;
    Ok(())
}

/// Satellite balance over the whole horizon. All counts are in satellites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Ledger {
    pub launched: u64,
    pub failures: u64,
    pub outstanding_backorders: u64,
    pub in_transit: u64,
    pub initial_stock: u64,
    pub final_stock: u64,
}

impl Ledger {
    /// Failed satellites that were actually replaced.
    pub fn replaced(&self) -> u64 {
        self.failures - self.outstanding_backorders
    }

    /// `initial + launched == replaced + in transit + final`.
    pub fn balanced(&self) -> bool {
        self.initial_stock + self.launched == self.replaced() + self.in_transit + self.final_stock
    }
}

/// Counts and estimates for one replication over the post-warm-up window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicationResult {
    pub replication: u64,
    pub window_days: f64,
    pub failures: u64,
    pub backorders: u64,
    pub plane_orders: u64,
    pub parking_visits: u64,
    pub parking_empty_visits: u64,
    pub launches: u64,
    pub transfers: u64,
    /// Empirical per-plane failure rate.
    pub lambda_plane_per_day: f64,
    pub mean_stock_plane: f64,
    pub mean_stock_parking_batches: f64,
    pub rho_plane: f64,
    pub rho_parking: f64,
    pub cost: CostBreakdown,
    pub ledger: Ledger,
    /// Order-to-arrival times of plane orders placed in the window.
    pub plane_leadtimes_days: Vec<f64>,
    pub events: Option<Vec<EventRecord>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let std_error = if xs.len() > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Self { mean, std_error }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub replications: u32,
    pub seed: u64,
    pub mean_stock_plane: Estimate,
    pub mean_stock_parking_batches: Estimate,
    pub rho_plane: Estimate,
    pub rho_parking: Estimate,
    pub tessac: Estimate,
    pub manufacturing: Estimate,
    pub holding: Estimate,
    pub launch: Estimate,
    pub maneuvering: Estimate,
    pub lambda_plane_per_day: Estimate,
    pub ledgers_balanced: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Action {
    Failure,
    PlaneArrival(usize),
    ParkingArrival(usize),
}

#[derive(Debug, Clone, Copy)]
struct Scheduled {
    time: f64,
    seq: u64,
    action: Action,
}

impl PartialEq for Scheduled {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}
impl Eq for Scheduled {}
impl PartialOrd for Scheduled {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Scheduled {
    /// Reversed so that `BinaryHeap` pops the earliest event, FIFO on ties.
    fn cmp(&self, other: &Self) -> Ordering {
        other.time.total_cmp(&self.time).then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Integral of a piecewise-constant level over `[warmup, ∞)`.
#[derive(Debug, Default)]
struct TimeAverage {
    area: f64,
    last: f64,
}

impl TimeAverage {
    fn advance(&mut self, level: i64, now: f64, warmup: f64) {
        let from = self.last.max(warmup);
        if now > from {
            self.area += level as f64 * (now - from);
        }
        self.last = now;
    }
}

struct State<'a, S: Stochastics> {
    cfg: &'a SimConfig,
    rng: &'a mut S,
    geometry: TransferGeometry,
    warmup: f64,
    queue: BinaryHeap<Scheduled>,
    seq: u64,
    plane_stock: Vec<i64>,
    plane_backorders: Vec<u64>,
    plane_pending: Vec<bool>,
    parking_stock: Vec<i64>,
    parking_in_transit: Vec<bool>,
    waiting: VecDeque<usize>,
    plane_total: i64,
    parking_total: i64,
    plane_area: TimeAverage,
    parking_area: TimeAverage,
    ledger: Ledger,
    in_transit: u64,
    failures: u64,
    backorders: u64,
    plane_orders: u64,
    parking_visits: u64,
    parking_empty_visits: u64,
    launches: u64,
    transfers: u64,
    leadtimes: Vec<f64>,
    events: Option<Vec<EventRecord>>,
}

impl<S: Stochastics> State<'_, S> {
    fn schedule(&mut self, time: f64, action: Action) {
        self.seq += 1;
        self.queue.push(Scheduled {
            time,
            seq: self.seq,
            action,
        });
    }

    fn in_window(&self, t: f64) -> bool {
        t >= self.warmup
    }

    fn log(&mut self, time_days: f64, event: EventKind, location: Location, index: usize) {
        if let Some(events) = self.events.as_mut() {
            let stock = match location {
                Location::Plane => self.plane_stock[index],
                Location::Parking => self.parking_stock[index],
            };
            events.push(EventRecord {
                time_days,
                event,
                location,
                index,
                stock,
            });
        }
    }

    fn set_plane_stock(&mut self, k: usize, level: i64, t: f64) {
        self.plane_area.advance(self.plane_total, t, self.warmup);
        self.plane_total += level - self.plane_stock[k];
        self.plane_stock[k] = level;
    }

    fn set_parking_stock(&mut self, j: usize, level: i64, t: f64) {
        self.parking_area.advance(self.parking_total, t, self.warmup);
        self.parking_total += level - self.parking_stock[j];
        self.parking_stock[j] = level;
    }

    /// Remaining RAAN gap from parking orbit `j` to plane `k` at time `t`.
    fn raan_gap(&self, j: usize, k: usize, t: f64) -> f64 {
        let n_parking = self.parking_stock.len() as f64;
        let n_plane = self.plane_stock.len() as f64;
        let rel = self.geometry.relative_rate_rad_day;
        let parking = j as f64 * TAU / n_parking + rel * t;
        let plane = k as f64 * TAU / n_plane;
        let gap = if rel < 0.0 { parking - plane } else { plane - parking };
        gap.rem_euclid(TAU)
    }

    fn on_failure(&mut self, t: f64) {
        let n = self.plane_stock.len();
        let k = self.rng.failed_plane(n);
        self.ledger.failures += 1;
        let counted = self.in_window(t);
        if counted {
            self.failures += 1;
        }
        if self.plane_stock[k] > 0 {
            self.set_plane_stock(k, self.plane_stock[k] - 1, t);
            self.log(t, EventKind::Failure, Location::Plane, k);
        } else {
            self.plane_backorders[k] += 1;
            if counted {
                self.backorders += 1;
            }
            self.log(t, EventKind::Backorder, Location::Plane, k);
        }
        self.review_plane(k, t);
        let rate = plane_demand_rate(&self.cfg.scenario.constellation) * n as f64;
        let gap = self.rng.failure_gap(rate);
        if gap.is_finite() {
            self.schedule(t + gap, Action::Failure);
        }
    }

    fn review_plane(&mut self, k: usize, t: f64) {
        if self.plane_pending[k] || self.plane_stock[k] > self.cfg.strategy.s_plane as i64 {
            return;
        }
        self.plane_pending[k] = true;
        if self.in_window(t) {
            self.plane_orders += 1;
            self.parking_visits += self.parking_stock.len() as u64;
            self.parking_empty_visits += self.parking_stock.iter().filter(|&&s| s == 0).count() as u64;
        }
        self.log(t, EventKind::PlaneOrder, Location::Plane, k);
        self.waiting.push_back(k);
        self.serve_waiting(t);
    }

    /// Ships queued plane orders, oldest first, while any parking orbit has stock.
    fn serve_waiting(&mut self, t: f64) {
        while let Some(&k) = self.waiting.front() {
            let best = (0..self.parking_stock.len())
                .filter(|&j| self.parking_stock[j] > 0)
                .map(|j| (j, self.geometry.lead_time_days(self.raan_gap(j, k, t))))
                .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            let Some((j, lead)) = best else { return };
            self.waiting.pop_front();
            self.set_parking_stock(j, self.parking_stock[j] - 1, t);
            self.in_transit += self.cfg.strategy.q_plane as u64;
            if self.in_window(t) {
                self.transfers += 1;
                self.leadtimes.push(lead);
            }
            self.log(t, EventKind::Dispatch, Location::Parking, j);
            self.schedule(t + lead, Action::PlaneArrival(k));
            self.review_parking(j, t);
        }
    }

    fn review_parking(&mut self, j: usize, t: f64) {
        let st = &self.cfg.strategy;
        if self.parking_in_transit[j] || self.parking_stock[j] > st.k_s_parking as i64 {
            return;
        }
        self.parking_in_transit[j] = true;
        let sats = st.q_parking() as u64;
        self.ledger.launched += sats;
        self.in_transit += sats;
        if self.in_window(t) {
            self.launches += 1;
        }
        self.log(t, EventKind::LaunchOrder, Location::Parking, j);
        let delay = self.rng.launch_delay(&self.cfg.scenario.launch);
        self.schedule(t + delay, Action::ParkingArrival(j));
    }

    fn on_plane_arrival(&mut self, k: usize, t: f64) {
        debug_assert!(self.plane_pending[k]);
        let q = self.cfg.strategy.q_plane as u64;
        self.in_transit -= q;
        let served = self.plane_backorders[k].min(q);
        self.plane_backorders[k] -= served;
        self.set_plane_stock(k, self.plane_stock[k] + (q - served) as i64, t);
        self.plane_pending[k] = false;
        self.log(t, EventKind::PlaneArrival, Location::Plane, k);
        self.review_plane(k, t);
    }

    fn on_parking_arrival(&mut self, j: usize, t: f64) {
        debug_assert!(self.parking_in_transit[j]);
        let st = self.cfg.strategy;
        self.in_transit -= st.q_parking() as u64;
        self.set_parking_stock(j, self.parking_stock[j] + st.k_q_parking as i64, t);
        self.parking_in_transit[j] = false;
        self.log(t, EventKind::ParkingArrival, Location::Parking, j);
        self.serve_waiting(t);
        self.review_parking(j, t);
    }
}

/// One replication on the default random source.
pub fn run_replication(cfg: &SimConfig, replication: u64) -> Result<ReplicationResult> {
    let mut rng = RandomStochastics::new(cfg.seed, replication);
    run_replication_with(cfg, replication, &mut rng)
}

/// One replication driven by an arbitrary random source.
pub fn run_replication_with<S: Stochastics>(
    cfg: &SimConfig,
    replication: u64,
    rng: &mut S,
) -> Result<ReplicationResult> {
    cfg.validate()?;
    let sc = &cfg.scenario;
    let st = cfg.strategy;
    let set = cfg.settings;
    let days = sc.constellation.n_days_per_year;
    let horizon = set.horizon_years * days;
    let warmup = set.warmup_years * days;
    let n_plane = sc.constellation.n_plane as usize;
    let n_parking = st.n_parking as usize;

    let mut initial = |s: u32, q: u32| -> i64 {
        match set.initial_stock {
            InitialStock::Full => (s + q) as i64,
            InitialStock::Stationary => (s + rng.initial_excess(q)) as i64,
        }
    };
    let plane_stock: Vec<i64> = (0..n_plane).map(|_| initial(st.s_plane, st.q_plane)).collect();
    let parking_stock: Vec<i64> = (0..n_parking).map(|_| initial(st.k_s_parking, st.k_q_parking)).collect();
    let plane_total: i64 = plane_stock.iter().sum();
    let parking_total: i64 = parking_stock.iter().sum();

    let mut state = State {
        cfg,
        rng,
        geometry: cfg.geometry()?,
        warmup,
        queue: BinaryHeap::new(),
        seq: 0,
        plane_stock,
        plane_backorders: vec![0; n_plane],
        plane_pending: vec![false; n_plane],
        parking_stock,
        parking_in_transit: vec![false; n_parking],
        waiting: VecDeque::new(),
        plane_total,
        parking_total,
        plane_area: TimeAverage::default(),
        parking_area: TimeAverage::default(),
        ledger: Ledger {
            initial_stock: (plane_total + parking_total * st.q_plane as i64) as u64,
            ..Ledger::default()
        },
        in_transit: 0,
        failures: 0,
        backorders: 0,
        plane_orders: 0,
        parking_visits: 0,
        parking_empty_visits: 0,
        launches: 0,
        transfers: 0,
        leadtimes: Vec::new(),
        events: set.record_events.then(Vec::new),
    };

    for j in 0..n_parking {
        state.review_parking(j, 0.0);
    }
    for k in 0..n_plane {
        state.review_plane(k, 0.0);
    }
    let rate = plane_demand_rate(&sc.constellation) * n_plane as f64;
    let first = state.rng.failure_gap(rate);
    if first.is_finite() {
        state.schedule(first, Action::Failure);
    }

    while let Some(ev) = state.queue.pop() {
        if ev.time > horizon {
            break;
        }
        match ev.action {
            Action::Failure => state.on_failure(ev.time),
            Action::PlaneArrival(k) => state.on_plane_arrival(k, ev.time),
            Action::ParkingArrival(j) => state.on_parking_arrival(j, ev.time),
        }
    }
    state.plane_area.advance(state.plane_total, horizon, warmup);
    state.parking_area.advance(state.parking_total, horizon, warmup);

    let mut ledger = state.ledger;
    ledger.outstanding_backorders = state.plane_backorders.iter().sum();
    ledger.in_transit = state.in_transit;
    ledger.final_stock = (state.plane_total + state.parking_total * st.q_plane as i64) as u64;

    let window = horizon - warmup;
    let years = window / days;
    let mean_stock_plane = state.plane_area.area / window / n_plane as f64;
    let mean_stock_parking = state.parking_area.area / window / n_parking as f64;

    let q = st.q_plane as f64;
    let rho_plane = if state.plane_orders > 0 {
        1.0 - state.backorders as f64 / (state.plane_orders as f64 * q)
    } else if state.failures > 0 {
        1.0 - state.backorders as f64 / state.failures as f64
    } else {
        1.0
    };
    let rho_parking = if state.parking_visits > 0 {
        1.0 - state.parking_empty_visits as f64 / state.parking_visits as f64
    } else {
        1.0
    };

    let cp = &sc.costs;
    let transfer = hohmann_transfer(
        &st.parking_orbit(&sc.constellation)?,
        &sc.constellation.plane_orbit()?,
        &sc.satellite,
        &sc.earth,
    )?;
    let price = cp.p_launch_full_musd.min(st.q_parking() as f64 * cp.p_launch_unit_musd);
    let cost = CostBreakdown::new(
        cp.p_sat_musd * state.failures as f64 / years,
        cp.p_holding_musd_per_sat_year
            * (mean_stock_plane * n_plane as f64 + mean_stock_parking * q * n_parking as f64),
        price * state.launches as f64 / years,
        state.transfers as f64 * q * transfer.fuel_mass_kg * cp.eps_maneuvering_musd_per_kg / years,
    );

    Ok(ReplicationResult {
        replication,
        window_days: window,
        failures: state.failures,
        backorders: state.backorders,
        plane_orders: state.plane_orders,
        parking_visits: state.parking_visits,
        parking_empty_visits: state.parking_empty_visits,
        launches: state.launches,
        transfers: state.transfers,
        lambda_plane_per_day: state.failures as f64 / window / n_plane as f64,
        mean_stock_plane,
        mean_stock_parking_batches: mean_stock_parking,
        rho_plane: rho_plane.clamp(0.0, 1.0),
        rho_parking: rho_parking.clamp(0.0, 1.0),
        cost,
        ledger,
        plane_leadtimes_days: state.leadtimes,
        events: state.events,
    })
}

/// Replications `0..n` in parallel, reduced in index order.
pub fn run_batch(cfg: &SimConfig) -> Result<SimulationResult> {
    Ok(aggregate(cfg, &run_replications(cfg)?))
}

pub fn run_replications(cfg: &SimConfig) -> Result<Vec<ReplicationResult>> {
    cfg.validate()?;
    (0..cfg.settings.replications as u64)
        .into_par_iter()
        .map(|r| run_replication(cfg, r))
        .collect()
}

pub fn aggregate(cfg: &SimConfig, reps: &[ReplicationResult]) -> SimulationResult {
    let est = |f: &dyn Fn(&ReplicationResult) -> f64| Estimate::from_samples(&reps.iter().map(f).collect::<Vec<_>>());
    SimulationResult {
        replications: reps.len() as u32,
        seed: cfg.seed,
        mean_stock_plane: est(&|r| r.mean_stock_plane),
        mean_stock_parking_batches: est(&|r| r.mean_stock_parking_batches),
        rho_plane: est(&|r| r.rho_plane),
        rho_parking: est(&|r| r.rho_parking),
        tessac: est(&|r| r.cost.tessac),
        manufacturing: est(&|r| r.cost.manufacturing),
        holding: est(&|r| r.cost.holding),
        launch: est(&|r| r.cost.launch),
        maneuvering: est(&|r| r.cost.maneuvering),
        lambda_plane_per_day: est(&|r| r.lambda_plane_per_day),
        ledgers_balanced: reps.iter().all(|r| r.ledger.balanced()),
    }
}
