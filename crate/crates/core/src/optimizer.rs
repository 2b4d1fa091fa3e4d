//! Strategy optimization.
//!
//! The multi-echelon problem (five integer genes and one real altitude gene)
//! is searched with an elitist genetic algorithm; infeasible candidates carry
//! an additive penalty proportional to their normalized constraint violation.
//! The in-plane-only baseline has two small integer variables and is solved by
//! enumeration.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chain::{evaluate_inplane_only, PolicyMetrics, SpareStrategy};
use crate::cost::{evaluate_uncapped, tessac_inplane_only, CostBreakdown};
use crate::error::{invalid, Error, Result};
use crate::inventory::SQPolicy;
use crate::scenario::Scenario;

pub const PENALTY_WEIGHT: f64 = 1e6;
/// Fitness assigned to candidates whose evaluation fails outright.
pub const MAX_PENALTY: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableBounds {
    pub n_parking: (u32, u32),
    pub h_parking_km: (f64, f64),
    pub q_plane: (u32, u32),
    pub s_plane: (u32, u32),
    pub k_q_parking: (u32, u32),
    pub k_s_parking: (u32, u32),
}

impl Default for VariableBounds {
    fn default() -> Self {
        Self {
            n_parking: (1, 20),
            h_parking_km: (700.0, 1000.0),
            q_plane: (1, 10),
            s_plane: (1, 10),
            k_q_parking: (1, 10),
            k_s_parking: (1, 10),
        }
    }
}

impl VariableBounds {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [
            ("optimization.bounds.n_parking", self.n_parking),
            ("optimization.bounds.q_plane", self.q_plane),
            ("optimization.bounds.k_q_parking", self.k_q_parking),
        ] {
            if lo == 0 || lo > hi {
                return Err(invalid(name, format!("need 1 <= lo <= hi, got ({lo}, {hi})")));
            }
        }
        for (name, (lo, hi)) in [
            ("optimization.bounds.s_plane", self.s_plane),
            ("optimization.bounds.k_s_parking", self.k_s_parking),
        ] {
            if lo > hi {
                return Err(invalid(name, format!("need lo <= hi, got ({lo}, {hi})")));
            }
        }
        let (lo, hi) = self.h_parking_km;
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return Err(invalid("optimization.bounds.h_parking_km", format!("need 0 < lo <= hi, got ({lo}, {hi})")));
        }
        Ok(())
    }

    pub fn contains(&self, s: &SpareStrategy) -> bool {
        let within = |v: u32, (lo, hi): (u32, u32)| (lo..=hi).contains(&v);
        within(s.n_parking, self.n_parking)
            && (self.h_parking_km.0..=self.h_parking_km.1).contains(&s.h_parking_km)
            && within(s.q_plane, self.q_plane)
            && within(s.s_plane, self.s_plane)
            && within(s.k_q_parking, self.k_q_parking)
            && within(s.k_s_parking, self.k_s_parking)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaParams {
    pub population: usize,
    pub generations: usize,
    pub elitism: usize,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub altitude_sigma_km: f64,
    pub restarts: usize,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population: 60,
            generations: 150,
            elitism: 2,
            tournament_size: 3,
            crossover_rate: 0.8,
            mutation_rate: 0.1,
            altitude_sigma_km: 30.0,
            restarts: 5,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(invalid("optimization.ga.population", "must be >= 2"));
        }
        if self.elitism >= self.population {
            return Err(invalid("optimization.ga.elitism", "must be smaller than the population"));
        }
        if self.tournament_size == 0 {
            return Err(invalid("optimization.ga.tournament_size", "must be >= 1"));
        }
        if self.restarts == 0 {
            return Err(invalid("optimization.ga.restarts", "must be >= 1"));
        }
        for (name, p) in [
            ("optimization.ga.crossover_rate", self.crossover_rate),
            ("optimization.ga.mutation_rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(name, "must lie in [0, 1]"));
            }
        }
        if !(self.altitude_sigma_km >= 0.0) {
            return Err(invalid("optimization.ga.altitude_sigma_km", "must be >= 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationProblem {
    pub scenario: Scenario,
    pub rho_target: f64,
    pub bounds: VariableBounds,
    pub ga: GaParams,
}

impl OptimizationProblem {
    pub fn new(scenario: Scenario, rho_target: f64) -> Self {
        Self {
            scenario,
            rho_target,
            bounds: VariableBounds::default(),
            ga: GaParams::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if !(self.rho_target > 0.0 && self.rho_target < 1.0) {
            return Err(invalid("optimization.rho_target", format!("must lie in (0, 1), got {}", self.rho_target)));
        }
        self.bounds.validate()?;
        if self.bounds.h_parking_km.1 >= self.scenario.constellation.h_plane_km {
            return Err(invalid(
                "optimization.bounds.h_parking_km",
                "upper bound must be below the constellation altitude",
            ));
        }
        self.ga.validate()
    }
}

/// Objective value and constraint status of one candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fitness {
    pub tessac: f64,
    pub feasible: bool,
    /// `max(0, Q_parking - cap) / cap`.
    pub capacity_violation: f64,
    /// `max(0, ρ_T - ρ_plane^N_plane ρ_parking^N_parking) / ρ_T`.
    pub fill_rate_violation: f64,
    pub fill_rate_product: f64,
    /// What the search minimizes.
    pub penalized: f64,
}

impl Fitness {
    fn failed() -> Self {
        Self {
            tessac: f64::INFINITY,
            feasible: false,
            capacity_violation: f64::INFINITY,
            fill_rate_violation: f64::INFINITY,
            fill_rate_product: 0.0,
            penalized: MAX_PENALTY,
        }
    }
}

pub fn fitness(candidate: &SpareStrategy, prob: &OptimizationProblem) -> Fitness {
    let Ok((metrics, cost)) = evaluate_uncapped(&prob.scenario, candidate) else {
        return Fitness::failed();
    };
    let cap = prob.scenario.launch.cap_launch as f64;
    let capacity_violation = ((candidate.q_parking() as f64 - cap) / cap).max(0.0);
    let product = metrics.fill_rate_product(prob.scenario.constellation.n_plane, candidate.n_parking);
    let fill_rate_violation = ((prob.rho_target - product) / prob.rho_target).max(0.0);
    let violation = capacity_violation + fill_rate_violation;
    Fitness {
        tessac: cost.tessac,
        feasible: violation == 0.0,
        capacity_violation,
        fill_rate_violation,
        fill_rate_product: product,
        penalized: cost.tessac + PENALTY_WEIGHT * violation,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub restart: usize,
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub strategy: SpareStrategy,
    pub cost: CostBreakdown,
    pub metrics: PolicyMetrics,
    pub fill_rate_product: f64,
    pub trace: Vec<GenerationStats>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InplaneResult {
    pub policy: SQPolicy,
    pub cost: CostBreakdown,
    pub metrics: PolicyMetrics,
    pub fill_rate_product: f64,
}

/// Orders by penalized fitness, then lexicographically by the decision vector.
fn compare(a: (&SpareStrategy, f64), b: (&SpareStrategy, f64)) -> Ordering {
    a.1.total_cmp(&b.1).then_with(|| {
        a.0.as_vector()
            .iter()
            .zip(b.0.as_vector().iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

fn random_int<R: Rng>(rng: &mut R, (lo, hi): (u32, u32)) -> u32 {
    rng.random_range(lo..=hi)
}

fn random_strategy<R: Rng>(rng: &mut R, b: &VariableBounds) -> SpareStrategy {
    let (hlo, hhi) = b.h_parking_km;
    SpareStrategy {
        n_parking: random_int(rng, b.n_parking),
        h_parking_km: if hhi > hlo { rng.random_range(hlo..=hhi) } else { hlo },
        q_plane: random_int(rng, b.q_plane),
        s_plane: random_int(rng, b.s_plane),
        k_q_parking: random_int(rng, b.k_q_parking),
        k_s_parking: random_int(rng, b.k_s_parking),
    }
}

/// Integer mutation: half the time a ±1 creep step, otherwise a uniform reset.
fn mutate_int<R: Rng>(rng: &mut R, v: u32, (lo, hi): (u32, u32)) -> u32 {
    if rng.random_bool(0.5) {
        let up = rng.random_bool(0.5);
        if up {
            (v + 1).min(hi)
        } else {
            v.saturating_sub(1).max(lo)
        }
    } else {
        random_int(rng, (lo, hi))
    }
}

fn crossover<R: Rng>(rng: &mut R, a: &SpareStrategy, b: &SpareStrategy) -> SpareStrategy {
    let mut c = *a;
    if rng.random_bool(0.5) {
        c.n_parking = b.n_parking;
    }
    if rng.random_bool(0.5) {
        c.h_parking_km = b.h_parking_km;
    }
    if rng.random_bool(0.5) {
        c.q_plane = b.q_plane;
    }
    if rng.random_bool(0.5) {
        c.s_plane = b.s_plane;
    }
    if rng.random_bool(0.5) {
        c.k_q_parking = b.k_q_parking;
    }
    if rng.random_bool(0.5) {
        c.k_s_parking = b.k_s_parking;
    }
    c
}

fn mutate<R: Rng>(rng: &mut R, s: &mut SpareStrategy, b: &VariableBounds, ga: &GaParams) {
    let p = ga.mutation_rate;
    if rng.random_bool(p) {
        s.n_parking = mutate_int(rng, s.n_parking, b.n_parking);
    }
    if rng.random_bool(p) && ga.altitude_sigma_km > 0.0 {
        let normal = Normal::new(0.0, ga.altitude_sigma_km).expect("sigma validated");
        s.h_parking_km = (s.h_parking_km + normal.sample(rng)).clamp(b.h_parking_km.0, b.h_parking_km.1);
    }
    if rng.random_bool(p) {
        s.q_plane = mutate_int(rng, s.q_plane, b.q_plane);
    }
    if rng.random_bool(p) {
        s.s_plane = mutate_int(rng, s.s_plane, b.s_plane);
    }
    if rng.random_bool(p) {
        s.k_q_parking = mutate_int(rng, s.k_q_parking, b.k_q_parking);
    }
    if rng.random_bool(p) {
        s.k_s_parking = mutate_int(rng, s.k_s_parking, b.k_s_parking);
    }
}

fn tournament<'a, R: Rng>(rng: &mut R, pop: &'a [(SpareStrategy, Fitness)], size: usize) -> &'a SpareStrategy {
    let mut best = &pop[rng.random_range(0..pop.len())];
    for _ in 1..size {
        let c = &pop[rng.random_range(0..pop.len())];
        if compare((&c.0, c.1.penalized), (&best.0, best.1.penalized)).is_lt() {
            best = c;
        }
    }
    &best.0
}

fn evaluate_population(pop: Vec<SpareStrategy>, prob: &OptimizationProblem) -> Vec<(SpareStrategy, Fitness)> {
    let mut scored: Vec<(SpareStrategy, Fitness)> = pop.into_par_iter().map(|s| {
        let f = fitness(&s, prob);
        (s, f)
    }).collect();
    scored.sort_by(|a, b| compare((&a.0, a.1.penalized), (&b.0, b.1.penalized)));
    scored
}

/// One GA run. Returns the final sorted population (best first) and the trace.
fn run_ga(prob: &OptimizationProblem, seed: u64, restart: usize) -> (Vec<(SpareStrategy, Fitness)>, Vec<GenerationStats>) {
    let ga = &prob.ga;
    let b = &prob.bounds;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);

    let initial = (0..ga.population).map(|_| random_strategy(&mut rng, b)).collect();
    let mut pop = evaluate_population(initial, prob);
    let mut trace = Vec::with_capacity(ga.generations + 1);
    let stats = |pop: &[(SpareStrategy, Fitness)], generation| GenerationStats {
        restart,
        generation,
        best: pop[0].1.penalized,
        mean: pop.iter().map(|p| p.1.penalized).sum::<f64>() / pop.len() as f64,
    };
    trace.push(stats(&pop, 0));

    for generation in 1..=ga.generations {
        let mut next: Vec<SpareStrategy> = pop.iter().take(ga.elitism).map(|p| p.0).collect();
        while next.len() < ga.population {
            let a = tournament(&mut rng, &pop, ga.tournament_size);
            let mut child = if rng.random_bool(ga.crossover_rate) {
                let other = tournament(&mut rng, &pop, ga.tournament_size);
                crossover(&mut rng, a, other)
            } else {
                *a
            };
            mutate(&mut rng, &mut child, b, ga);
            next.push(child);
        }
        pop = evaluate_population(next, prob);
        trace.push(stats(&pop, generation));
    }
    (pop, trace)
}

/// Genetic search over the multi-echelon strategy; best feasible across restarts.
pub fn optimize(prob: &OptimizationProblem, seed: u64) -> Result<OptimizationResult> {
    prob.validate()?;
    let mut trace = Vec::new();
    let mut best: Option<(SpareStrategy, Fitness)> = None;
    for restart in 0..prob.ga.restarts {
        let (pop, t) = run_ga(prob, seed, restart);
        trace.extend(t);
        if let Some(cand) = pop.into_iter().find(|p| p.1.feasible) {
            let better = match &best {
                None => true,
                Some(cur) => compare((&cand.0, cand.1.penalized), (&cur.0, cur.1.penalized)).is_lt(),
            };
            if better {
                best = Some(cand);
            }
        }
    }
    let (strategy, _) = best.ok_or_else(|| {
        Error::Infeasible("no candidate met the capacity and fill-rate constraints".into())
    })?;
    let (metrics, cost) = evaluate_uncapped(&prob.scenario, &strategy)?;
    Ok(OptimizationResult {
        fill_rate_product: metrics.fill_rate_product(prob.scenario.constellation.n_plane, strategy.n_parking),
        strategy,
        cost,
        metrics,
        trace,
        seed,
    })
}

/// Exhaustive search over `Q_plane ≤ cap_launch` and the `s_plane` bounds.
pub fn optimize_inplane_only(prob: &OptimizationProblem) -> Result<InplaneResult> {
    prob.validate()?;
    let sc = &prob.scenario;
    let cfg = &sc.constellation;
    let mut best: Option<InplaneResult> = None;
    for q in 1..=sc.launch.cap_launch {
        for s in prob.bounds.s_plane.0..=prob.bounds.s_plane.1 {
            let policy = SQPolicy::new(s, q)?;
            let metrics = evaluate_inplane_only(cfg, &policy, &sc.launch)?;
            let product = metrics.rho_plane.powi(cfg.n_plane as i32);
            if product < prob.rho_target {
                continue;
            }
            let cost = tessac_inplane_only(cfg, &policy, &metrics, &sc.costs, &sc.launch)?;
            // strict improvement keeps the smallest (Q, s) on ties
            if best.as_ref().is_none_or(|b| cost.tessac < b.cost.tessac) {
                best = Some(InplaneResult {
                    policy,
                    cost,
                    metrics,
                    fill_rate_product: product,
                });
            }
        }
    }
    best.ok_or_else(|| Error::Infeasible("no in-plane-only policy meets the fill-rate requirement".into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityRow {
    pub lambda_sat_per_year: f64,
    pub tessac_multi: Option<f64>,
    pub tessac_inplane: Option<f64>,
    pub savings_pct: Option<f64>,
    pub multi: Option<SpareStrategy>,
    pub inplane: Option<SQPolicy>,
    pub error: Option<String>,
}

/// Re-optimizes both strategies at each failure rate.
pub fn sensitivity_sweep(prob: &OptimizationProblem, failure_rates: &[f64], seed: u64) -> Vec<SensitivityRow> {
    failure_rates
        .iter()
        .map(|&rate| {
            let mut p = prob.clone();
            p.scenario.constellation.lambda_sat_per_year = rate;
            let multi = optimize(&p, seed);
            let base = optimize_inplane_only(&p);
            let mut errors = Vec::new();
            if let Err(e) = &multi {
                errors.push(format!("multi-echelon: {e}"));
            }
            if let Err(e) = &base {
                errors.push(format!("in-plane-only: {e}"));
            }
            if !(0.001..=0.1).contains(&rate) {
                log::warn!("failure rate {rate} lies outside the usual 0.001-0.1 range");
            }
            let tm = multi.as_ref().ok().map(|r| r.cost.tessac);
            let ti = base.as_ref().ok().map(|r| r.cost.tessac);
            SensitivityRow {
                lambda_sat_per_year: rate,
                tessac_multi: tm,
                tessac_inplane: ti,
                savings_pct: tm.zip(ti).map(|(m, i)| 100.0 * (i - m) / i),
                multi: multi.ok().map(|r| r.strategy),
                inplane: base.ok().map(|r| r.policy),
                error: (!errors.is_empty()).then(|| errors.join("; ")),
            }
        })
        .collect()
}
