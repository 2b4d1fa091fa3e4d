mod common;

use common::*;
use constellation_spares::cost::evaluate_uncapped;
use constellation_spares::optimizer::*;
use constellation_spares::SpareStrategy;
use rayon::prelude::*;

fn problem() -> OptimizationProblem {
    OptimizationProblem::new(case_study(), 0.95)
}

/// Best feasible TESSAC over `N_parking ≤ 3`, four parking altitudes and every
/// integer policy in `1..=10`.
fn coarse_grid_best(prob: &OptimizationProblem) -> (SpareStrategy, f64) {
    let mut grid = Vec::new();
    for n_parking in 1..=3 {
        for h in [700.0, 800.0, 900.0, 1000.0] {
            for q_plane in 1..=10 {
                for s_plane in 1..=10 {
                    for k_q_parking in 1..=10 {
                        for k_s_parking in 1..=10 {
                            grid.push(SpareStrategy {
                                n_parking,
                                h_parking_km: h,
                                q_plane,
                                s_plane,
                                k_q_parking,
                                k_s_parking,
                            });
                        }
                    }
                }
            }
        }
    }
    let sc = &prob.scenario;
    grid.into_par_iter()
        .filter(|s| s.q_parking() <= sc.launch.cap_launch)
        .filter_map(|s| {
            let (m, c) = evaluate_uncapped(sc, &s).ok()?;
            (m.fill_rate_product(sc.constellation.n_plane, s.n_parking) >= prob.rho_target).then_some((s, c.tessac))
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("grid has feasible points")
}

#[test]
fn genetic_search_is_not_beaten_by_coarse_grid() {
    let prob = problem();
    let ga = optimize(&prob, 11).unwrap();
    let (best, grid_cost) = coarse_grid_best(&prob);
    assert!(
        grid_cost >= ga.cost.tessac * 0.98,
        "grid {best:?} at {grid_cost} beats search at {}",
        ga.cost.tessac
    );
}

#[test]
fn result_is_feasible_on_independent_reevaluation() {
    let prob = problem();
    let r = optimize(&prob, 3).unwrap();
    let (m, c) = evaluate_uncapped(&prob.scenario, &r.strategy).unwrap();
    assert!(r.strategy.q_parking() <= 34);
    assert!(m.fill_rate_product(40, r.strategy.n_parking) >= 0.95);
    assert_eq!(c.tessac, r.cost.tessac);
    assert!(prob.bounds.contains(&r.strategy));
}

#[test]
fn search_beats_reference_candidate() {
    let prob = problem();
    let reference = fitness(&reference_strategy(), &prob);
    assert!(reference.feasible);
    assert!(optimize(&prob, 5).unwrap().cost.tessac <= reference.tessac);
}

#[test]
fn rare_failures_use_a_single_parking_orbit() {
    let mut prob = problem();
    prob.scenario = prob.scenario.with_failure_rate(0.001);
    assert_eq!(optimize(&prob, 42).unwrap().strategy.n_parking, 1);
}

#[test]
fn trace_best_never_increases_within_a_restart() {
    let r = optimize(&problem(), 9).unwrap();
    let ga = GaParams::default();
    assert_eq!(r.trace.len(), ga.restarts * (ga.generations + 1));
    for w in r.trace.windows(2) {
        if w[0].restart == w[1].restart {
            assert!(w[1].best <= w[0].best);
        }
    }
}
