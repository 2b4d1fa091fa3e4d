mod common;

use std::collections::VecDeque;

use common::*;
use constellation_spares::chain::{plane_demand_rate, LaunchParams};
use constellation_spares::orbits::{relative_drift_rate, TransferGeometry};
use constellation_spares::sim::*;
use constellation_spares::SpareStrategy;
use proptest::prelude::*;

/// Replays fixed failure gaps and launch delays; every failure hits plane 0.
struct Script {
    gaps: VecDeque<f64>,
    delays: VecDeque<f64>,
}

impl Stochastics for Script {
    fn failure_gap(&mut self, _rate: f64) -> f64 {
        self.gaps.pop_front().unwrap_or(f64::INFINITY)
    }
    fn failed_plane(&mut self, _n: usize) -> usize {
        0
    }
    fn launch_delay(&mut self, _launch: &LaunchParams) -> f64 {
        self.delays.pop_front().expect("script ran out of launch delays")
    }
    fn initial_excess(&mut self, q: u32) -> u32 {
        q
    }
}

fn toy_config() -> SimConfig {
    let mut sc = case_study();
    sc.constellation.n_plane = 1;
    let strategy = SpareStrategy {
        n_parking: 1,
        h_parking_km: 792.3,
        q_plane: 1,
        s_plane: 0,
        k_q_parking: 1,
        k_s_parking: 0,
    };
    let mut cfg = SimConfig::new(sc, strategy, 0);
    cfg.settings.horizon_years = 900.0 / 365.0;
    cfg.settings.warmup_years = 0.0;
    cfg.settings.initial_stock = InitialStock::Full;
    cfg.settings.record_events = true;
    cfg
}

#[test]
fn toy_chain_follows_hand_trace() {
    let cfg = toy_config();
    let sc = &cfg.scenario;
    let parking = cfg.strategy.parking_orbit(&sc.constellation).unwrap();
    let plane = sc.constellation.plane_orbit().unwrap();
    let g = TransferGeometry::new(&parking, &plane, &sc.earth).unwrap();
    // parking lags the plane, so a gap opened at t needs a full lap minus t
    let rel = relative_drift_rate(&parking, &plane, &sc.earth);
    assert!(rel < 0.0);
    let lap = std::f64::consts::TAU / rel.abs();
    let tof = g.time_of_flight_days;
    let arrival_1 = 10.0 + (lap - 10.0) + tof;
    let arrival_2 = 500.0 + (2.0 * lap - 500.0) + tof;
    assert!(arrival_1 < 500.0 && arrival_2 > 900.0);

    let mut script = Script {
        gaps: VecDeque::from([10.0, 490.0]),
        delays: VecDeque::from([50.0, 30.0]),
    };
    let r = run_replication_with(&cfg, 0, &mut script).unwrap();
    let events = r.events.clone().unwrap();
    use EventKind::*;
    use Location::*;
    let expected = [
        (10.0, Failure, Plane, 0),
        (10.0, PlaneOrder, Plane, 0),
        (10.0, Dispatch, Parking, 0),
        (10.0, LaunchOrder, Parking, 0),
        (60.0, ParkingArrival, Parking, 1),
        (arrival_1, PlaneArrival, Plane, 1),
        (500.0, Failure, Plane, 0),
        (500.0, PlaneOrder, Plane, 0),
        (500.0, Dispatch, Parking, 0),
        (500.0, LaunchOrder, Parking, 0),
        (530.0, ParkingArrival, Parking, 1),
    ];
    assert_eq!(events.len(), expected.len(), "{events:#?}");
    for (e, (t, kind, loc, stock)) in events.iter().zip(expected) {
        assert!((e.time_days - t).abs() < 1e-9, "{e:?} vs t={t}");
        assert_eq!((e.event, e.location, e.index, e.stock), (kind, loc, 0, stock));
    }

    assert_eq!((r.failures, r.backorders, r.plane_orders, r.transfers, r.launches), (2, 0, 2, 2, 2));
    assert_eq!(r.plane_leadtimes_days.len(), 2);
    let plane_area = 10.0 + (500.0 - arrival_1);
    assert!((r.mean_stock_plane - plane_area / 900.0).abs() < 1e-12);
    let parking_area = 10.0 + (500.0 - 60.0) + (900.0 - 530.0);
    assert!((r.mean_stock_parking_batches - parking_area / 900.0).abs() < 1e-12);
    assert_eq!(
        r.ledger,
        Ledger {
            launched: 2,
            failures: 2,
            outstanding_backorders: 0,
            in_transit: 1,
            initial_stock: 2,
            final_stock: 1,
        }
    );
    assert!(r.ledger.balanced());
}

#[test]
fn empty_parking_queues_the_order_until_launch_arrives() {
    let mut cfg = toy_config();
    cfg.settings.horizon_years = 2000.0 / 365.0;
    let mut script = Script {
        gaps: VecDeque::from([10.0, 20.0]),
        delays: VecDeque::from([50.0, 40.0]),
    };
    let r = run_replication_with(&cfg, 0, &mut script).unwrap();
    let events = r.events.unwrap();
    // second failure at t = 30 finds the plane empty and the order still in transit
    let backorder = events.iter().find(|e| e.event == EventKind::Backorder).unwrap();
    assert_eq!(backorder.time_days, 30.0);
    assert_eq!(r.backorders, 1);
    assert_eq!(r.plane_orders, 2);
    assert!(r.ledger.balanced());
}

#[test]
fn batch_is_identical_for_any_worker_count() {
    let mut cfg = SimConfig::new(case_study(), reference_strategy(), 2024);
    cfg.settings.replications = 24;
    cfg.settings.horizon_years = 8.0;
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_batch(&cfg).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(2));
    assert_eq!(one, run(7));
    assert!(one.ledgers_balanced);
}

#[test]
fn failure_rate_estimate_is_unbiased() {
    let mut cfg = SimConfig::new(case_study(), reference_strategy(), 77);
    cfg.settings.replications = 40;
    let r = run_batch(&cfg).unwrap();
    let truth = plane_demand_rate(&cfg.scenario.constellation);
    let e = r.lambda_plane_per_day;
    assert!((e.mean - truth).abs() <= 3.0 * e.std_error, "{e:?} vs {truth}");
}

#[test]
fn standard_error_shrinks_with_replications() {
    let mut cfg = SimConfig::new(case_study(), reference_strategy(), 5);
    cfg.settings.horizon_years = 6.0;
    cfg.settings.replications = 16;
    let small = run_batch(&cfg).unwrap().tessac.std_error;
    cfg.settings.replications = 256;
    let large = run_batch(&cfg).unwrap().tessac.std_error;
    let ratio = small / large;
    assert!((2.0..=8.0).contains(&ratio), "ratio {ratio}, expected about 4");
}

#[test]
fn plane_lead_times_fill_first_segment_when_parking_never_runs_dry() {
    let mut sc = case_study();
    sc.constellation.lambda_sat_per_year = 0.02;
    let strategy = SpareStrategy {
        n_parking: 3,
        h_parking_km: 792.3,
        q_plane: 10,
        s_plane: 1,
        k_q_parking: 40,
        k_s_parking: 40,
    };
    let mut cfg = SimConfig::new(sc.clone(), strategy, 13);
    cfg.settings.replications = 40;
    cfg.settings.horizon_years = 20.0;
    let reps = run_replications(&cfg).unwrap();
    assert!(reps.iter().all(|r| r.parking_empty_visits == 0));
    let samples: Vec<f64> = reps.iter().flat_map(|r| r.plane_leadtimes_days.iter().copied()).collect();
    let g = TransferGeometry::new(
        &strategy.parking_orbit(&sc.constellation).unwrap(),
        &sc.constellation.plane_orbit().unwrap(),
        &sc.earth,
    )
    .unwrap();
    let lo = g.lead_time_days(0.0);
    let hi = g.lead_time_days(std::f64::consts::TAU / 3.0);
    assert!(samples.iter().all(|&t| t >= lo - 1e-9 && t <= hi + 1e-9));
    assert!(samples.len() > 300, "{} samples", samples.len());
    let d = ks_uniform(&samples, lo, hi);
    assert!(d < ks_critical_001(samples.len()), "KS distance {d} over {} samples", samples.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ledger_balances_for_arbitrary_policies(
        n_parking in 1u32..=5,
        h in 700.0f64..1100.0,
        q in 1u32..=6,
        s in 0u32..=4,
        kq in 1u32..=5,
        ks in 0u32..=4,
        rate in 0.0f64..0.3,
        seed in any::<u64>(),
    ) {
        let strategy = SpareStrategy { n_parking, h_parking_km: h, q_plane: q, s_plane: s, k_q_parking: kq, k_s_parking: ks };
        let mut cfg = SimConfig::new(case_study().with_failure_rate(rate), strategy, seed);
        cfg.settings.horizon_years = 4.0;
        cfg.settings.replications = 2;
        for r in run_replications(&cfg).unwrap() {
            prop_assert!(r.ledger.balanced(), "{:?}", r.ledger);
            prop_assert!((0.0..=1.0).contains(&r.rho_plane) && (0.0..=1.0).contains(&r.rho_parking));
        }
    }
}
