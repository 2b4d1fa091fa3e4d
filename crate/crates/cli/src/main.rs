//! `spares`: evaluate, simulate, validate and optimize multi-echelon spare
//! strategies for LEO constellations from a JSON run configuration.
//!
//! Exit status is 0 on success, 2 when the request is infeasible or exceeds
//! launch capacity, and 1 on any other error.

mod config;
mod table;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use constellation_spares::chain::evaluate_strategy;
use constellation_spares::cost::tessac;
use constellation_spares::optimizer::{optimize, optimize_inplane_only, sensitivity_sweep};
use constellation_spares::orbits::hohmann_transfer;
use constellation_spares::sim::{aggregate, derive_seed, run_replications, write_event_log, Estimate, SimConfig};
use constellation_spares::validation::{
    fit_launch_gaps, launch_gaps_days, parse_launch_dates, run_validation, write_case_csv, write_summary_csv,
    SimulationEstimator, OUTPUT_NAMES, SOYUZ_LIKE_LAUNCHES,
};
use constellation_spares::{CostBreakdown, Error, PolicyMetrics, SpareStrategy};
use log::info;
use serde::Serialize;

use config::RunConfig;
use table::{opt, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "spares", version, about = "Spare-satellite strategy analytics for LEO constellations")]
struct Cli {
    /// JSON run configuration; the bundled case study when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed; overrides the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads; all available cores when omitted.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Directory for CSV artefacts; created if missing.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Rendering of the stdout report.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analytic fill rates, stock levels and cost of the configured strategy.
    Evaluate,
    /// Discrete-event simulation of the configured strategy.
    Simulate {
        #[command(flatten)]
        sim: SimOverrides,
        /// Record the event log of replication 0 to `events.csv`.
        #[arg(long)]
        events: bool,
    },
    /// Compare analytic outputs with simulation over a Latin-hypercube sample.
    Validate {
        /// Number of sampled cases.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        sim: SimOverrides,
    },
    /// Minimum-cost strategy meeting the fill-rate target.
    Optimize {
        /// Optimize the single-echelon baseline instead.
        #[arg(long)]
        inplane_only: bool,
    },
    /// Savings of the multi-echelon strategy over the baseline per failure rate.
    Sensitivity {
        /// Failure rates per satellite-year, comma separated.
        #[arg(long, value_delimiter = ',')]
        rates: Option<Vec<f64>>,
    },
    /// Exponential fit to the gaps between launch dates.
    FitLaunchData {
        /// One ISO-8601 date per line; the bundled launch record when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct SimOverrides {
    /// Replications per simulation.
    #[arg(long)]
    replications: Option<u32>,
    /// Simulated years including warm-up.
    #[arg(long)]
    horizon_years: Option<f64>,
    /// Discarded initial years.
    #[arg(long)]
    warmup_years: Option<f64>,
}

impl SimOverrides {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(r) = self.replications {
            cfg.simulation.replications = r;
        }
        if let Some(h) = self.horizon_years {
            cfg.simulation.horizon_years = h;
        }
        if let Some(w) = self.warmup_years {
            cfg.simulation.warmup_years = w;
        }
    }
}

struct Session<'a> {
    cfg: RunConfig,
    out: Option<&'a Path>,
    format: Format,
}

impl Session<'_> {
    fn emit(&self, table: &Table) -> Result<()> {
        let stdout = std::io::stdout();
        table.write(stdout.lock(), self.format)
    }

    /// Writes `file` under `--out` when given.
    fn artefact(&self, file: &str, write: impl FnOnce(BufWriter<File>) -> Result<()>) -> Result<()> {
        let Some(dir) = self.out else {
            return Ok(());
        };
        let path = dir.join(file);
        let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        write(BufWriter::new(f))?;
        info!("wrote {}", path.display());
        Ok(())
    }

    fn seed(&self, label: &str) -> u64 {
        derive_seed(self.cfg.seed, label, 0)
    }
}

fn strategy_rows(t: &mut Table, s: &SpareStrategy) {
    t.pair("n_parking", s.n_parking);
    t.pair("h_parking_km", s.h_parking_km);
    t.pair("q_plane", s.q_plane);
    t.pair("s_plane", s.s_plane);
    t.pair("k_q_parking", s.k_q_parking);
    t.pair("k_s_parking", s.k_s_parking);
    t.pair("q_parking", s.q_parking());
    t.pair("s_parking", s.s_parking());
}

fn metric_rows(t: &mut Table, m: &PolicyMetrics) {
    t.pair("lambda_plane_per_day", m.lambda_plane_per_day);
    t.pair("lambda_parking_batches_per_day", m.lambda_parking_batches_per_day);
    t.pair("p_av", m.p_av);
    t.pair("neglected_supply_mass", m.neglected_supply_mass);
    t.pair("es_plane", m.es_plane);
    t.pair("es_parking_batches", m.es_parking_batches);
    t.pair("rho_plane", m.rho_plane);
    t.pair("rho_parking", m.rho_parking);
    t.pair("mean_stock_plane", m.mean_stock_plane);
    t.pair("mean_stock_parking_batches", m.mean_stock_parking_batches);
    t.pair("mean_leadtime_plane_days", m.mean_leadtime_plane_days);
    t.pair("mean_leadtime_parking_days", m.mean_leadtime_parking_days);
}

fn cost_rows(t: &mut Table, c: &CostBreakdown) {
    t.pair("manufacturing_musd_per_year", c.manufacturing);
    t.pair("holding_musd_per_year", c.holding);
    t.pair("launch_musd_per_year", c.launch);
    t.pair("maneuvering_musd_per_year", c.maneuvering);
    t.pair("tessac_musd_per_year", c.tessac);
}

fn evaluate(ctx: &Session) -> Result<()> {
    let sc = ctx.cfg.scenario();
    sc.validate()?;
    let strategy = ctx.cfg.strategy()?;
    strategy.validate(&sc.constellation)?;
    let m = evaluate_strategy(&sc, &strategy)?;
    let transfer = hohmann_transfer(
        &strategy.parking_orbit(&sc.constellation)?,
        &sc.constellation.plane_orbit()?,
        &sc.satellite,
        &sc.earth,
    )?;
    let cost = tessac(&sc.constellation, &strategy, &m, &transfer, &sc.costs, &sc.launch)?;
    let mut t = Table::key_value();
    strategy_rows(&mut t, &strategy);
    metric_rows(&mut t, &m);
    t.pair("fill_rate_product", m.fill_rate_product(sc.constellation.n_plane, strategy.n_parking));
    t.pair("delta_v_km_s", transfer.delta_v_km_s);
    t.pair("fuel_mass_kg", transfer.fuel_mass_kg);
    t.pair("time_of_flight_days", transfer.time_of_flight_days);
    cost_rows(&mut t, &cost);
    ctx.artefact("evaluate.csv", |w| t.write_csv(w))?;
    ctx.emit(&t)
}

#[derive(Serialize)]
struct ReplicationRow {
    replication: u64,
    window_days: f64,
    failures: u64,
    backorders: u64,
    plane_orders: u64,
    parking_visits: u64,
    parking_empty_visits: u64,
    launches: u64,
    transfers: u64,
    lambda_plane_per_day: f64,
    mean_stock_plane: f64,
    mean_stock_parking_batches: f64,
    rho_plane: f64,
    rho_parking: f64,
    manufacturing: f64,
    holding: f64,
    launch: f64,
    maneuvering: f64,
    tessac: f64,
    ledger_balanced: bool,
}

fn simulate(ctx: &Session, record_events: bool) -> Result<()> {
    let mut cfg = SimConfig::new(ctx.cfg.scenario(), ctx.cfg.strategy()?, ctx.seed("simulate"));
    cfg.settings = ctx.cfg.simulation;
    cfg.settings.record_events |= record_events;
    cfg.validate()?;
    info!("simulating {} replications", cfg.settings.replications);
    let reps = run_replications(&cfg)?;
    let r = aggregate(&cfg, &reps);

    ctx.artefact("replications.csv", |w| {
        let mut w = csv::Writer::from_writer(w);
        for x in &reps {
            w.serialize(ReplicationRow {
                replication: x.replication,
                window_days: x.window_days,
                failures: x.failures,
                backorders: x.backorders,
                plane_orders: x.plane_orders,
                parking_visits: x.parking_visits,
                parking_empty_visits: x.parking_empty_visits,
                launches: x.launches,
                transfers: x.transfers,
                lambda_plane_per_day: x.lambda_plane_per_day,
                mean_stock_plane: x.mean_stock_plane,
                mean_stock_parking_batches: x.mean_stock_parking_batches,
                rho_plane: x.rho_plane,
                rho_parking: x.rho_parking,
                manufacturing: x.cost.manufacturing,
                holding: x.cost.holding,
                launch: x.cost.launch,
                maneuvering: x.cost.maneuvering,
                tessac: x.cost.tessac,
                ledger_balanced: x.ledger.balanced(),
            })?;
        }
        w.flush()?;
        Ok(())
    })?;
    if cfg.settings.record_events {
        if let Some(events) = reps.first().and_then(|x| x.events.as_deref()) {
            ctx.artefact("events.csv", |w| Ok(write_event_log(w, events)?))?;
        }
    }

    let mut t = Table::new(["quantity", "mean", "std_error"]);
    let mut est = |name: &str, e: Estimate| t.push([name.to_string(), e.mean.to_string(), e.std_error.to_string()]);
    est("lambda_plane_per_day", r.lambda_plane_per_day);
    est("mean_stock_plane", r.mean_stock_plane);
    est("mean_stock_parking_batches", r.mean_stock_parking_batches);
    est("rho_plane", r.rho_plane);
    est("rho_parking", r.rho_parking);
    est("manufacturing_musd_per_year", r.manufacturing);
    est("holding_musd_per_year", r.holding);
    est("launch_musd_per_year", r.launch);
    est("maneuvering_musd_per_year", r.maneuvering);
    est("tessac_musd_per_year", r.tessac);
    t.push(["replications".to_string(), r.replications.to_string(), String::new()]);
    t.push(["seed".to_string(), r.seed.to_string(), String::new()]);
    t.push(["ledgers_balanced".to_string(), r.ledgers_balanced.to_string(), String::new()]);
    ctx.artefact("simulation_summary.csv", |w| t.write_csv(w))?;
    ctx.emit(&t)
}

fn validate(ctx: &Session, n: Option<usize>) -> Result<()> {
    let v = &ctx.cfg.validation;
    let n = n.unwrap_or(v.cases);
    let sc = ctx.cfg.scenario();
    sc.validate()?;
    ctx.cfg.simulation.validate()?;
    info!("validating {n} cases");
    let est = SimulationEstimator(ctx.cfg.simulation);
    let report = run_validation(&v.space, n, &sc, v.rho_target, &est, ctx.seed("validate"))?;
    ctx.artefact("cases.csv", |w| Ok(write_case_csv(w, &report)?))?;
    ctx.artefact("summary.csv", |w| Ok(write_summary_csv(w, &report)?))?;
    ctx.artefact("excluded.csv", |w| {
        let mut w = csv::Writer::from_writer(w);
        w.write_record(["case", "reason"])?;
        for (i, reason) in &report.excluded {
            w.write_record([i.to_string(), reason.clone()])?;
        }
        w.flush()?;
        Ok(())
    })?;
    let mut t = Table::new(["output", "mean_relative_error_pct", "cases"]);
    for (i, name) in OUTPUT_NAMES.iter().enumerate() {
        let count = report.cases.iter().filter(|c| c.errors_pct[i].is_some()).count();
        t.push([name.to_string(), opt(report.mean_errors_pct[i]), count.to_string()]);
    }
    t.push(["excluded".to_string(), String::new(), report.excluded.len().to_string()]);
    ctx.emit(&t)
}

fn optimize_cmd(ctx: &Session, inplane_only: bool) -> Result<()> {
    let prob = ctx.cfg.problem();
    prob.validate()?;
    let mut t = Table::key_value();
    if inplane_only {
        let r = optimize_inplane_only(&prob)?;
        t.pair("q_plane", r.policy.order_quantity());
        t.pair("s_plane", r.policy.reorder_point());
        metric_rows(&mut t, &r.metrics);
        t.pair("fill_rate_product", r.fill_rate_product);
        cost_rows(&mut t, &r.cost);
    } else {
        let seed = ctx.seed("optimize");
        info!("genetic search with seed {seed}");
        let r = optimize(&prob, seed)?;
        strategy_rows(&mut t, &r.strategy);
        metric_rows(&mut t, &r.metrics);
        t.pair("fill_rate_product", r.fill_rate_product);
        cost_rows(&mut t, &r.cost);
        t.pair("seed", r.seed);
        ctx.artefact("trace.csv", |w| {
            let mut w = csv::Writer::from_writer(w);
            for g in &r.trace {
                w.serialize(g)?;
            }
            w.flush()?;
            Ok(())
        })?;
    }
    ctx.artefact("result.csv", |w| t.write_csv(w))?;
    ctx.emit(&t)
}

fn sensitivity(ctx: &Session, rates: Option<Vec<f64>>) -> Result<()> {
    let prob = ctx.cfg.problem();
    prob.validate()?;
    let rates = rates.unwrap_or_else(|| ctx.cfg.optimization.sensitivity_rates.clone());
    if rates.is_empty() {
        bail!("no failure rates given");
    }
    let rows = sensitivity_sweep(&prob, &rates, ctx.seed("sensitivity"));
    let mut t = Table::new([
        "lambda_sat_per_year",
        "tessac_multi_musd_per_year",
        "tessac_inplane_musd_per_year",
        "savings_pct",
        "n_parking",
        "h_parking_km",
        "q_plane",
        "s_plane",
        "k_q_parking",
        "k_s_parking",
        "inplane_q",
        "inplane_s",
        "error",
    ]);
    for r in &rows {
        let m = r.multi.as_ref();
        t.push([
            r.lambda_sat_per_year.to_string(),
            opt(r.tessac_multi),
            opt(r.tessac_inplane),
            opt(r.savings_pct),
            opt(m.map(|s| s.n_parking)),
            opt(m.map(|s| s.h_parking_km)),
            opt(m.map(|s| s.q_plane)),
            opt(m.map(|s| s.s_plane)),
            opt(m.map(|s| s.k_q_parking)),
            opt(m.map(|s| s.k_s_parking)),
            opt(r.inplane.map(|p| p.order_quantity())),
            opt(r.inplane.map(|p| p.reorder_point())),
            r.error.clone().unwrap_or_default(),
        ]);
    }
    ctx.artefact("sensitivity.csv", |w| t.write_csv(w))?;
    ctx.emit(&t)
}

fn fit_launch_data(ctx: &Session, input: Option<&Path>) -> Result<()> {
    let dates = match input {
        Some(p) => parse_launch_dates(File::open(p).with_context(|| format!("opening {}", p.display()))?)?,
        None => parse_launch_dates(SOYUZ_LIKE_LAUNCHES.as_bytes())?,
    };
    let gaps = launch_gaps_days(&dates)?;
    let mean = fit_launch_gaps(&dates)?;
    let mut t = Table::key_value();
    t.pair("launches", dates.len());
    t.pair("gaps", gaps.len());
    t.pair("mu_launch_days", mean);
    t.pair("rate_per_day", 1.0 / mean);
    ctx.artefact("launch_fit.csv", |w| t.write_csv(w))?;
    ctx.emit(&t)
}

fn run(cli: Cli) -> Result<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            bail!("--jobs must be >= 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
    }
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &cli.out {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut ctx = Session {
        cfg,
        out: cli.out.as_deref(),
        format: cli.format,
    };
    match cli.command {
        Command::Evaluate => evaluate(&ctx),
        Command::Simulate { sim, events } => {
            sim.apply(&mut ctx.cfg);
            simulate(&ctx, events)
        }
        Command::Validate { n, sim } => {
            sim.apply(&mut ctx.cfg);
            validate(&ctx, n)
        }
        Command::Optimize { inplane_only } => optimize_cmd(&ctx, inplane_only),
        Command::Sensitivity { rates } => sensitivity(&ctx, rates),
        Command::FitLaunchData { input } => fit_launch_data(&ctx, input.as_deref()),
    }
}

/// 2 for infeasible or over-capacity requests, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    let infeasible = err.chain().any(|e| {
        matches!(
            e.downcast_ref::<Error>(),
            Some(Error::Infeasible(_) | Error::CapacityExceeded { .. })
        )
    });
    if infeasible {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {
            let _ = std::io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
