use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use outage_mpc::plant::{run_closed_loop, Controller, SimulationOptions, SimulationTrace};
use outage_mpc::scenario::{
    load_config, parse_weather_csv, synth_weather, HouseTemperatureTrace, Scenario, SystemConfig, WeatherProfile,
};
use outage_mpc::sizing::{parse_sizing_spec, size_ladder, size_system, sizing_spec_to_toml, SizingSpec, SystemSize};
use outage_mpc::ResiliencyMetrics;

#[derive(Parser, Debug)]
#[command(
    name = "outage-mpc",
    version,
    about = "Outage-mode PV + battery controller simulations"
)]
struct Cli {
    /// System configuration (TOML). Published defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for traces and metrics.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Parallel simulations for compare and sweep-sizes.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for synthetic weather.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Use the full 24 h planning horizon instead of 6 h.
    #[arg(long, global = true)]
    paper_scale: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one controller over a scenario.
    Simulate {
        #[arg(long, default_value = "proposed")]
        controller: String,
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Run both controllers over the same scenario.
    Compare {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Baseline over sizes A-F and the proposed controller at size A.
    SweepSizes {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Size the system from daily demand and insolation.
    Size {
        /// Sizing assumptions (TOML); calibrated defaults when omitted.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        storage_days: Option<f64>,
    },
    /// Write a synthetic weather CSV.
    SynthWeather {
        #[arg(long, default_value_t = 7)]
        days: usize,
        #[arg(long, default_value = "post-storm")]
        profile: String,
        /// Output file; defaults to <out>/weather.csv.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct ScenarioArgs {
    /// Weather CSV (timestamp, ghi, air_temperature, wind_speed).
    #[arg(long)]
    weather: Option<PathBuf>,
    /// Synthetic profile used when no weather file is given.
    #[arg(long, default_value = "post-storm")]
    profile: String,
    /// Days to simulate from the start of the weather.
    #[arg(long, default_value_t = 7)]
    days: usize,
    /// House temperature CSV (timestamp, temperature).
    #[arg(long)]
    house: Option<PathBuf>,
    /// Ladder size A-F applied to the configuration.
    #[arg(long)]
    size: Option<char>,
    /// Override the planning horizon in steps.
    #[arg(long)]
    horizon: Option<usize>,
    /// Temperature tolerance for violation counting, °C.
    #[arg(long, default_value_t = 0.05)]
    tol: f64,
    /// Solver time limit per step, s.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Write every controller model and plan under <out>/dump.
    #[arg(long)]
    dump: bool,
}

struct Setup {
    scenario: Scenario,
    config: SystemConfig,
    options: SimulationOptions,
    tol: f64,
}

fn base_config(cli: &Cli, args: &ScenarioArgs) -> Result<SystemConfig> {
    let mut config = match &cli.config {
        Some(p) => load_config(p)?,
        None => SystemConfig::default(),
    };
    config.horizon_steps = match args.horizon {
        Some(n) => n,
        None if cli.paper_scale => 144,
        None => 36,
    };
    if let Some(t) = args.time_limit {
        config.solver.time_limit_s = t;
    }
    config.validate()?;
    Ok(config)
}

fn ladder_size(label: char) -> Result<SystemSize> {
    let label = label.to_ascii_uppercase();
    size_ladder()
        .into_iter()
        .find(|e| e.label == label)
        .map(|e| e.size)
        .with_context(|| format!("unknown size {label:?}; expected A-F"))
}

fn setup(cli: &Cli, args: &ScenarioArgs) -> Result<Setup> {
    let mut config = base_config(cli, args)?;
    if let Some(label) = args.size {
        config = ladder_size(label)?.apply(&config);
    }
    if args.days == 0 {
        bail!("--days must be at least 1");
    }
    let step = config.step_hours();
    let weather = match &args.weather {
        Some(p) => parse_weather_csv(p, step)?,
        None => {
            let profile: WeatherProfile = args.profile.parse()?;
            synth_weather(args.days, profile, cli.seed, config.step_minutes.round() as i64)?
        }
    };
    let per_day = weather.steps_per_day();
    let weather = weather.window(args.days * per_day)?;
    let house = match &args.house {
        Some(p) => Some(HouseTemperatureTrace::from_csv(p, &weather.timestamps())?),
        None => None,
    };
    let scenario = Scenario::new(weather, house, config.loads.clone())?;
    let options = SimulationOptions {
        solver: config.solver.options(),
        dump_dir: args.dump.then(|| cli.out.join("dump")),
        ..SimulationOptions::default()
    };
    Ok(Setup {
        scenario,
        config,
        options,
        tol: args.tol,
    })
}

fn write_run(out: &Path, tag: &str, trace: &SimulationTrace, metrics: &ResiliencyMetrics) -> Result<()> {
    trace.write_csv(&out.join(format!("{tag}_trace.csv")))?;
    let path = out.join(format!("{tag}_metrics.toml"));
    fs::write(&path, metrics.to_toml_string()).with_context(|| format!("writing {}", path.display()))?;
    if !trace.solver_log.is_empty() {
        trace.write_solver_log(&out.join(format!("{tag}_solver_log.csv")))?;
        let stalled = trace.solver_log.iter().filter(|e| e.stalled).count();
        let degraded = trace.solver_log.iter().filter(|e| e.degraded).count();
        let wall: f64 = trace.solver_log.iter().map(|e| e.wall_time_s).sum();
        println!(
            "{tag}: {} solves, {stalled} stalled, {degraded} degraded, {wall:.1} s in the solver",
            trace.solver_log.len()
        );
    }
    Ok(())
}

fn simulate(setup: &Setup, controller: Controller) -> Result<(SimulationTrace, ResiliencyMetrics)> {
    let t0 = Instant::now();
    let trace = run_closed_loop(controller, &setup.scenario, &setup.config, &setup.options)?;
    let metrics = trace.metrics(&setup.config, setup.tol)?;
    log::info!(
        "{controller}: {} steps in {:.1} s",
        trace.len(),
        t0.elapsed().as_secs_f64()
    );
    Ok((trace, metrics))
}

fn print_metrics_row(name: &str, m: &ResiliencyMetrics) {
    println!(
        "{name:<12} {:>14.4} {:>14.2} {:>14.4}",
        m.temp_violation_hours_per_day, m.secondary_unserved_pct, m.primary_unserved_hours_per_day
    );
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        b = b.num_threads(n.max(1));
    }
    Ok(b.build()?)
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate { controller, scenario } => {
            let controller: Controller = controller.parse()?;
            let s = setup(cli, scenario)?;
            fs::create_dir_all(&cli.out)?;
            let (trace, m) = simulate(&s, controller)?;
            write_run(&cli.out, &controller.to_string(), &trace, &m)?;
            println!(
                "{:<12} {:>14} {:>14} {:>14}",
                "controller", "viol h/day", "sec unserved %", "prim h/day"
            );
            print_metrics_row(&controller.to_string(), &m);
        }
        Command::Compare { scenario } => {
            let s = setup(cli, scenario)?;
            fs::create_dir_all(&cli.out)?;
            let runs: Vec<_> = pool(cli.jobs)?.install(|| {
                [Controller::Baseline, Controller::Proposed]
                    .par_iter()
                    .map(|&c| simulate(&s, c).map(|r| (c, r)))
                    .collect::<Result<Vec<_>>>()
            })?;
            let mut table =
                String::from("controller,temp_violation_h_per_day,secondary_unserved_pct,primary_unserved_h_per_day\n");
            println!(
                "{:<12} {:>14} {:>14} {:>14}",
                "controller", "viol h/day", "sec unserved %", "prim h/day"
            );
            for (c, (trace, m)) in &runs {
                write_run(&cli.out, &c.to_string(), trace, m)?;
                print_metrics_row(&c.to_string(), m);
                table.push_str(&format!(
                    "{c},{},{},{}\n",
                    m.temp_violation_hours_per_day, m.secondary_unserved_pct, m.primary_unserved_hours_per_day
                ));
            }
            fs::write(cli.out.join("compare.csv"), table)?;
        }
        Command::SweepSizes { scenario } => {
            if scenario.size.is_some() {
                bail!("sweep-sizes runs every ladder size; drop --size");
            }
            let s = setup(cli, scenario)?;
            fs::create_dir_all(&cli.out)?;
            let mut jobs: Vec<(Controller, char, SystemSize)> = size_ladder()
                .into_iter()
                .map(|e| (Controller::Baseline, e.label, e.size))
                .collect();
            let a = size_ladder()[0];
            jobs.push((Controller::Proposed, a.label, a.size));
            let rows: Vec<_> = pool(cli.jobs)?.install(|| {
                jobs.par_iter()
                    .map(|&(c, label, size)| {
                        let sized = Setup {
                            scenario: s.scenario.clone(),
                            config: size.apply(&s.config),
                            options: s.options.clone(),
                            tol: s.tol,
                        };
                        simulate(&sized, c).map(|(_, m)| (c, label, size, m))
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
            let mut table = String::from(
                "controller,size,cost_usd,primary_unserved_h_per_day,temp_violation_h_per_day,secondary_unserved_pct\n",
            );
            println!("{:<10} {:>4} {:>8} {:>14}", "controller", "size", "cost", "prim h/day");
            for (c, label, size, m) in &rows {
                println!(
                    "{c:<10} {label:>4} {:>8.0} {:>14.4}",
                    size.total_cost_usd, m.primary_unserved_hours_per_day
                );
                table.push_str(&format!(
                    "{c},{label},{},{},{},{}\n",
                    size.total_cost_usd,
                    m.primary_unserved_hours_per_day,
                    m.temp_violation_hours_per_day,
                    m.secondary_unserved_pct
                ));
            }
            fs::write(cli.out.join("sweep_sizes.csv"), table)?;
        }
        Command::Size { spec, storage_days } => {
            let mut spec: SizingSpec = match spec {
                Some(p) => {
                    let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                    parse_sizing_spec(&text).with_context(|| format!("parsing {}", p.display()))?
                }
                None => SizingSpec::default(),
            };
            if let Some(d) = storage_days {
                spec.storage_days = *d;
            }
            let size = size_system(&spec)?;
            println!("panels in parallel:      {}", size.n_panels_parallel);
            println!("batteries in series:     {}", size.n_battery_series);
            println!("battery strings:         {}", size.n_battery_strings);
            println!(
                "system voltage:          {} V",
                f64::from(size.n_battery_series) * spec.battery_voltage_v
            );
            println!("cost:                    ${:.0}", size.total_cost_usd);
            println!();
            println!("assumptions:");
            print!("{}", sizing_spec_to_toml(&spec));
        }
        Command::SynthWeather { days, profile, output } => {
            let profile: WeatherProfile = profile.parse()?;
            let config = match &cli.config {
                Some(p) => load_config(p)?,
                None => SystemConfig::default(),
            };
            let w = synth_weather(*days, profile, cli.seed, config.step_minutes.round() as i64)?;
            let path = match output {
                Some(p) => p.clone(),
                None => {
                    fs::create_dir_all(&cli.out)?;
                    cli.out.join("weather.csv")
                }
            };
            w.write_csv(&path)?;
            println!("wrote {} records to {}", w.len(), path.display());
        }
    }
    Ok(())
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = run(&cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
