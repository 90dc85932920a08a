//! Ground-truth plant: applies commands to the device models, resolves
//! energy shortfalls by shedding load, and scores a run.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::NaiveDateTime;
use serde::{Deserialize, Serialize};

use crate::baseline::{baseline_step, BaselineState};
use crate::devices::{battery_step, fridge_discretize, fridge_energy, fridge_step, pv_energy_from_weather};
use crate::error::{Error, Result};
use crate::milp::{to_lp_string, MilpStatus, SolverOptions};
use crate::mpc::{build_mpc_milp, plan, ControlCommand, ForecastWindow};
use crate::scenario::{ForecastNoise, Scenario, SystemConfig, WeatherRecord, CSV_TIME_FORMAT};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantState {
    pub e_bat: f64,
    pub t_fr: f64,
    pub step_index: usize,
    /// Refrigerator command applied in the previous step.
    pub u_fr_prev: bool,
}

impl PlantState {
    /// Full battery, refrigerator at the configured starting temperature.
    pub fn initial(config: &SystemConfig) -> Self {
        Self {
            e_bat: config.battery.e_max_wh,
            t_fr: config.initial_fridge_temp_c,
            step_index: 0,
            u_fr_prev: false,
        }
    }
}

/// Energy flows over one step, Wh.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PlantFlows {
    pub e_pv: f64,
    pub e_pv_used: f64,
    pub e_pv_unused: f64,
    /// House load drawn through the inverter.
    pub e_hl: f64,
    /// Part of the house load supplied directly by PV.
    pub e_hl_from_pv: f64,
    pub e_charge: f64,
    /// Energy delivered by the battery to the bus.
    pub e_discharge: f64,
    /// Load-side energy not served because the refrigerator was shed.
    pub unserved_fr: f64,
    pub unserved_s: f64,
}

impl PlantFlows {
    /// Largest residual of the PV split and PV use identities.
    pub fn conservation_residual(&self) -> f64 {
        let split = (self.e_pv - self.e_pv_used - self.e_pv_unused).abs();
        let used = (self.e_pv_used - self.e_hl_from_pv - self.e_charge).abs();
        let load = (self.e_hl - self.e_hl_from_pv - self.e_discharge).abs();
        split.max(used).max(load)
    }

    pub fn all_nonnegative(&self) -> bool {
        [
            self.e_pv,
            self.e_pv_used,
            self.e_pv_unused,
            self.e_hl,
            self.e_hl_from_pv,
            self.e_charge,
            self.e_discharge,
            self.unserved_fr,
            self.unserved_s,
        ]
        .iter()
        .all(|x| *x >= 0.0)
    }
}

/// Advance the plant by one step. `e_secondary` is the scheduled
/// secondary-load energy. Returns the next state, the flows and the command
/// actually applied after shedding and battery limits.
pub fn plant_step(
    state: &PlantState,
    cmd: &ControlCommand,
    weather: &WeatherRecord,
    t_house: f64,
    e_secondary: f64,
    config: &SystemConfig,
) -> (PlantState, PlantFlows, ControlCommand) {
    let h = config.step_hours();
    let bat = &config.battery;
    let eta_inv = config.inverter_efficiency;
    let e_pv = pv_energy_from_weather(&config.pv, weather.ghi, weather.t_ambient, weather.wind_speed, h);
    let e_fr = fridge_energy(&config.fridge, h);

    let mut u_fr = cmd.u_fr;
    let mut u_s = cmd.u_s && e_secondary > 0.0;
    let supply = e_pv + bat.max_discharge(state.e_bat);
    let demand = |fr: bool, s: bool| (if fr { e_fr } else { 0.0 } + if s { e_secondary } else { 0.0 }) / eta_inv;
    let mut flows = PlantFlows {
        e_pv,
        ..PlantFlows::default()
    };
    if u_s && demand(u_fr, true) > supply {
        u_s = false;
        flows.unserved_s = e_secondary;
    }
    if u_fr && demand(true, u_s) > supply {
        u_fr = false;
        flows.unserved_fr = e_fr;
    }
    let e_hl = demand(u_fr, u_s);

    let e_charge = if cmd.c && e_pv > e_hl {
        (e_pv - e_hl).min(bat.max_charge(state.e_bat, cmd.x_bat.max(1)))
    } else {
        0.0
    };
    // Any deficit left after PV is drawn from the battery; shedding above
    // guarantees it is deliverable.
    let e_discharge = if e_pv < e_hl {
        (e_hl - e_pv).min(bat.max_discharge(state.e_bat))
    } else {
        0.0
    };
    let e_hl_from_pv = e_hl.min(e_pv);
    flows.e_hl = e_hl;
    flows.e_hl_from_pv = e_hl_from_pv;
    flows.e_charge = e_charge;
    flows.e_discharge = e_discharge;
    flows.e_pv_used = e_hl_from_pv + e_charge;
    flows.e_pv_unused = e_pv - flows.e_pv_used;

    let e_next = battery_step(bat, state.e_bat, e_charge, e_discharge)
        .expect("plant flows are one-directional and non-negative");
    debug_assert!(e_next >= bat.e_min_wh - 1e-6 && e_next <= bat.e_max_wh + 1e-6);
    let e_next = e_next.clamp(bat.e_min_wh, bat.e_max_wh);
    let disc = fridge_discretize(&config.fridge, h);
    let t_next = fridge_step(&disc, state.t_fr, u_fr, t_house);

    let cap = bat.e_charge_max_wh;
    let gamma = if e_charge > 0.0 {
        (e_charge / cap).min(bat.fast_multiplier).min(2.0)
    } else if e_discharge > 0.0 {
        -(e_discharge / cap).min(1.0)
    } else {
        0.0
    };
    let applied = ControlCommand::from_gamma(u_fr, u_s, gamma).expect("applied gamma is clamped to [-1, 2]");
    let next = PlantState {
        e_bat: e_next,
        t_fr: t_next,
        step_index: state.step_index + 1,
        u_fr_prev: u_fr,
    };
    (next, flows, applied)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Controller {
    Proposed,
    Baseline,
}

impl FromStr for Controller {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proposed" | "mpc" => Ok(Self::Proposed),
            "baseline" => Ok(Self::Baseline),
            _ => Err(Error::Invalid(format!("unknown controller {s:?} (proposed, baseline)"))),
        }
    }
}

impl fmt::Display for Controller {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Proposed => "proposed",
            Self::Baseline => "baseline",
        })
    }
}

/// One row of the trace CSV. State columns hold the value at the start of
/// the step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub timestamp: String,
    #[serde(rename = "T_fr")]
    pub t_fr: f64,
    #[serde(rename = "E_bat")]
    pub e_bat: f64,
    pub u_fr_req: u8,
    pub u_fr_applied: u8,
    pub u_s_req: u8,
    pub u_s_applied: u8,
    #[serde(rename = "gamma")]
    pub gamma: f64,
    pub c: u8,
    pub d: u8,
    pub x_bat: u8,
    #[serde(rename = "E_pv")]
    pub e_pv: f64,
    #[serde(rename = "E_pv_used")]
    pub e_pv_used: f64,
    #[serde(rename = "E_pv_unused")]
    pub e_pv_unused: f64,
    #[serde(rename = "E_hl")]
    pub e_hl: f64,
    #[serde(rename = "E_c")]
    pub e_c: f64,
    #[serde(rename = "E_dc")]
    pub e_dc: f64,
    pub unserved_fr: f64,
    pub unserved_s: f64,
    #[serde(rename = "E_s")]
    pub e_s: f64,
    #[serde(rename = "T_house")]
    pub t_house: f64,
    pub ghi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverLogEntry {
    pub step: usize,
    pub status: String,
    pub objective: f64,
    pub rel_gap: f64,
    pub nodes: usize,
    pub wall_time_s: f64,
    /// Stopped by the time limit, as a stalled solve.
    pub stalled: bool,
    pub degraded: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub controller: Controller,
    pub step_hours: f64,
    pub rows: Vec<TraceRow>,
    /// Empty for the baseline controller.
    pub solver_log: Vec<SolverLogEntry>,
    /// State after the last step.
    pub final_state: PlantState,
}

fn b(x: bool) -> u8 {
    u8::from(x)
}

impl SimulationTrace {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_rows(path, &self.rows)
    }

    pub fn write_solver_log(&self, path: &Path) -> Result<()> {
        write_rows(path, &self.solver_log)
    }
}

fn write_rows<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let file_err = |e: csv::Error| Error::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_path(path).map_err(file_err)?;
    for r in rows {
        w.serialize(r).map_err(file_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<TraceRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    r.deserialize()
        .map(|row| {
            row.map_err(|e| Error::Data {
                path: path.to_path_buf(),
                line: e.position().map_or(0, |p| p.line() as usize),
                message: e.to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct SimulationOptions {
    pub solver: SolverOptions,
    pub noise: ForecastNoise,
    /// Write every controller model and plan here when set.
    pub dump_dir: Option<PathBuf>,
}

/// Simulate the whole scenario window with one controller.
pub fn run_closed_loop(
    controller: Controller,
    scenario: &Scenario,
    config: &SystemConfig,
    options: &SimulationOptions,
) -> Result<SimulationTrace> {
    config.validate()?;
    options.noise.validate()?;
    if (scenario.weather.step_hours() - config.step_hours()).abs() > 1e-12 {
        return Err(Error::Invalid(format!(
            "scenario step of {} min does not match the configured {} min",
            scenario.weather.step_minutes(),
            config.step_minutes
        )));
    }
    let steps = scenario.steps();
    let n = config.horizon_steps;
    let inputs = scenario.inputs(n);
    let h = config.step_hours();
    if let Some(dir) = &options.dump_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }

    let mut state = PlantState::initial(config);
    let mut base = BaselineState::default();
    let mut rows = Vec::with_capacity(steps);
    let mut solver_log = Vec::new();
    for k in 0..steps {
        let w = &inputs.records[k];
        let e_s = inputs.e_secondary[k];
        let (requested, cmd) = match controller {
            Controller::Baseline => {
                let e_pv = pv_energy_from_weather(&config.pv, w.ghi, w.t_ambient, w.wind_speed, h);
                baseline_step(&mut base, state.t_fr, state.e_bat, e_pv, e_s, config)
            }
            Controller::Proposed => {
                let mut g_avail: Vec<f64> = inputs.records[k..k + n]
                    .iter()
                    .map(|r| pv_energy_from_weather(&config.pv, r.ghi, r.t_ambient, r.wind_speed, h))
                    .collect();
                options.noise.apply(&mut g_avail, k);
                let forecast = ForecastWindow {
                    g_avail,
                    t_house: inputs.t_house[k..k + n].to_vec(),
                    e_secondary: inputs.e_secondary[k..k + n].to_vec(),
                };
                let p = plan(&state, &forecast, config, &options.solver)?;
                if let Some(dir) = &options.dump_dir {
                    dump_step(dir, k, &state, &forecast, config, &p)?;
                }
                solver_log.push(SolverLogEntry {
                    step: k,
                    status: format!("{:?}", p.solver.status),
                    objective: p.solver.objective,
                    rel_gap: p.solver.rel_gap,
                    nodes: p.solver.nodes_explored,
                    wall_time_s: p.solver.wall_time,
                    stalled: p.solver.status == MilpStatus::TimeLimit,
                    degraded: p.degraded,
                });
                log::debug!(
                    "step {k}: {:?} gap {:.4} nodes {} in {:.3}s",
                    p.solver.status,
                    p.solver.rel_gap,
                    p.solver.nodes_explored,
                    p.solver.wall_time
                );
                (p.first(), p.first())
            }
        };
        let (next, flows, applied) = plant_step(&state, &cmd, w, inputs.t_house[k], e_s, config);
        rows.push(TraceRow {
            timestamp: w.timestamp.format(CSV_TIME_FORMAT).to_string(),
            t_fr: state.t_fr,
            e_bat: state.e_bat,
            u_fr_req: b(requested.u_fr),
            u_fr_applied: b(applied.u_fr),
            u_s_req: b(requested.u_s),
            u_s_applied: b(applied.u_s),
            gamma: applied.gamma,
            c: b(applied.c),
            d: b(applied.d),
            x_bat: applied.x_bat,
            e_pv: flows.e_pv,
            e_pv_used: flows.e_pv_used,
            e_pv_unused: flows.e_pv_unused,
            e_hl: flows.e_hl,
            e_c: flows.e_charge,
            e_dc: flows.e_discharge,
            unserved_fr: flows.unserved_fr,
            unserved_s: flows.unserved_s,
            e_s,
            t_house: inputs.t_house[k],
            ghi: w.ghi,
        });
        state = next;
    }
    Ok(SimulationTrace {
        controller,
        step_hours: h,
        rows,
        solver_log,
        final_state: state,
    })
}

fn dump_step(
    dir: &Path,
    k: usize,
    state: &PlantState,
    forecast: &ForecastWindow,
    config: &SystemConfig,
    p: &crate::mpc::MpcPlan,
) -> Result<()> {
    let model = build_mpc_milp(state, forecast, config)?;
    let lp = dir.join(format!("step{k:05}.lp"));
    std::fs::write(&lp, to_lp_string(&model)).map_err(|e| Error::io(&lp, e))?;
    let mut text = String::from("i,u_fr,u_s,gamma,g,zeta,E_bat,T_fr\n");
    for i in 0..p.commands.len() {
        let c = &p.commands[i];
        text.push_str(&format!(
            "{i},{},{},{},{},{},{},{}\n",
            b(c.u_fr),
            b(c.u_s),
            c.gamma,
            p.g_used[i],
            p.slack[i],
            p.predicted_e_bat[i],
            p.predicted_t_fr[i]
        ));
    }
    let path = dir.join(format!("step{k:05}_plan.csv"));
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayMetrics {
    pub day: usize,
    pub steps: usize,
    pub temp_violation_hours: f64,
    pub primary_unserved_hours: f64,
    pub secondary_scheduled_steps: usize,
    pub secondary_unserved_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResiliencyMetrics {
    pub days: f64,
    pub tol_c: f64,
    pub temp_violation_hours_per_day: f64,
    pub secondary_unserved_pct: f64,
    pub primary_unserved_hours_per_day: f64,
    pub per_day: Vec<DayMetrics>,
}

impl ResiliencyMetrics {
    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("metrics serialize")
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    /// Recompute the aggregates from the per-day records.
    pub fn from_days(per_day: Vec<DayMetrics>, step_hours: f64, tol_c: f64) -> Self {
        let steps: usize = per_day.iter().map(|d| d.steps).sum();
        let days = steps as f64 * step_hours / 24.0;
        let sum = |f: fn(&DayMetrics) -> f64| per_day.iter().map(f).sum::<f64>();
        let sched: usize = per_day.iter().map(|d| d.secondary_scheduled_steps).sum();
        let unserved: usize = per_day.iter().map(|d| d.secondary_unserved_steps).sum();
        let per = |x: f64| if days > 0.0 { x / days } else { 0.0 };
        Self {
            days,
            tol_c,
            temp_violation_hours_per_day: per(sum(|d| d.temp_violation_hours)),
            primary_unserved_hours_per_day: per(sum(|d| d.primary_unserved_hours)),
            secondary_unserved_pct: if sched > 0 {
                100.0 * unserved as f64 / sched as f64
            } else {
                0.0
            },
            per_day,
        }
    }
}

/// Band violations are counted on the temperature at the start of each step.
/// The refrigerator counts as unserved in a step when the plant shed it, or
/// when it sat above the band with the compressor off.
pub fn compute_metrics(rows: &[TraceRow], step_hours: f64, band: (f64, f64), tol: f64) -> Result<ResiliencyMetrics> {
    if rows.is_empty() {
        return Err(Error::Invalid("cannot score an empty trace".into()));
    }
    let per_day = (24.0 / step_hours).round() as usize;
    let days = rows
        .chunks(per_day.max(1))
        .enumerate()
        .map(|(day, chunk)| {
            let mut m = DayMetrics {
                day,
                steps: chunk.len(),
                temp_violation_hours: 0.0,
                primary_unserved_hours: 0.0,
                secondary_scheduled_steps: 0,
                secondary_unserved_steps: 0,
            };
            for r in chunk {
                let hot = r.t_fr > band.1 + tol;
                if hot || r.t_fr < band.0 - tol {
                    m.temp_violation_hours += step_hours;
                }
                if r.unserved_fr > 0.0 || (hot && r.u_fr_applied == 0) {
                    m.primary_unserved_hours += step_hours;
                }
                if r.e_s > 0.0 {
                    m.secondary_scheduled_steps += 1;
                    if r.u_s_applied == 0 {
                        m.secondary_unserved_steps += 1;
                    }
                }
            }
            m
        })
        .collect();
    Ok(ResiliencyMetrics::from_days(days, step_hours, tol))
}

impl SimulationTrace {
    pub fn metrics(&self, config: &SystemConfig, tol: f64) -> Result<ResiliencyMetrics> {
        compute_metrics(
            &self.rows,
            self.step_hours,
            (config.fridge.t_min_c, config.fridge.t_max_c),
            tol,
        )
    }
}

pub fn parse_row_time(r: &TraceRow) -> Option<NaiveDateTime> {
    crate::scenario::parse_timestamp(&r.timestamp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{synth_start, synth_weather, SecondaryLoadSchedule, WeatherProfile};

    fn weather(ghi: f64) -> WeatherRecord {
        WeatherRecord {
            timestamp: synth_start(),
            ghi,
            t_ambient: 25.0,
            wind_speed: 0.0,
        }
    }

    fn cmd(u_fr: bool, u_s: bool, gamma: f64) -> ControlCommand {
        ControlCommand::from_gamma(u_fr, u_s, gamma).unwrap()
    }

    fn st(e: f64) -> PlantState {
        PlantState {
            e_bat: e,
            t_fr: 3.0,
            step_index: 0,
            u_fr_prev: false,
        }
    }

    #[test]
    fn full_battery_takes_no_charge() {
        let c = SystemConfig::default();
        let (next, f, applied) = plant_step(&st(5400.0), &cmd(false, false, 1.0), &weather(900.0), 27.0, 0.0, &c);
        assert_eq!(f.e_charge, 0.0);
        assert_eq!(next.e_bat, 5400.0);
        assert!(!applied.c);
        assert_eq!(f.e_pv_unused, f.e_pv);
    }

    #[test]
    fn big_surplus_charges_at_the_cap() {
        let mut c = SystemConfig::default();
        c.pv.n_panels = 60;
        c.step_minutes = 10.0;
        let (next, f, _) = plant_step(&st(2000.0), &cmd(false, false, 1.0), &weather(1000.0), 27.0, 0.0, &c);
        assert!(f.e_pv > 810.0);
        assert_eq!(f.e_charge, 810.0);
        assert!((next.e_bat - (2000.0 + 0.9 * 810.0)).abs() < 1e-9);
        let (_, f2, applied) = plant_step(&st(2000.0), &cmd(false, false, 2.0), &weather(1000.0), 27.0, 0.0, &c);
        assert_eq!(f2.e_charge, 1620.0);
        assert_eq!(applied.x_bat, 2);
    }

    #[test]
    fn night_fridge_from_battery() {
        let c = SystemConfig::default();
        let (next, f, applied) = plant_step(&st(3000.0), &cmd(true, false, -0.1), &weather(0.0), 27.0, 0.0, &c);
        let e_hl = 250.0 / 6.0 / 0.9;
        assert!((f.e_discharge - e_hl).abs() < 1e-9);
        assert!((f.e_discharge - 46.3).abs() < 0.01);
        assert!((next.e_bat - (3000.0 - e_hl / 0.9)).abs() < 1e-9);
        assert!(applied.d && applied.u_fr);
        assert!(next.t_fr < 3.0);
    }

    #[test]
    fn shortfall_sheds_secondary_then_fridge() {
        let c = SystemConfig::default();
        let e_s = 308.0 / 6.0;
        // deliverable 45 Wh: fridge (46.3) does not fit either
        let (next, f, applied) = plant_step(&st(1130.0), &cmd(true, true, -1.0), &weather(0.0), 27.0, e_s, &c);
        assert!(!applied.u_fr && !applied.u_s);
        assert_eq!(f.unserved_s, e_s);
        assert!((f.unserved_fr - 250.0 / 6.0).abs() < 1e-12);
        assert_eq!(next.e_bat, 1130.0);
        // deliverable 90 Wh: fridge only
        let (_, f, applied) = plant_step(&st(1180.0), &cmd(true, true, -1.0), &weather(0.0), 27.0, e_s, &c);
        assert!(applied.u_fr && !applied.u_s);
        assert_eq!(f.unserved_fr, 0.0);
    }

    #[test]
    fn battery_stays_in_bounds() {
        let c = SystemConfig::default();
        for e in [1080.0, 1081.0, 1100.0, 5399.0, 5400.0] {
            for ghi in [0.0, 200.0, 1000.0] {
                for g in [-1.0, 0.0, 0.5, 2.0] {
                    let (next, f, applied) = plant_step(&st(e), &cmd(true, true, g), &weather(ghi), 27.0, 51.3, &c);
                    assert!(next.e_bat >= 1080.0 && next.e_bat <= 5400.0);
                    assert!(f.conservation_residual() <= 1e-9);
                    assert!(f.all_nonnegative());
                    assert!(applied.is_consistent());
                }
            }
        }
    }

    #[test]
    fn one_day_trace_has_144_rows() {
        let w = synth_weather(1, WeatherProfile::Clear, 0, 10).unwrap();
        let s = Scenario::new(w, None, SecondaryLoadSchedule::default()).unwrap();
        let c = SystemConfig::default();
        let t = run_closed_loop(Controller::Baseline, &s, &c, &SimulationOptions::default()).unwrap();
        assert_eq!(t.len(), 144);
        assert!(t.solver_log.is_empty());
    }

    #[test]
    fn dark_week_baseline_drains_monotonically() {
        let mut w = synth_weather(7, WeatherProfile::Clear, 0, 10).unwrap();
        let recs: Vec<_> = w.records().iter().map(|r| WeatherRecord { ghi: 0.0, ..*r }).collect();
        w = crate::scenario::WeatherSeries::new(10, recs).unwrap();
        let s = Scenario::new(w, None, SecondaryLoadSchedule::default()).unwrap();
        let t = run_closed_loop(
            Controller::Baseline,
            &s,
            &SystemConfig::default(),
            &SimulationOptions::default(),
        )
        .unwrap();
        for pair in t.rows.windows(2) {
            assert!(pair[1].e_bat <= pair[0].e_bat);
        }
        assert!(t.final_state.e_bat >= 1080.0);
    }

    fn row(t_fr: f64, u_fr: u8, e_s: f64, u_s: u8) -> TraceRow {
        TraceRow {
            timestamp: "2017-09-11T00:00".into(),
            t_fr,
            e_bat: 3000.0,
            u_fr_req: u_fr,
            u_fr_applied: u_fr,
            u_s_req: u_s,
            u_s_applied: u_s,
            gamma: 0.0,
            c: 0,
            d: 0,
            x_bat: 0,
            e_pv: 0.0,
            e_pv_used: 0.0,
            e_pv_unused: 0.0,
            e_hl: 0.0,
            e_c: 0.0,
            e_dc: 0.0,
            unserved_fr: 0.0,
            unserved_s: 0.0,
            e_s,
            t_house: 27.0,
            ghi: 0.0,
        }
    }

    #[test]
    fn metrics_counts() {
        let h = 1.0 / 6.0;
        let ok: Vec<TraceRow> = (0..144).map(|_| row(2.0, 0, 0.0, 0)).collect();
        let m = compute_metrics(&ok, h, (0.0, 4.0), 0.05).unwrap();
        assert_eq!(m.temp_violation_hours_per_day, 0.0);
        assert_eq!(m.secondary_unserved_pct, 0.0);

        let mut hot = ok.clone();
        for r in hot.iter_mut().take(36) {
            r.t_fr = 5.0;
        }
        let m = compute_metrics(&hot, h, (0.0, 4.0), 0.05).unwrap();
        assert!((m.temp_violation_hours_per_day - 6.0).abs() < 1e-9);
        assert!((m.primary_unserved_hours_per_day - 6.0).abs() < 1e-9);
        // within tolerance
        let edge: Vec<TraceRow> = (0..144).map(|_| row(4.04, 0, 0.0, 0)).collect();
        assert_eq!(
            compute_metrics(&edge, h, (0.0, 4.0), 0.05)
                .unwrap()
                .temp_violation_hours_per_day,
            0.0
        );

        let mixed: Vec<TraceRow> = (0..10).map(|i| row(2.0, 0, 50.0, u8::from(i % 2 == 0))).collect();
        assert_eq!(
            compute_metrics(&mixed, h, (0.0, 4.0), 0.05)
                .unwrap()
                .secondary_unserved_pct,
            50.0
        );
        assert!(compute_metrics(&[], h, (0.0, 4.0), 0.05).is_err());
    }

    #[test]
    fn metrics_toml_round_trip() {
        let rows: Vec<TraceRow> = (0..300)
            .map(|i| row(if i % 7 == 0 { 5.0 } else { 1.0 }, 0, 10.0, (i % 3 == 0) as u8))
            .collect();
        let m = compute_metrics(&rows, 1.0 / 6.0, (0.0, 4.0), 0.05).unwrap();
        assert_eq!(m.per_day.len(), 3);
        assert_eq!(ResiliencyMetrics::from_toml_str(&m.to_toml_string()).unwrap(), m);
    }
}
