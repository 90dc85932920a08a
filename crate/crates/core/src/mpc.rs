//! Receding-horizon MILP controller.
//!
//! Per step `i` of the horizon the model holds, in this order, `u_fr(i)`,
//! `u_s(i)`, `Γ(i)`, `g(i)`, `ζ(i)`, `E_bat(i+1)` and `T_fr(i+1)`. The
//! measured state enters the first thermal and battery rows as constants.

use serde::{Deserialize, Serialize};

use crate::baseline::{deadband_fridge, BaselineState};
use crate::devices::{fridge_discretize, fridge_energy, FridgeDiscretization};
use crate::error::{Error, Result};
use crate::milp::{
    check_solution, solve_lp, solve_milp, to_lp_string, LpStatus, MilpModel, MilpStatus, Relation, SolverOptions, VarId,
};
use crate::plant::PlantState;
use crate::scenario::SystemConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MpcParams {
    /// Weight on the refrigerator band slack.
    pub lambda1: f64,
    /// Reward on stored battery energy.
    pub lambda2: f64,
    /// Penalty on the charging fraction.
    pub lambda3: f64,
    /// Reward on serving the secondary loads.
    pub lambda4: f64,
    /// Battery efficiency inside the controller model.
    pub eta_con: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
}

impl Default for MpcParams {
    fn default() -> Self {
        Self {
            lambda1: 1.0,
            lambda2: 1.0,
            lambda3: 1.0,
            lambda4: 10.0,
            eta_con: 1.0,
            gamma_min: -1.0,
            gamma_max: 2.0,
        }
    }
}

impl MpcParams {
    pub fn validate(&self) -> Result<()> {
        let weights = [self.lambda1, self.lambda2, self.lambda3, self.lambda4];
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Invalid("mpc: weights must be >= 0".into()));
        }
        if !(self.eta_con > 0.0 && self.eta_con <= 1.0) {
            return Err(Error::Invalid("mpc: eta_con must lie in (0,1]".into()));
        }
        if !(self.gamma_min < 0.0 && self.gamma_max > 0.0 && self.gamma_min.is_finite() && self.gamma_max.is_finite()) {
            return Err(Error::Invalid("mpc: need gamma_min < 0 < gamma_max".into()));
        }
        Ok(())
    }
}

/// Exogenous predictions over the horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastWindow {
    /// PV energy potential per step, Wh.
    pub g_avail: Vec<f64>,
    pub t_house: Vec<f64>,
    /// Scheduled secondary-load energy per step, Wh.
    pub e_secondary: Vec<f64>,
}

impl ForecastWindow {
    pub fn len(&self) -> usize {
        self.g_avail.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g_avail.is_empty()
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.g_avail.len() != n || self.t_house.len() != n || self.e_secondary.len() != n {
            return Err(Error::Model(format!(
                "forecast lengths {}/{}/{} do not match horizon {n}",
                self.g_avail.len(),
                self.t_house.len(),
                self.e_secondary.len()
            )));
        }
        if self.g_avail.iter().any(|g| !(g.is_finite() && *g >= 0.0))
            || self.e_secondary.iter().any(|e| !(e.is_finite() && *e >= 0.0))
            || self.t_house.iter().any(|t| !t.is_finite())
        {
            return Err(Error::Model("forecast values must be finite and non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlCommand {
    pub u_fr: bool,
    pub u_s: bool,
    pub gamma: f64,
    pub c: bool,
    pub d: bool,
    /// 0 idle or discharging, 1 normal charge, 2 fast charge.
    pub x_bat: u8,
}

impl ControlCommand {
    pub fn from_gamma(u_fr: bool, u_s: bool, gamma: f64) -> Result<Self> {
        let (c, d, x_bat) = gamma_to_discrete(gamma)?;
        Ok(Self {
            u_fr,
            u_s,
            gamma,
            c,
            d,
            x_bat,
        })
    }

    pub fn is_consistent(&self) -> bool {
        let g = self.gamma;
        !(self.c && self.d)
            && self.c == (g > 0.0)
            && self.d == (g < 0.0)
            && match self.x_bat {
                0 => g <= 0.0,
                1 => g > 0.0 && g <= 1.0,
                2 => g > 1.0 && g <= 2.0,
                _ => false,
            }
    }
}

/// Charge flag, discharge flag and charging mode for a charging fraction.
pub fn gamma_to_discrete(gamma: f64) -> Result<(bool, bool, u8)> {
    if !(-1.0..=2.0).contains(&gamma) {
        return Err(Error::Contract(format!("gamma {gamma} outside [-1, 2]")));
    }
    let x_bat = if gamma <= 0.0 {
        0
    } else if gamma <= 1.0 {
        1
    } else {
        2
    };
    Ok((gamma > 0.0, gamma < 0.0, x_bat))
}

/// Position of each decision variable in the model built by [`build_mpc_milp`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MpcLayout {
    pub horizon: usize,
}

impl MpcLayout {
    const PER_STEP: usize = 7;

    fn at(&self, i: usize, k: usize) -> VarId {
        assert!(i < self.horizon);
        VarId(i * Self::PER_STEP + k)
    }
    pub fn u_fr(&self, i: usize) -> VarId {
        self.at(i, 0)
    }
    pub fn u_s(&self, i: usize) -> VarId {
        self.at(i, 1)
    }
    pub fn gamma(&self, i: usize) -> VarId {
        self.at(i, 2)
    }
    pub fn g(&self, i: usize) -> VarId {
        self.at(i, 3)
    }
    pub fn zeta(&self, i: usize) -> VarId {
        self.at(i, 4)
    }
    /// Battery energy at the end of step `i`.
    pub fn e_bat(&self, i: usize) -> VarId {
        self.at(i, 5)
    }
    /// Refrigerator temperature at the end of step `i`.
    pub fn t_fr(&self, i: usize) -> VarId {
        self.at(i, 6)
    }
}

/// Free-running refrigerator temperatures with the compressor off; the
/// highest temperature reachable at every step.
fn drift(disc: &FridgeDiscretization, t0: f64, t_house: &[f64]) -> Vec<f64> {
    let mut t = t0;
    t_house
        .iter()
        .map(|&th| {
            t = disc.a * t + disc.d * th;
            t
        })
        .collect()
}

pub fn build_mpc_milp(state: &PlantState, forecast: &ForecastWindow, config: &SystemConfig) -> Result<MilpModel> {
    let n = config.horizon_steps;
    if n == 0 {
        return Err(Error::Model("horizon must be ≥ 1".into()));
    }
    forecast.validate(n)?;
    if !state.e_bat.is_finite() || !state.t_fr.is_finite() {
        return Err(Error::Model("plant state is not finite".into()));
    }
    let p = &config.mpc;
    let bat = &config.battery;
    let fr = &config.fridge;
    let disc = fridge_discretize(fr, config.step_hours());
    let e_fr = fridge_energy(fr, config.step_hours());
    let e0 = state.e_bat.clamp(bat.e_min_wh, bat.e_max_wh);
    let t_floor = drift(&disc, state.t_fr, &forecast.t_house);
    let lay = MpcLayout { horizon: n };

    let mut m = MilpModel::new();
    for i in 0..n {
        let w = (n - i) as f64;
        let u_fr = m.add_binary(format!("u_fr_{i}"));
        let u_s = m.add_binary(format!("u_s_{i}"));
        if forecast.e_secondary[i] <= 0.0 {
            m.set_bounds(u_s, 0.0, 0.0);
        }
        let gamma = m.add_continuous(format!("gamma_{i}"), p.gamma_min, p.gamma_max);
        let g = m.add_continuous(format!("g_{i}"), 0.0, forecast.g_avail[i]);
        let zeta = m.add_continuous(format!("zeta_{i}"), 0.0, f64::INFINITY);
        let e = m.add_continuous(format!("e_bat_{}", i + 1), bat.e_min_wh, bat.e_max_wh);
        // The lower band edge is hard, relaxed only where a cold start makes
        // it unreachable even with the compressor off.
        let t = m.add_continuous(format!("t_fr_{}", i + 1), fr.t_min_c.min(t_floor[i]), f64::INFINITY);
        debug_assert_eq!((u_fr, t), (lay.u_fr(i), lay.t_fr(i)));

        m.set_objective(zeta, p.lambda1 * w);
        m.set_objective(e, -p.lambda2);
        m.set_objective(gamma, p.lambda3);
        m.set_objective(u_s, -p.lambda4 * w);

        let bq = disc.b * disc.q;
        if i == 0 {
            m.add_constraint(
                format!("thermal_{i}"),
                [(t, 1.0), (u_fr, -bq)],
                Relation::Eq,
                disc.a * state.t_fr + disc.d * forecast.t_house[0],
            );
            m.add_constraint(
                format!("battery_{i}"),
                [(e, 1.0), (gamma, -p.eta_con * bat.e_charge_max_wh)],
                Relation::Eq,
                e0,
            );
        } else {
            m.add_constraint(
                format!("thermal_{i}"),
                [(t, 1.0), (lay.t_fr(i - 1), -disc.a), (u_fr, -bq)],
                Relation::Eq,
                disc.d * forecast.t_house[i],
            );
            m.add_constraint(
                format!("battery_{i}"),
                [
                    (e, 1.0),
                    (lay.e_bat(i - 1), -1.0),
                    (gamma, -p.eta_con * bat.e_charge_max_wh),
                ],
                Relation::Eq,
                0.0,
            );
        }
        m.add_constraint(
            format!("balance_{i}"),
            [
                (u_fr, e_fr),
                (gamma, bat.e_charge_max_wh),
                (u_s, forecast.e_secondary[i]),
                (g, -1.0),
            ],
            Relation::Eq,
            0.0,
        );
        m.add_constraint(format!("band_{i}"), [(t, 1.0), (zeta, -1.0)], Relation::Le, fr.t_max_c);
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveSummary {
    pub status: MilpStatus,
    pub objective: f64,
    pub best_bound: f64,
    pub rel_gap: f64,
    pub nodes_explored: usize,
    pub lp_iterations: usize,
    pub wall_time: f64,
}

#[derive(Debug, Clone)]
pub struct MpcPlan {
    pub commands: Vec<ControlCommand>,
    pub predicted_e_bat: Vec<f64>,
    pub predicted_t_fr: Vec<f64>,
    pub slack: Vec<f64>,
    pub g_used: Vec<f64>,
    pub solver: SolveSummary,
    /// The solver gave no usable incumbent and the rule-based fallback ran.
    pub degraded: bool,
}

impl MpcPlan {
    pub fn first(&self) -> ControlCommand {
        self.commands[0]
    }
}

/// Γ values within this distance of zero are treated as zero.
const GAMMA_ZERO: f64 = 1e-9;

fn snap_gamma(g: f64, p: &MpcParams) -> f64 {
    if g.abs() < GAMMA_ZERO {
        0.0
    } else {
        g.clamp(p.gamma_min.max(-1.0), p.gamma_max.min(2.0))
    }
}

/// Forward simulation of the controller's own battery and thermal rows.
pub fn predict(
    state: &PlantState,
    commands: &[ControlCommand],
    t_house: &[f64],
    config: &SystemConfig,
) -> (Vec<f64>, Vec<f64>) {
    let disc = fridge_discretize(&config.fridge, config.step_hours());
    let bat = &config.battery;
    let mut e = state.e_bat.clamp(bat.e_min_wh, bat.e_max_wh);
    let mut t = state.t_fr;
    let mut es = Vec::with_capacity(commands.len());
    let mut ts = Vec::with_capacity(commands.len());
    for (cmd, &th) in commands.iter().zip(t_house) {
        e += cmd.gamma * config.mpc.eta_con * bat.e_charge_max_wh;
        t = disc.a * t + disc.b * if cmd.u_fr { disc.q } else { 0.0 } + disc.d * th;
        es.push(e);
        ts.push(t);
    }
    (es, ts)
}

/// Solve one horizon and return the full command sequence.
pub fn plan(
    state: &PlantState,
    forecast: &ForecastWindow,
    config: &SystemConfig,
    options: &SolverOptions,
) -> Result<MpcPlan> {
    let model = build_mpc_milp(state, forecast, config)?;
    let n = config.horizon_steps;
    let lay = MpcLayout { horizon: n };
    let sol = solve_milp(&model, options);
    let summary = SolveSummary {
        status: sol.status,
        objective: sol.objective,
        best_bound: sol.best_bound,
        rel_gap: sol.rel_gap,
        nodes_explored: sol.nodes_explored,
        lp_iterations: sol.lp_iterations,
        wall_time: sol.wall_time,
    };
    match sol.status {
        MilpStatus::Infeasible | MilpStatus::Unbounded => {
            let dump = std::env::temp_dir().join(format!("mpc-step{}-{}.lp", state.step_index, std::process::id()));
            let note = match std::fs::write(&dump, to_lp_string(&model)) {
                Ok(()) => format!("model written to {}", dump.display()),
                Err(e) => format!("model dump failed: {e}"),
            };
            return Err(Error::Solver(format!(
                "controller model at step {} is {:?}; {note}",
                state.step_index, sol.status
            )));
        }
        _ if !sol.has_incumbent() => {
            log::warn!(
                "step {}: solver returned {:?} without a solution, using fallback",
                state.step_index,
                sol.status
            );
            return fallback(state, forecast, config, summary);
        }
        _ => {}
    }

    // Re-solve the LP over the continuous variables with the binaries fixed,
    // so the continuous part is a clean vertex.
    let mut values = sol.values;
    let mut fixed = model.clone();
    for b in model.binaries().collect::<Vec<_>>() {
        let v = values[b.0].round();
        fixed.set_bounds(b, v, v);
    }
    let polished = solve_lp(&fixed);
    if polished.status == LpStatus::Optimal {
        values = polished.values;
    } else {
        log::debug!("step {}: polish LP returned {:?}", state.step_index, polished.status);
    }
    let violations = check_solution(&model, &values, 1e-6);
    if !violations.is_empty() {
        return Err(Error::Solver(format!(
            "step {}: solution violates the model: {}",
            state.step_index, violations[0]
        )));
    }

    let mut commands = Vec::with_capacity(n);
    for i in 0..n {
        let gamma = snap_gamma(values[lay.gamma(i).0], &config.mpc);
        commands.push(ControlCommand::from_gamma(
            values[lay.u_fr(i).0] > 0.5,
            values[lay.u_s(i).0] > 0.5,
            gamma,
        )?);
    }
    let predicted_e_bat: Vec<f64> = (0..n).map(|i| values[lay.e_bat(i).0]).collect();
    let predicted_t_fr: Vec<f64> = (0..n).map(|i| values[lay.t_fr(i).0]).collect();
    let (e_sim, t_sim) = predict(state, &commands, &forecast.t_house, config);
    for i in 0..n {
        let de = (e_sim[i] - predicted_e_bat[i]).abs();
        let dt = (t_sim[i] - predicted_t_fr[i]).abs();
        if de > 1e-6 * predicted_e_bat[i].abs().max(1.0) || dt > 1e-6 * predicted_t_fr[i].abs().max(1.0) {
            return Err(Error::Solver(format!(
                "step {}: predicted trajectory disagrees with re-simulation at horizon step {i} (ΔE {de:.3e}, ΔT {dt:.3e})",
                state.step_index
            )));
        }
    }
    Ok(MpcPlan {
        commands,
        predicted_e_bat,
        predicted_t_fr,
        slack: (0..n).map(|i| values[lay.zeta(i).0]).collect(),
        g_used: (0..n).map(|i| values[lay.g(i).0]).collect(),
        solver: summary,
        degraded: false,
    })
}

/// Dead-band refrigerator, secondary loads off, and Γ following the PV
/// surplus within the battery limits.
fn fallback(
    state: &PlantState,
    forecast: &ForecastWindow,
    config: &SystemConfig,
    solver: SolveSummary,
) -> Result<MpcPlan> {
    let p = &config.mpc;
    let bat = &config.battery;
    let fr = &config.fridge;
    let disc = fridge_discretize(fr, config.step_hours());
    let e_fr = fridge_energy(fr, config.step_hours());
    let cap = bat.e_charge_max_wh;
    let mut dead = BaselineState {
        u_fr_prev: state.u_fr_prev,
    };
    let mut e = state.e_bat.clamp(bat.e_min_wh, bat.e_max_wh);
    let mut t = state.t_fr;
    let mut plan = MpcPlan {
        commands: Vec::new(),
        predicted_e_bat: Vec::new(),
        predicted_t_fr: Vec::new(),
        slack: Vec::new(),
        g_used: Vec::new(),
        solver,
        degraded: true,
    };
    for i in 0..forecast.len() {
        let u_fr = deadband_fridge(&mut dead, t, fr.t_min_c, fr.t_max_c);
        let load = if u_fr { e_fr } else { 0.0 };
        let surplus = forecast.g_avail[i] - load;
        let gamma = if surplus >= 0.0 {
            (surplus / cap)
                .min(1.0)
                .min(p.gamma_max)
                .min((bat.e_max_wh - e) / (p.eta_con * cap))
        } else {
            (surplus / cap)
                .max(p.gamma_min)
                .max(-(e - bat.e_min_wh) / (p.eta_con * cap))
        };
        let gamma = snap_gamma(gamma.max(p.gamma_min), p);
        let cmd = ControlCommand::from_gamma(u_fr, false, gamma)?;
        e += gamma * p.eta_con * cap;
        t = disc.a * t + disc.b * if u_fr { disc.q } else { 0.0 } + disc.d * forecast.t_house[i];
        plan.g_used.push((load + gamma * cap).clamp(0.0, forecast.g_avail[i]));
        plan.slack.push((t - fr.t_max_c).max(0.0));
        plan.commands.push(cmd);
        plan.predicted_e_bat.push(e);
        plan.predicted_t_fr.push(t);
    }
    Ok(plan)
}
