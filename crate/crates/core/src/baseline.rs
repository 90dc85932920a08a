//! Rule-based comparison controller: a dead-band thermostat for the
//! refrigerator and a charge controller that serves whatever the current
//! step can afford.

use crate::devices::{fridge_energy, BatteryParams};
use crate::mpc::ControlCommand;
use crate::scenario::SystemConfig;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BaselineState {
    pub u_fr_prev: bool,
}

/// On at or above `t_max`, off at or below `t_min`, unchanged in between.
pub fn deadband_fridge(state: &mut BaselineState, t_fridge: f64, t_min: f64, t_max: f64) -> bool {
    let u = if t_fridge >= t_max {
        true
    } else if t_fridge <= t_min {
        false
    } else {
        state.u_fr_prev
    };
    state.u_fr_prev = u;
    u
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dispatch {
    pub u_fr: bool,
    pub u_s: bool,
    pub c: bool,
    pub d: bool,
}

/// Grants requested loads when PV plus the deliverable battery energy covers
/// the inverter-side demand. Secondary loads are shed first; once the
/// refrigerator cannot be covered nothing is served.
pub fn baseline_dispatch(
    e_pv: f64,
    demand_fr: f64,
    demand_s: f64,
    e_bat: f64,
    params: &BatteryParams,
    eta_inv: f64,
) -> Dispatch {
    let available = e_pv + params.max_discharge(e_bat);
    let fits = |fr: f64, s: f64| (fr + s) / eta_inv <= available;
    let (u_fr, u_s) = if fits(demand_fr, demand_s) {
        (demand_fr > 0.0, demand_s > 0.0)
    } else if demand_fr > 0.0 && fits(demand_fr, 0.0) {
        (true, false)
    } else {
        (false, false)
    };
    let e_hl = (if u_fr { demand_fr } else { 0.0 } + if u_s { demand_s } else { 0.0 }) / eta_inv;
    Dispatch {
        u_fr,
        u_s,
        c: e_pv > e_hl,
        d: e_pv < e_hl,
    }
}

/// Commands for one step: the request (thermostat and schedule) and the
/// granted command. Normal charging only.
pub fn baseline_step(
    state: &mut BaselineState,
    t_fridge: f64,
    e_bat: f64,
    e_pv: f64,
    e_secondary: f64,
    config: &SystemConfig,
) -> (ControlCommand, ControlCommand) {
    let fr = &config.fridge;
    let want_fr = deadband_fridge(state, t_fridge, fr.t_min_c, fr.t_max_c);
    let want_s = e_secondary > 0.0;
    let e_fr = fridge_energy(fr, config.step_hours());
    let d = baseline_dispatch(
        e_pv,
        if want_fr { e_fr } else { 0.0 },
        if want_s { e_secondary } else { 0.0 },
        e_bat,
        &config.battery,
        config.inverter_efficiency,
    );
    let gamma_of = |c: bool, d: bool| {
        if c {
            1.0
        } else if d {
            -1.0
        } else {
            0.0
        }
    };
    let requested = ControlCommand {
        u_fr: want_fr,
        u_s: want_s,
        gamma: gamma_of(d.c, d.d),
        c: d.c,
        d: d.d,
        x_bat: u8::from(d.c),
    };
    let granted = ControlCommand {
        u_fr: d.u_fr,
        u_s: d.u_s,
        ..requested
    };
    (requested, granted)
}
