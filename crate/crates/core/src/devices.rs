//! Physical models of the PV array, battery, refrigerator and loads.
//!
//! Energy quantities are watt-hours accumulated over one step of `step_hours`.
//! The refrigerator discretization works in seconds because its thermal
//! capacitance is given in J/°C.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// PV array parameters. Defaults are a three-panel array of 285 W
/// polycrystalline modules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PvArrayParams {
    pub n_panels: u32,
    pub rated_power_w: f64,
    /// Temperature coefficient of power, %/°C.
    pub gamma_pct_per_c: f64,
    pub g_std_w_per_m2: f64,
    pub t_std_c: f64,
    /// Faiman constant heat-transfer coefficient.
    pub u0_w_per_m2k: f64,
    /// Faiman convective coefficient, per m/s of wind.
    pub u1_w_per_m2k_per_ms: f64,
    /// Use the denominator `U0 + U1 + W` instead of `U0 + U1 * W`.
    pub faiman_literal: bool,
}

impl Default for PvArrayParams {
    fn default() -> Self {
        Self {
            n_panels: 3,
            rated_power_w: 285.0,
            gamma_pct_per_c: -0.39,
            g_std_w_per_m2: 1000.0,
            t_std_c: 25.0,
            u0_w_per_m2k: 25.0,
            u1_w_per_m2k_per_ms: 6.84,
            faiman_literal: false,
        }
    }
}

impl PvArrayParams {
    pub fn validate(&self) -> Result<()> {
        check(self.n_panels >= 1, "pv.n_panels must be >= 1")?;
        check(positive(self.rated_power_w), "pv.rated_power_w must be > 0")?;
        check(positive(self.g_std_w_per_m2), "pv.g_std_w_per_m2 must be > 0")?;
        check(positive(self.u0_w_per_m2k), "pv.u0_w_per_m2k must be > 0")?;
        check(
            self.u1_w_per_m2k_per_ms.is_finite() && self.u1_w_per_m2k_per_ms >= 0.0,
            "pv.u1_w_per_m2k_per_ms must be >= 0",
        )?;
        check(
            self.gamma_pct_per_c.is_finite() && self.t_std_c.is_finite(),
            "pv.gamma_pct_per_c and pv.t_std_c must be finite",
        )
    }
}

/// Battery bucket parameters. Rates are energies per simulation step in
/// normal charging mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BatteryParams {
    pub e_min_wh: f64,
    pub e_max_wh: f64,
    pub e_charge_max_wh: f64,
    pub e_discharge_max_wh: f64,
    pub eta_charge: f64,
    pub eta_discharge: f64,
    /// Charging cap multiplier in fast mode.
    pub fast_multiplier: f64,
}

impl Default for BatteryParams {
    fn default() -> Self {
        Self {
            e_min_wh: 1080.0,
            e_max_wh: 5400.0,
            e_charge_max_wh: 810.0,
            e_discharge_max_wh: 844.5,
            eta_charge: 0.9,
            eta_discharge: 0.9,
            fast_multiplier: 2.0,
        }
    }
}

impl BatteryParams {
    pub fn validate(&self) -> Result<()> {
        check(
            self.e_min_wh.is_finite() && self.e_min_wh >= 0.0 && self.e_min_wh < self.e_max_wh,
            "battery energy bounds must satisfy 0 <= e_min_wh < e_max_wh",
        )?;
        check(self.e_max_wh.is_finite(), "battery.e_max_wh must be finite")?;
        check(positive(self.e_charge_max_wh), "battery.e_charge_max_wh must be > 0")?;
        check(
            positive(self.e_discharge_max_wh),
            "battery.e_discharge_max_wh must be > 0",
        )?;
        check(
            fraction(self.eta_charge) && fraction(self.eta_discharge),
            "battery efficiencies must lie in (0,1]",
        )?;
        check(
            self.fast_multiplier.is_finite() && self.fast_multiplier >= 1.0,
            "battery.fast_multiplier must be >= 1",
        )
    }

    /// Largest energy the battery can deliver this step without leaving its
    /// lower bound, counted on the delivered side of the discharge efficiency.
    pub fn max_discharge(&self, e_now: f64) -> f64 {
        ((e_now - self.e_min_wh) * self.eta_discharge)
            .min(self.e_discharge_max_wh)
            .max(0.0)
    }

    /// Largest energy the battery can absorb this step without exceeding its
    /// upper bound, for charging mode `x_bat` (1 normal, 2 fast).
    pub fn max_charge(&self, e_now: f64, x_bat: u8) -> f64 {
        let cap = match x_bat {
            0 => 0.0,
            1 => self.e_charge_max_wh,
            _ => self.fast_multiplier * self.e_charge_max_wh,
        };
        ((self.e_max_wh - e_now) / self.eta_charge).min(cap).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FridgeParams {
    pub c_thermal_j_per_c: f64,
    pub r_thermal_c_per_w: f64,
    pub cop: f64,
    pub rated_power_w: f64,
    pub t_min_c: f64,
    pub t_max_c: f64,
}

impl Default for FridgeParams {
    fn default() -> Self {
        Self {
            c_thermal_j_per_c: 8937.4,
            r_thermal_c_per_w: 1.4749,
            cop: 0.2324,
            rated_power_w: 250.0,
            t_min_c: 0.0,
            t_max_c: 4.0,
        }
    }
}

impl FridgeParams {
    pub fn validate(&self) -> Result<()> {
        check(positive(self.c_thermal_j_per_c), "fridge.c_thermal_j_per_c must be > 0")?;
        check(positive(self.r_thermal_c_per_w), "fridge.r_thermal_c_per_w must be > 0")?;
        check(positive(self.cop), "fridge.cop must be > 0")?;
        check(
            self.rated_power_w.is_finite() && self.rated_power_w >= 0.0,
            "fridge.rated_power_w must be >= 0",
        )?;
        check(
            self.t_min_c.is_finite() && self.t_max_c.is_finite() && self.t_min_c < self.t_max_c,
            "fridge temperature band must satisfy t_min_c < t_max_c",
        )
    }
}

/// Exact zero-order-hold discretization of the first-order fridge model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FridgeDiscretization {
    pub a: f64,
    /// °C per W of rejected heat.
    pub b: f64,
    pub d: f64,
    /// Heat rejected while the compressor runs, W.
    pub q: f64,
}

fn check(ok: bool, message: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(message.to_string()))
    }
}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

fn fraction(x: f64) -> bool {
    x.is_finite() && x > 0.0 && x <= 1.0
}

/// Energy the array could deliver over one step. Never negative.
pub fn pv_energy(params: &PvArrayParams, ghi: f64, t_module: f64, step_hours: f64) -> f64 {
    let derate = 1.0 + params.gamma_pct_per_c / 100.0 * (t_module - params.t_std_c);
    let e = f64::from(params.n_panels) * params.rated_power_w * (ghi / params.g_std_w_per_m2) * derate * step_hours;
    e.max(0.0)
}

/// Faiman module temperature.
pub fn module_temperature(params: &PvArrayParams, ghi: f64, t_ambient: f64, wind: f64) -> f64 {
    let u = if params.faiman_literal {
        params.u0_w_per_m2k + params.u1_w_per_m2k_per_ms + wind
    } else {
        params.u0_w_per_m2k + params.u1_w_per_m2k_per_ms * wind
    };
    t_ambient + ghi / u
}

/// PV energy potential straight from weather inputs.
pub fn pv_energy_from_weather(params: &PvArrayParams, ghi: f64, t_ambient: f64, wind: f64, step_hours: f64) -> f64 {
    let t_m = module_temperature(params, ghi, t_ambient, wind);
    pv_energy(params, ghi, t_m, step_hours)
}

/// Advance the battery energy by one step. Bounds are the caller's job.
pub fn battery_step(params: &BatteryParams, e_now: f64, e_charge: f64, e_discharge: f64) -> Result<f64> {
    if e_charge < 0.0 || e_discharge < 0.0 {
        return Err(Error::Contract(format!(
            "battery flows must be non-negative (charge {e_charge}, discharge {e_discharge})"
        )));
    }
    if e_charge > 0.0 && e_discharge > 0.0 {
        return Err(Error::Contract(
            "battery cannot charge and discharge in the same step".into(),
        ));
    }
    Ok(e_now + params.eta_charge * e_charge - e_discharge / params.eta_discharge)
}

pub fn fridge_discretize(params: &FridgeParams, step_hours: f64) -> FridgeDiscretization {
    let dt = step_hours * 3600.0;
    let tau = params.c_thermal_j_per_c * params.r_thermal_c_per_w;
    let a_c = -1.0 / tau;
    let b_c = -1.0 / params.c_thermal_j_per_c;
    let d_c = 1.0 / tau;
    // exp_m1 keeps (A - 1) accurate for short steps.
    let am1 = (a_c * dt).exp_m1();
    FridgeDiscretization {
        a: am1 + 1.0,
        b: am1 / a_c * b_c,
        d: am1 / a_c * d_c,
        q: params.cop * params.rated_power_w,
    }
}

pub fn fridge_step(disc: &FridgeDiscretization, t_fridge: f64, u_fr: bool, t_house: f64) -> f64 {
    let u = if u_fr { 1.0 } else { 0.0 };
    disc.a * t_fridge + disc.b * u * disc.q + disc.d * t_house
}

pub fn fridge_energy(params: &FridgeParams, step_hours: f64) -> f64 {
    params.rated_power_w * step_hours
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    const STEP: f64 = 1.0 / 6.0;

    #[test]
    fn pv_energy_examples() {
        let p = PvArrayParams::default();
        assert_eq!(pv_energy(&p, 0.0, 40.0, STEP), 0.0);
        assert!(close(pv_energy(&p, 1000.0, 25.0, STEP), 142.5, 1e-9));
        // 855 * 0.5 * (1 - 0.0039 * 10) / 6
        assert!(close(pv_energy(&p, 500.0, 35.0, STEP), 68.47125, 1e-9));
    }

    #[test]
    fn pv_energy_clamps_at_extreme_heat() {
        let p = PvArrayParams::default();
        // derate goes negative above ~281 °C
        assert_eq!(pv_energy(&p, 800.0, 400.0, STEP), 0.0);
    }

    #[test]
    fn module_temperature_examples() {
        let mut p = PvArrayParams::default();
        assert_eq!(module_temperature(&p, 0.0, 17.0, 9.0), 17.0);
        assert!(close(
            module_temperature(&p, 800.0, 30.0, 2.0),
            30.0 + 800.0 / 38.68,
            1e-12
        ));
        assert!(close(module_temperature(&p, 800.0, 30.0, 2.0), 50.68, 5e-3));
        p.faiman_literal = true;
        assert!(close(module_temperature(&p, 800.0, 30.0, 2.0), 53.64, 5e-3));
    }

    #[test]
    fn battery_step_examples() {
        let p = BatteryParams::default();
        assert!(close(battery_step(&p, 3000.0, 500.0, 0.0).unwrap(), 3450.0, 1e-9));
        assert!(close(battery_step(&p, 3000.0, 0.0, 450.0).unwrap(), 2500.0, 1e-9));
        assert_eq!(battery_step(&p, 3000.0, 0.0, 0.0).unwrap(), 3000.0);
        assert!(matches!(battery_step(&p, 3000.0, 10.0, 10.0), Err(Error::Contract(_))));
        assert!(battery_step(&p, 3000.0, -1.0, 0.0).is_err());
    }

    #[test]
    fn battery_round_trip_loses_both_efficiencies() {
        let p = BatteryParams::default();
        let gross = 400.0;
        let up = battery_step(&p, 3000.0, gross, 0.0).unwrap();
        // deliver the energy that was stored, measured at the terminals
        let stored = up - 3000.0;
        let delivered = stored * p.eta_discharge;
        assert!(close(delivered / gross, p.eta_charge * p.eta_discharge, 1e-12));
        assert!(close(battery_step(&p, up, 0.0, delivered).unwrap(), 3000.0, 1e-9));
    }

    #[test]
    fn battery_headroom_respects_bounds() {
        let p = BatteryParams::default();
        assert_eq!(p.max_charge(p.e_max_wh, 1), 0.0);
        assert_eq!(p.max_charge(3000.0, 1), 810.0);
        assert_eq!(p.max_charge(3000.0, 2), 1620.0);
        assert_eq!(p.max_charge(3000.0, 0), 0.0);
        let e = 1100.0;
        let dc = p.max_discharge(e);
        assert!(close(battery_step(&p, e, 0.0, dc).unwrap(), p.e_min_wh, 1e-9));
        assert_eq!(p.max_discharge(5400.0), 844.5);
    }

    #[test]
    fn fridge_constants_for_ten_minute_step() {
        let d = fridge_discretize(&FridgeParams::default(), STEP);
        assert!(close(d.a, 0.95550, 5e-5));
        assert!(close(d.d, 0.04450, 5e-5));
        assert!(close(d.b, -0.06563, 5e-5));
        assert!(close(d.q, 58.1, 1e-9));
        assert!((d.a + d.d - 1.0).abs() <= 1e-12);
        assert!(d.b < 0.0 && d.a > 0.0 && d.a < 1.0);
    }

    #[test]
    fn fridge_short_step_limit() {
        let d = fridge_discretize(&FridgeParams::default(), 1e-9);
        assert!(close(d.a, 1.0, 1e-9));
        assert!(d.b.abs() < 1e-9 && d.d.abs() < 1e-9);
    }

    #[test]
    fn fridge_step_examples() {
        let d = fridge_discretize(&FridgeParams::default(), STEP);
        assert!(close(fridge_step(&d, 25.0, false, 25.0), 25.0, 1e-12));
        assert!(close(fridge_step(&d, 4.0, true, 25.0), 1.12, 5e-3));
        assert!(close(fridge_step(&d, 4.0, false, 25.0), 4.93, 5e-3));
    }

    #[test]
    fn fridge_energy_examples() {
        let mut p = FridgeParams::default();
        assert!(close(fridge_energy(&p, STEP), 41.6667, 1e-4));
        assert_eq!(fridge_energy(&p, 1.0), 250.0);
        p.rated_power_w = 0.0;
        assert_eq!(fridge_energy(&p, STEP), 0.0);
    }

    #[test]
    fn validation_rejects_bad_params() {
        let mut b = BatteryParams::default();
        b.eta_charge = 1.2;
        assert!(b.validate().is_err());
        let mut f = FridgeParams::default();
        f.t_min_c = 5.0;
        assert!(f.validate().is_err());
        let mut p = PvArrayParams::default();
        p.n_panels = 0;
        assert!(p.validate().is_err());
        assert!(PvArrayParams::default().validate().is_ok());
    }
}
