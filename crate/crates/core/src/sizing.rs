//! Stand-alone PV system sizing and the fixed size/cost ladder.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::SystemConfig;

/// Inputs to the sizing method. The defaults are a calibration: the
/// published loads (3408 Wh/day of lights and fans plus a refrigerator at a
/// 6.5 % duty cycle), 5.2 peak-sun-hours, and 12 V / 225 Ah units usable to
/// 80 % depth of discharge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SizingSpec {
    pub daily_demand_wh: f64,
    pub insolation_peak_sun_hours: f64,
    pub storage_days: f64,
    pub system_voltage_v: f64,
    pub panel_rated_w: f64,
    pub panel_cost_usd: f64,
    pub battery_capacity_wh: f64,
    pub battery_voltage_v: f64,
    pub battery_max_dod: f64,
    pub battery_cost_usd: f64,
    pub inverter_efficiency: f64,
}

impl Default for SizingSpec {
    fn default() -> Self {
        Self {
            daily_demand_wh: 3408.0 + 250.0 * 24.0 * 0.065,
            insolation_peak_sun_hours: 5.2,
            storage_days: 1.0,
            system_voltage_v: 24.0,
            panel_rated_w: 285.0,
            panel_cost_usd: 100.0,
            battery_capacity_wh: 12.0 * 225.0,
            battery_voltage_v: 12.0,
            battery_max_dod: 0.8,
            battery_cost_usd: 400.0,
            inverter_efficiency: 0.9,
        }
    }
}

impl SizingSpec {
    pub fn validate(&self) -> Result<()> {
        if self.insolation_peak_sun_hours == 0.0 {
            return Err(Error::Invalid("cannot size for zero sun".into()));
        }
        let positive = [
            self.daily_demand_wh,
            self.insolation_peak_sun_hours,
            self.storage_days,
            self.system_voltage_v,
            self.panel_rated_w,
            self.panel_cost_usd,
            self.battery_capacity_wh,
            self.battery_voltage_v,
            self.battery_cost_usd,
            self.inverter_efficiency,
        ];
        if positive.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::Invalid("sizing inputs must all be positive".into()));
        }
        if !(self.battery_max_dod > 0.0 && self.battery_max_dod <= 1.0) || self.inverter_efficiency > 1.0 {
            return Err(Error::Invalid(
                "depth of discharge and inverter efficiency must lie in (0,1]".into(),
            ));
        }
        Ok(())
    }
}

pub fn parse_sizing_spec(text: &str) -> Result<SizingSpec> {
    let spec: SizingSpec = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}

pub fn sizing_spec_to_toml(spec: &SizingSpec) -> String {
    toml::to_string(spec).expect("sizing spec serializes")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSize {
    pub n_panels_parallel: u32,
    pub n_battery_series: u32,
    pub n_battery_strings: u32,
    pub total_cost_usd: f64,
}

impl SystemSize {
    pub fn new(panels: u32, series: u32, strings: u32, panel_cost: f64, battery_cost: f64) -> Self {
        Self {
            n_panels_parallel: panels,
            n_battery_series: series,
            n_battery_strings: strings,
            total_cost_usd: f64::from(panels) * panel_cost + f64::from(series * strings) * battery_cost,
        }
    }

    pub fn n_batteries(&self) -> u32 {
        self.n_battery_series * self.n_battery_strings
    }

    /// Copy of `base` with this many panels and the battery scaled by the
    /// string count. `base` describes a single string.
    pub fn apply(&self, base: &SystemConfig) -> SystemConfig {
        let mut c = base.clone();
        let s = f64::from(self.n_battery_strings);
        c.pv.n_panels = self.n_panels_parallel;
        c.battery.e_min_wh *= s;
        c.battery.e_max_wh *= s;
        c.battery.e_charge_max_wh *= s;
        c.battery.e_discharge_max_wh *= s;
        c
    }
}

fn ceil_count(x: f64) -> u32 {
    // guard against 2.0000000000000004 style round-up
    let r = x.round();
    let c = if (x - r).abs() < 1e-9 { r } else { x.ceil() };
    c.max(1.0) as u32
}

pub fn size_system(spec: &SizingSpec) -> Result<SystemSize> {
    spec.validate()?;
    let series = ceil_count(spec.system_voltage_v / spec.battery_voltage_v);
    let string_wh = f64::from(series) * spec.battery_capacity_wh * spec.battery_max_dod;
    let strings = ceil_count(spec.daily_demand_wh * spec.storage_days / (string_wh * spec.inverter_efficiency));
    let panels = ceil_count(
        spec.daily_demand_wh / (spec.insolation_peak_sun_hours * spec.panel_rated_w * spec.inverter_efficiency),
    );
    Ok(SystemSize::new(
        panels,
        series,
        strings,
        spec.panel_cost_usd,
        spec.battery_cost_usd,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderEntry {
    pub label: char,
    pub size: SystemSize,
}

/// Sizes A to F, two 12 V units per series string.
pub fn size_ladder() -> Vec<LadderEntry> {
    [
        ('A', 3, 1),
        ('B', 4, 1),
        ('C', 3, 2),
        ('D', 4, 2),
        ('E', 5, 2),
        ('F', 6, 2),
    ]
    .into_iter()
    .map(|(label, panels, strings)| LadderEntry {
        label,
        size: SystemSize::new(panels, 2, strings, 100.0, 400.0),
    })
    .collect()
}
