//! System configuration file (TOML).

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::schedule::SecondaryLoadSchedule;
use crate::devices::{BatteryParams, FridgeParams, PvArrayParams};
use crate::error::{Error, Result};
use crate::milp::SolverOptions;
use crate::mpc::MpcParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub rel_gap_limit: f64,
    pub time_limit_s: f64,
    pub node_limit: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let d = SolverOptions::default();
        Self {
            rel_gap_limit: d.rel_gap_limit,
            time_limit_s: d.time_limit,
            node_limit: None,
        }
    }
}

impl SolverConfig {
    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            rel_gap_limit: self.rel_gap_limit,
            time_limit: self.time_limit_s,
            node_limit: self.node_limit,
            ..SolverOptions::default()
        }
    }
}

/// Every device, load and controller parameter. Omitted fields take the
/// published defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemConfig {
    pub step_minutes: f64,
    pub horizon_steps: usize,
    pub inverter_efficiency: f64,
    pub initial_fridge_temp_c: f64,
    pub pv: PvArrayParams,
    pub battery: BatteryParams,
    pub fridge: FridgeParams,
    pub loads: SecondaryLoadSchedule,
    pub mpc: MpcParams,
    pub solver: SolverConfig,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self {
            step_minutes: 10.0,
            horizon_steps: 144,
            inverter_efficiency: 0.9,
            initial_fridge_temp_c: 2.0,
            pv: PvArrayParams::default(),
            battery: BatteryParams::default(),
            fridge: FridgeParams::default(),
            loads: SecondaryLoadSchedule::default(),
            mpc: MpcParams::default(),
            solver: SolverConfig::default(),
        }
    }
}

impl SystemConfig {
    pub fn step_hours(&self) -> f64 {
        self.step_minutes / 60.0
    }

    pub fn validate(&self) -> Result<()> {
        let eta = self.inverter_efficiency;
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::Config("inverter efficiency must lie in (0,1]".into()));
        }
        if !(self.step_minutes > 0.0 && self.step_minutes.is_finite()) {
            return Err(Error::Config("step must be > 0".into()));
        }
        super::weather::step_minutes(self.step_hours()).map_err(|e| Error::Config(e.to_string()))?;
        if self.horizon_steps < 1 {
            return Err(Error::Config("horizon must be ≥ 1".into()));
        }
        if !self.initial_fridge_temp_c.is_finite() {
            return Err(Error::Config("initial fridge temperature must be finite".into()));
        }
        let nested = [
            self.pv.validate(),
            self.battery.validate(),
            self.fridge.validate(),
            self.loads.validate(),
            self.mpc.validate(),
            self.solver.options().validate(),
        ];
        for r in nested {
            r.map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

pub fn parse_config(text: &str) -> Result<SystemConfig> {
    let cfg: SystemConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<SystemConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text).map_err(|e| Error::File {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
