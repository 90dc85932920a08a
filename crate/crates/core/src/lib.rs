//! Outage-mode energy management for a home PV + battery system.
//!
//! The crate holds the device models, a built-in MILP engine, the model
//! predictive controller that schedules the refrigerator, secondary loads
//! and battery, a rule-based baseline controller, and a closed-loop plant
//! simulator that scores both on resiliency metrics.

pub mod baseline;
pub mod devices;
pub mod error;
pub mod milp;
pub mod mpc;
pub mod plant;
pub mod scenario;
pub mod sizing;

pub use error::{Error, Result};
pub use mpc::{ControlCommand, ForecastWindow, MpcParams, MpcPlan};
pub use plant::{
    compute_metrics, run_closed_loop, Controller, PlantFlows, PlantState, ResiliencyMetrics, SimulationOptions,
    SimulationTrace,
};
pub use scenario::{Scenario, SystemConfig, WeatherSeries};
