//! Exogenous inputs: weather, indoor temperature, the secondary-load
//! schedule, and the system configuration.

mod config;
mod house;
mod schedule;
mod synth;
mod weather;

pub use config::{load_config, parse_config, SolverConfig, SystemConfig};
pub use house::HouseTemperatureTrace;
pub use schedule::{build_secondary_profile, SecondaryLoadSchedule, TimeWindow};
pub use synth::{synth_start, synth_weather, WeatherProfile};
pub use weather::{
    parse_timestamp, parse_weather_csv, parse_weather_reader, WeatherRecord, WeatherSeries, CSV_TIME_FORMAT,
};

use chrono::NaiveDateTime;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Everything a closed-loop run reads besides the configuration. The
/// simulated window is the whole weather series; forecasts past its end
/// repeat the last day.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub weather: WeatherSeries,
    pub house: HouseTemperatureTrace,
    pub schedule: SecondaryLoadSchedule,
}

impl Scenario {
    /// Without a house trace the daily sinusoid is used.
    pub fn new(
        weather: WeatherSeries,
        house: Option<HouseTemperatureTrace>,
        schedule: SecondaryLoadSchedule,
    ) -> Result<Self> {
        let grid = weather.timestamps();
        let house = match house {
            Some(h) => h.aligned(&grid)?,
            None => HouseTemperatureTrace::sinusoid(&grid),
        };
        schedule.validate()?;
        Ok(Self {
            weather,
            house,
            schedule,
        })
    }

    pub fn steps(&self) -> usize {
        self.weather.len()
    }

    /// Exogenous series covering `steps() + horizon` grid points.
    pub fn inputs(&self, horizon: usize) -> ExogenousInputs {
        let len = self.steps() + horizon;
        let weather = self.weather.extended(len);
        let per_day = self.weather.steps_per_day().min(self.steps());
        let base = self.steps() - per_day;
        let own = self.house.values();
        let t_house: Vec<f64> = (0..len)
            .map(|i| {
                if i < own.len() {
                    own[i]
                } else {
                    own[base + (i - own.len()) % per_day]
                }
            })
            .collect();
        let grid = weather.timestamps();
        let e_secondary = build_secondary_profile(&self.schedule, &grid, weather.step_hours());
        ExogenousInputs {
            grid,
            records: weather.records().to_vec(),
            t_house,
            e_secondary,
        }
    }
}

/// Step-aligned exogenous series, extended past the simulated window.
#[derive(Debug, Clone)]
pub struct ExogenousInputs {
    pub grid: Vec<NaiveDateTime>,
    pub records: Vec<WeatherRecord>,
    pub t_house: Vec<f64>,
    pub e_secondary: Vec<f64>,
}

/// Multiplicative irradiance forecast error, uniform in ±`ghi_rel`. The
/// current step is always exact. Zero by default.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ForecastNoise {
    pub ghi_rel: f64,
    pub seed: u64,
}

impl ForecastNoise {
    pub fn validate(&self) -> Result<()> {
        if !(self.ghi_rel >= 0.0 && self.ghi_rel < 1.0) {
            return Err(Error::Invalid("forecast noise must lie in [0,1)".into()));
        }
        Ok(())
    }

    /// Perturbs `g[1..]` in place. `step` seeds the draw so reruns agree.
    pub fn apply(&self, g: &mut [f64], step: usize) {
        if self.ghi_rel == 0.0 {
            return;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (step as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        for v in g.iter_mut().skip(1) {
            *v *= 1.0 + rng.random_range(-self.ghi_rel..=self.ghi_rel);
        }
    }
}
