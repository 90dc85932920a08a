//! Deterministic synthetic weather for desk-scale runs.

use std::fmt;
use std::str::FromStr;

use chrono::{Duration, NaiveDate, NaiveDateTime, Timelike};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::weather::{WeatherRecord, WeatherSeries};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeatherProfile {
    /// Cloudless days peaking at 900 W/m².
    Clear,
    /// Clear-sky shape attenuated hour by hour to 20–70 %.
    Cloudy,
    /// Overcast first day (peak 150 W/m²), partial second day, then clear.
    PostStorm,
}

impl FromStr for WeatherProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clear" => Ok(Self::Clear),
            "cloudy" => Ok(Self::Cloudy),
            "post-storm" => Ok(Self::PostStorm),
            _ => Err(Error::Invalid(format!(
                "unknown weather profile {s:?} (clear, cloudy, post-storm)"
            ))),
        }
    }
}

impl fmt::Display for WeatherProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Clear => "clear",
            Self::Cloudy => "cloudy",
            Self::PostStorm => "post-storm",
        })
    }
}

pub fn synth_start() -> NaiveDateTime {
    NaiveDate::from_ymd_opt(2017, 9, 11)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap()
}

fn clear_sky(hour: f64, peak: f64) -> f64 {
    if (6.0..18.0).contains(&hour) {
        peak * (std::f64::consts::PI * (hour - 6.0) / 12.0).sin()
    } else {
        0.0
    }
}

/// Irradiance is sampled at the middle of each step so period averages stay
/// close to the continuous curve.
pub fn synth_weather(days: usize, profile: WeatherProfile, seed: u64, step_minutes: i64) -> Result<WeatherSeries> {
    if days == 0 {
        return Err(Error::Invalid("need at least one day of weather".into()));
    }
    if step_minutes <= 0 || (24 * 60) % step_minutes != 0 {
        return Err(Error::Invalid(format!(
            "step of {step_minutes} min does not divide a day"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let per_day = (24 * 60 / step_minutes) as usize;
    let hourly: Vec<f64> = (0..days * 24)
        .map(|h| {
            let day = h / 24;
            match profile {
                WeatherProfile::Clear => 1.0,
                WeatherProfile::Cloudy => rng.random_range(0.2..0.7),
                WeatherProfile::PostStorm => match day {
                    0 => rng.random_range(0.9..1.0) * 150.0 / 900.0,
                    1 => rng.random_range(0.7..1.0) * 500.0 / 900.0 / 0.85,
                    _ => rng.random_range(0.9..1.0),
                },
            }
        })
        .collect();
    let mut records = Vec::with_capacity(days * per_day);
    for k in 0..days * per_day {
        let t = synth_start() + Duration::minutes(step_minutes * k as i64);
        let hour = f64::from(t.hour()) + f64::from(t.minute()) / 60.0;
        let mid = hour + step_minutes as f64 / 120.0;
        let h_index = k * step_minutes as usize / 60;
        let ghi = clear_sky(mid, 900.0) * hourly[h_index];
        let t_ambient =
            27.0 + 4.0 * (2.0 * std::f64::consts::PI * (hour - 15.0) / 24.0).cos() + rng.random_range(-0.3..0.3);
        let wind_speed = (2.0 + rng.random_range(-0.5..0.5_f64)).max(0.0);
        records.push(WeatherRecord {
            timestamp: t,
            ghi,
            t_ambient,
            wind_speed,
        });
    }
    WeatherSeries::new(step_minutes, records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn daily_energy(s: &WeatherSeries, day: usize) -> f64 {
        let n = s.steps_per_day();
        s.records()[day * n..(day + 1) * n]
            .iter()
            .map(|r| r.ghi * s.step_hours())
            .sum()
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a = synth_weather(7, WeatherProfile::PostStorm, 9, 10).unwrap();
        let b = synth_weather(7, WeatherProfile::PostStorm, 9, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, synth_weather(7, WeatherProfile::PostStorm, 10, 10).unwrap());
        assert_eq!(a.len(), 1008);
    }

    #[test]
    fn clear_nights_are_dark() {
        let s = synth_weather(3, WeatherProfile::Clear, 1, 10).unwrap();
        for r in s.records() {
            let h = r.timestamp.hour();
            if !(6..18).contains(&h) {
                assert_eq!(r.ghi, 0.0);
            }
            assert!(r.ghi <= 900.0);
        }
        let peak = s.records().iter().map(|r| r.ghi).fold(0.0, f64::max);
        assert!(peak > 895.0);
    }

    #[test]
    fn post_storm_clears_up() {
        let s = synth_weather(7, WeatherProfile::PostStorm, 3, 10).unwrap();
        let n = s.steps_per_day();
        let peak1 = s.records()[..n].iter().map(|r| r.ghi).fold(0.0, f64::max);
        assert!(peak1 <= 150.0 && peak1 > 120.0);
        assert!(daily_energy(&s, 0) < daily_energy(&s, 1));
        assert!(daily_energy(&s, 1) < daily_energy(&s, 2));
    }

    #[test]
    fn profile_names() {
        for p in [WeatherProfile::Clear, WeatherProfile::Cloudy, WeatherProfile::PostStorm] {
            assert_eq!(p.to_string().parse::<WeatherProfile>().unwrap(), p);
        }
        assert!("storm".parse::<WeatherProfile>().is_err());
    }
}
