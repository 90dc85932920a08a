//! Daily on-windows for the secondary loads.

use std::fmt;
use std::str::FromStr;

use chrono::{NaiveDateTime, Timelike};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A daily interval `HH:MM-HH:MM`, minutes from midnight. A window whose end
/// precedes its start runs past midnight; `24:00` is accepted as an end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TimeWindow {
    start: u32,
    end: u32,
}

impl TimeWindow {
    pub fn new(start_min: u32, end_min: u32) -> Result<Self> {
        if start_min >= 1440 || end_min > 1440 || start_min == end_min % 1440 {
            return Err(Error::Invalid(format!("bad window {start_min}..{end_min} min")));
        }
        Ok(Self {
            start: start_min,
            end: end_min,
        })
    }

    pub fn contains(&self, minute_of_day: u32) -> bool {
        if self.start < self.end {
            (self.start..self.end).contains(&minute_of_day)
        } else {
            minute_of_day >= self.start || minute_of_day < self.end
        }
    }
}

fn parse_clock(s: &str) -> Option<u32> {
    let (h, m) = s.trim().split_once(':')?;
    let (h, m): (u32, u32) = (h.parse().ok()?, m.parse().ok()?);
    (m < 60 && (h < 24 || (h == 24 && m == 0))).then_some(h * 60 + m)
}

impl FromStr for TimeWindow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("window {s:?} is not HH:MM-HH:MM within 00:00-24:00"));
        let (a, b) = s.split_once('-').ok_or_else(bad)?;
        let (a, b) = (parse_clock(a).ok_or_else(bad)?, parse_clock(b).ok_or_else(bad)?);
        TimeWindow::new(a, b).map_err(|_| bad())
    }
}

impl TryFrom<String> for TimeWindow {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TimeWindow> for String {
    fn from(w: TimeWindow) -> String {
        w.to_string()
    }
}

impl fmt::Display for TimeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:02}:{:02}-{:02}:{:02}",
            self.start / 60,
            self.start % 60,
            self.end / 60,
            self.end % 60
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SecondaryLoadSchedule {
    pub light_windows: Vec<TimeWindow>,
    pub fan_windows: Vec<TimeWindow>,
    pub n_lights: u32,
    pub light_power_w: f64,
    pub n_fans: u32,
    pub fan_power_w: f64,
}

impl Default for SecondaryLoadSchedule {
    fn default() -> Self {
        Self {
            light_windows: vec![TimeWindow::new(18 * 60, 0).unwrap()],
            fan_windows: vec![TimeWindow::new(21 * 60, 9 * 60).unwrap()],
            n_lights: 6,
            light_power_w: 8.0,
            n_fans: 4,
            fan_power_w: 65.0,
        }
    }
}

impl SecondaryLoadSchedule {
    pub fn validate(&self) -> Result<()> {
        for p in [self.light_power_w, self.fan_power_w] {
            if !(p.is_finite() && p >= 0.0) {
                return Err(Error::Invalid("loads: powers must be >= 0".into()));
            }
        }
        Ok(())
    }

    /// Scheduled secondary power in W at a given time.
    pub fn power_at(&self, t: NaiveDateTime) -> f64 {
        let minute = t.hour() * 60 + t.minute();
        let on = |ws: &[TimeWindow]| ws.iter().any(|w| w.contains(minute));
        let mut p = 0.0;
        if on(&self.light_windows) {
            p += f64::from(self.n_lights) * self.light_power_w;
        }
        if on(&self.fan_windows) {
            p += f64::from(self.n_fans) * self.fan_power_w;
        }
        p
    }
}

/// Secondary-load energy per step, Wh. A step counts as on when its start
/// instant falls inside a window.
pub fn build_secondary_profile(schedule: &SecondaryLoadSchedule, grid: &[NaiveDateTime], step_hours: f64) -> Vec<f64> {
    grid.iter().map(|&t| schedule.power_at(t) * step_hours).collect()
}
