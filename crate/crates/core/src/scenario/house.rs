//! Indoor air temperature seen by the refrigerator.

use std::path::Path;

use chrono::{NaiveDateTime, Timelike};

use super::weather::parse_timestamp;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct HouseTemperatureTrace {
    samples: Vec<(NaiveDateTime, f64)>,
}

impl HouseTemperatureTrace {
    pub fn new(samples: Vec<(NaiveDateTime, f64)>) -> Result<Self> {
        for (i, w) in samples.windows(2).enumerate() {
            if w[1].0 <= w[0].0 {
                return Err(Error::Invalid(format!(
                    "house temperature sample {} is out of order",
                    i + 1
                )));
            }
        }
        if let Some((t, _)) = samples.iter().find(|s| !s.1.is_finite()) {
            return Err(Error::Invalid(format!("house temperature at {t} is not finite")));
        }
        Ok(Self { samples })
    }

    /// Fallback daily sinusoid: mean 27 °C, amplitude 3 °C, peak at 15:00.
    pub fn sinusoid(grid: &[NaiveDateTime]) -> Self {
        Self {
            samples: grid.iter().map(|&t| (t, sinusoid_at(t))).collect(),
        }
    }

    /// Reads `timestamp,temperature` rows and aligns them to `grid`.
    pub fn from_csv(path: &Path, grid: &[NaiveDateTime]) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::File {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?;
        let headers = rdr
            .headers()
            .map_err(|e| Error::File {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?
            .clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.eq_ignore_ascii_case(name))
                .ok_or_else(|| Error::File {
                    path: path.to_path_buf(),
                    message: format!("missing column {name}"),
                })
        };
        let (c_t, c_v) = (col("timestamp")?, col("temperature")?);
        let mut samples = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::File {
                path: path.to_path_buf(),
                message: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let bad = |what: &str| Error::Data {
                path: path.to_path_buf(),
                line,
                message: format!("unparsable {what}"),
            };
            let t = parse_timestamp(rec.get(c_t).unwrap_or("")).ok_or_else(|| bad("timestamp"))?;
            let v: f64 = rec
                .get(c_v)
                .and_then(|s| s.parse().ok())
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| bad("temperature"))?;
            samples.push((t, v));
        }
        let trace = Self::new(samples).map_err(|e| Error::File {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        trace.aligned(grid).map_err(|e| Error::File {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    /// Values at each grid instant, linearly interpolated between samples.
    pub fn aligned(&self, grid: &[NaiveDateTime]) -> Result<Self> {
        let mut out = Vec::with_capacity(grid.len());
        let mut j = 0;
        for &t in grid {
            while j + 1 < self.samples.len() && self.samples[j + 1].0 <= t {
                j += 1;
            }
            let (t0, v0) = *self
                .samples
                .get(j)
                .ok_or_else(|| Error::Invalid("empty house temperature trace".into()))?;
            if t < t0 {
                return Err(Error::Invalid(format!("house temperature trace starts after {t}")));
            }
            let v = if t == t0 {
                v0
            } else if let Some(&(t1, v1)) = self.samples.get(j + 1) {
                let f = (t - t0).num_seconds() as f64 / (t1 - t0).num_seconds() as f64;
                v0 + f * (v1 - v0)
            } else {
                return Err(Error::Invalid(format!("house temperature trace ends before {t}")));
            };
            out.push((t, v));
        }
        Ok(Self { samples: out })
    }

    pub fn samples(&self) -> &[(NaiveDateTime, f64)] {
        &self.samples
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn sinusoid_at(t: NaiveDateTime) -> f64 {
    let h = f64::from(t.hour()) + f64::from(t.minute()) / 60.0;
    27.0 + 3.0 * (2.0 * std::f64::consts::PI * (h - 15.0) / 24.0).cos()
}
