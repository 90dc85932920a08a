//! Weather CSV ingestion and resampling onto the simulation grid.

use std::io::Read;
use std::path::Path;

use chrono::{Duration, NaiveDateTime};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeatherRecord {
    pub timestamp: NaiveDateTime,
    /// Global horizontal irradiance, W/m², averaged over the step that starts
    /// at `timestamp`.
    pub ghi: f64,
    pub t_ambient: f64,
    pub wind_speed: f64,
}

/// Gap-free weather on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WeatherSeries {
    step_minutes: i64,
    records: Vec<WeatherRecord>,
}

const TIME_FORMATS: [&str; 4] = [
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%dT%H:%M",
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%d %H:%M",
];

pub fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    let s = s.trim();
    TIME_FORMATS
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
}

pub const CSV_TIME_FORMAT: &str = "%Y-%m-%dT%H:%M";

impl WeatherSeries {
    /// Checks the record invariants and the uniform spacing.
    pub fn new(step_minutes: i64, records: Vec<WeatherRecord>) -> Result<Self> {
        if step_minutes <= 0 {
            return Err(Error::Invalid(format!(
                "weather step must be positive, got {step_minutes} min"
            )));
        }
        if records.is_empty() {
            return Err(Error::Invalid("no records".into()));
        }
        for (i, r) in records.iter().enumerate() {
            if !(r.ghi >= 0.0 && r.ghi.is_finite()) {
                return Err(Error::Invalid(format!("negative irradiance in record {i}")));
            }
            if !(r.wind_speed >= 0.0 && r.wind_speed.is_finite()) || !r.t_ambient.is_finite() {
                return Err(Error::Invalid(format!("bad temperature or wind in record {i}")));
            }
            if i > 0 && r.timestamp - records[i - 1].timestamp != Duration::minutes(step_minutes) {
                return Err(Error::Invalid(format!(
                    "record {i} is off the {step_minutes}-minute grid"
                )));
            }
        }
        Ok(Self { step_minutes, records })
    }

    pub fn records(&self) -> &[WeatherRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn step_minutes(&self) -> i64 {
        self.step_minutes
    }

    pub fn step_hours(&self) -> f64 {
        self.step_minutes as f64 / 60.0
    }

    pub fn start(&self) -> NaiveDateTime {
        self.records[0].timestamp
    }

    pub fn timestamps(&self) -> Vec<NaiveDateTime> {
        self.records.iter().map(|r| r.timestamp).collect()
    }

    pub fn steps_per_day(&self) -> usize {
        (24 * 60 / self.step_minutes) as usize
    }

    /// Extends the series to `len` records by repeating the last available
    /// day (or the whole series when it is shorter than a day).
    pub fn extended(&self, len: usize) -> WeatherSeries {
        let mut records = self.records.clone();
        let period = self.steps_per_day().min(self.records.len());
        let base = self.records.len() - period;
        let mut i = 0;
        while records.len() < len {
            let src = self.records[base + i % period];
            let prev = records[records.len() - 1].timestamp;
            records.push(WeatherRecord {
                timestamp: prev + Duration::minutes(self.step_minutes),
                ..src
            });
            i += 1;
        }
        WeatherSeries {
            step_minutes: self.step_minutes,
            records,
        }
    }

    /// First `len` records; errors when the series is shorter.
    pub fn window(&self, len: usize) -> Result<WeatherSeries> {
        if self.records.len() < len {
            return Err(Error::Invalid(format!(
                "weather covers {} steps, {len} requested",
                self.records.len()
            )));
        }
        Ok(WeatherSeries {
            step_minutes: self.step_minutes,
            records: self.records[..len].to_vec(),
        })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
        w.write_record(["timestamp", "ghi", "air_temperature", "wind_speed"])
            .map_err(|e| csv_err(path, e))?;
        for r in &self.records {
            w.write_record([
                r.timestamp.format(CSV_TIME_FORMAT).to_string(),
                format!("{}", r.ghi),
                format!("{}", r.t_ambient),
                format!("{}", r.wind_speed),
            ])
            .map_err(|e| csv_err(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize);
    match line {
        Some(line) => Error::Data {
            path: path.to_path_buf(),
            line,
            message: e.to_string(),
        },
        None => Error::File {
            path: path.to_path_buf(),
            message: e.to_string(),
        },
    }
}

/// Reads a weather CSV and resamples it to `step_hours`.
pub fn parse_weather_csv(path: &Path, step_hours: f64) -> Result<WeatherSeries> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_weather_reader(file, path, step_hours)
}

/// Same as [`parse_weather_csv`] over any reader; `path` labels errors.
pub fn parse_weather_reader<R: Read>(reader: R, path: &Path, step_hours: f64) -> Result<WeatherSeries> {
    let step_minutes = step_minutes(step_hours)?;
    let data_err = |line: usize, message: String| Error::Data {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::File {
            path: path.to_path_buf(),
            message: "no records".into(),
        });
    }
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::File {
                path: path.to_path_buf(),
                message: format!("missing column {name}"),
            })
    };
    let (c_t, c_g, c_a, c_w) = (
        col("timestamp")?,
        col("ghi")?,
        col("air_temperature")?,
        col("wind_speed")?,
    );

    let mut raw: Vec<WeatherRecord> = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let field = |c: usize| rec.get(c).unwrap_or("");
        let num = |c: usize, what: &str| -> Result<f64> {
            field(c)
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| data_err(line, format!("unparsable {what} {:?}", field(c))))
        };
        let timestamp = parse_timestamp(field(c_t))
            .ok_or_else(|| data_err(line, format!("unparsable timestamp {:?}", field(c_t))))?;
        let ghi = num(c_g, "ghi")?;
        if ghi < 0.0 {
            return Err(data_err(line, "negative irradiance".into()));
        }
        let t_ambient = num(c_a, "air_temperature")?;
        let wind_speed = num(c_w, "wind_speed")?;
        if wind_speed < 0.0 {
            return Err(data_err(line, "negative wind speed".into()));
        }
        if let Some(prev) = raw.last() {
            if timestamp <= prev.timestamp {
                return Err(data_err(line, "non-monotonic timestamp".into()));
            }
            if raw.len() >= 2 {
                let step = raw[1].timestamp - raw[0].timestamp;
                if timestamp - prev.timestamp != step {
                    return Err(data_err(line, "irregular time step".into()));
                }
            }
        }
        raw.push(WeatherRecord {
            timestamp,
            ghi,
            t_ambient,
            wind_speed,
        });
    }
    if raw.is_empty() {
        return Err(Error::File {
            path: path.to_path_buf(),
            message: "no records".into(),
        });
    }
    let source_minutes = if raw.len() >= 2 {
        (raw[1].timestamp - raw[0].timestamp).num_minutes()
    } else {
        step_minutes
    };
    let out = resample(&raw, source_minutes, step_minutes).map_err(|message| Error::File {
        path: path.to_path_buf(),
        message,
    })?;
    log::debug!(
        "{}: {} source records, {} on the grid",
        path.display(),
        raw.len(),
        out.len()
    );
    WeatherSeries::new(step_minutes, out)
}

pub(crate) fn step_minutes(step_hours: f64) -> Result<i64> {
    let m = step_hours * 60.0;
    if !(m >= 1.0) || (m - m.round()).abs() > 1e-9 {
        return Err(Error::Invalid(format!(
            "step of {step_hours} h is not a whole number of minutes"
        )));
    }
    Ok(m.round() as i64)
}

/// Irradiance is averaged (down) or held (up) so the energy per period is
/// unchanged; temperature and wind are averaged down or interpolated up.
fn resample(raw: &[WeatherRecord], source: i64, target: i64) -> std::result::Result<Vec<WeatherRecord>, String> {
    if source == target {
        return Ok(raw.to_vec());
    }
    if source % target == 0 {
        let m = (source / target) as usize;
        let mut out = Vec::with_capacity(raw.len() * m);
        for (i, r) in raw.iter().enumerate() {
            let next = raw.get(i + 1).unwrap_or(r);
            for s in 0..m {
                let f = s as f64 / m as f64;
                out.push(WeatherRecord {
                    timestamp: r.timestamp + Duration::minutes(target * s as i64),
                    ghi: r.ghi,
                    t_ambient: r.t_ambient + f * (next.t_ambient - r.t_ambient),
                    wind_speed: r.wind_speed + f * (next.wind_speed - r.wind_speed),
                });
            }
        }
        Ok(out)
    } else if target % source == 0 {
        let m = (target / source) as usize;
        Ok(raw
            .chunks_exact(m)
            .map(|c| {
                let mean = |f: fn(&WeatherRecord) -> f64| c.iter().map(f).sum::<f64>() / m as f64;
                WeatherRecord {
                    timestamp: c[0].timestamp,
                    ghi: mean(|r| r.ghi),
                    t_ambient: mean(|r| r.t_ambient),
                    wind_speed: mean(|r| r.wind_speed),
                }
            })
            .collect())
    } else {
        Err(format!(
            "source step of {source} min neither divides nor is a multiple of the {target}-minute simulation step"
        ))
    }
}
