//! Flat `key = value` configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Every key may appear
//! at most once; unknown keys are rejected so that typos do not silently
//! fall back to defaults.

use std::path::PathBuf;

use forerunner_core::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Relative truncation tolerance of the Bessel series.
    pub series_tol: f64,
    pub series_n_max: usize,
    /// Term cap used by arrival-time scans, which reach large `eta`.
    pub scan_n_max: usize,
    pub scan_dt: f64,
    /// Grid spacing of the Klein-Gordon solver.
    pub kg_dx: f64,
    /// Grid spacing of the Schrodinger solver.
    pub nr_dx: f64,
    /// Initial step of the instantaneous-frequency difference quotient.
    pub omega_av_delta: f64,
    pub output_dir: PathBuf,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            series_tol: 1e-13,
            series_n_max: 2000,
            scan_n_max: 50_000,
            scan_dt: 0.02,
            kg_dx: 2e-3,
            nr_dx: 5e-3,
            omega_av_delta: 1e-3,
            output_dir: PathBuf::from("."),
        }
    }
}

pub const KEYS: [&str; 8] = [
    "series_tol",
    "series_n_max",
    "scan_n_max",
    "scan_dt",
    "kg_dx",
    "nr_dx",
    "omega_av_delta",
    "output_dir",
];

impl Config {
    /// Parses a configuration file body on top of the defaults.
    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::default();
        let mut seen: Vec<&str> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected key = value, got {body:?}"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if seen.contains(&key) {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate key {key:?}"),
                });
            }
            cfg.set(key, value).map_err(|message| Error::Parse { line, message })?;
            seen.push(key);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Assigns one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        match key {
            "series_tol" => self.series_tol = real(key, value)?,
            "series_n_max" => self.series_n_max = count(key, value)?,
            "scan_n_max" => self.scan_n_max = count(key, value)?,
            "scan_dt" => self.scan_dt = real(key, value)?,
            "kg_dx" => self.kg_dx = real(key, value)?,
            "nr_dx" => self.nr_dx = real(key, value)?,
            "omega_av_delta" => self.omega_av_delta = real(key, value)?,
            "output_dir" => {
                if value.is_empty() {
                    return Err("output_dir must not be empty".into());
                }
                self.output_dir = PathBuf::from(value);
            }
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("scan_dt", self.scan_dt),
            ("kg_dx", self.kg_dx),
            ("nr_dx", self.nr_dx),
            ("omega_av_delta", self.omega_av_delta),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.series_tol > 0.0 && self.series_tol <= 1e-3) {
            return Err(Error::Config(format!(
                "series_tol must lie in (0, 1e-3], got {}",
                self.series_tol
            )));
        }
        if self.series_n_max == 0 || self.scan_n_max == 0 {
            return Err(Error::Config("term caps must be >= 1".into()));
        }
        Ok(())
    }
}

fn real(key: &str, value: &str) -> std::result::Result<f64, String> {
    let v: f64 = value
        .parse()
        .map_err(|_| format!("{key}: not a number: {value:?}"))?;
    if !v.is_finite() {
        return Err(format!("{key}: must be finite, got {value:?}"));
    }
    Ok(v)
}

fn count(key: &str, value: &str) -> std::result::Result<usize, String> {
    value
        .parse()
        .map_err(|_| format!("{key}: not a non-negative integer: {value:?}"))
}

/// Parses a comma-separated list of finite reals such as `0.95,0.96, 0.97`.
pub fn parse_float_list(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Config("empty list".into()));
    }
    text.split(',')
        .map(|item| {
            let item = item.trim();
            match item.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Config(format!("bad list entry {item:?}"))),
            }
        })
        .collect()
}
