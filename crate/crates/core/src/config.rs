//! Flat `key = value` run configuration.
//!
//! ```text
//! # Fig-2 style scenario
//! M = 2
//! N = 2
//! L = 2
//! K = 64
//! rate = 3
//! snr-start = 0
//! snr-stop = 35
//! snr-step = 2.5
//! ```
//!
//! Keys match the command-line flags without the leading `--`. Blank lines
//! and `#` comments are ignored; repeated keys are an error.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::mmse::{Scaling, SystemConfig};
use crate::montecarlo::{snr_grid, ConvergencePolicy};

pub const DEFAULT_SEED: u64 = 1;

pub const MAX_WORKERS: usize = 1024;

pub const KEYS: &[&str] = &[
    "M",
    "N",
    "L",
    "K",
    "rate",
    "snr-start",
    "snr-stop",
    "snr-step",
    "seed",
    "workers",
    "min-trials",
    "max-trials",
    "target-events",
    "scaling",
    "out",
];

/// Parses `key = value` lines into an ordered map.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected key = value, got '{line}'"),
        })?;
        let key = key.trim().trim_start_matches("--");
        let value = value.trim();
        if !KEYS.contains(&key) {
            return Err(Error::Parse { line: line_no, message: format!("unknown key '{key}'") });
        }
        if value.is_empty() {
            return Err(Error::Parse { line: line_no, message: format!("empty value for '{key}'") });
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(Error::Parse { line: line_no, message: format!("duplicate key '{key}'") });
        }
    }
    Ok(map)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Workers {
    Auto,
    Fixed(usize),
}

/// Every run setting, each optional so that file and flag sources can be layered.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub tx: Option<usize>,
    pub rx: Option<usize>,
    pub taps: Option<usize>,
    pub block_len: Option<usize>,
    pub rate: Option<f64>,
    pub snr_start: Option<f64>,
    pub snr_stop: Option<f64>,
    pub snr_step: Option<f64>,
    pub seed: Option<u64>,
    pub workers: Option<Workers>,
    pub min_trials: Option<u64>,
    pub max_trials: Option<u64>,
    pub target_events: Option<u64>,
    pub scaling: Option<Scaling>,
    pub out: Option<PathBuf>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value '{value}' for '{key}'")))
}

/// Trial counts may be written as `1e7`.
fn parse_count(key: &str, value: &str) -> Result<u64> {
    if let Ok(v) = value.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = parse_value(key, value)?;
    if f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f <= u64::MAX as f64 {
        Ok(f as u64)
    } else {
        Err(Error::Config(format!("invalid count '{value}' for '{key}'")))
    }
}

fn parse_finite(key: &str, value: &str) -> Result<f64> {
    let f: f64 = parse_value(key, value)?;
    if f.is_finite() {
        Ok(f)
    } else {
        Err(Error::Config(format!("'{key}' must be finite, got '{value}'")))
    }
}

impl Settings {
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let mut s = Settings::default();
        for (key, value) in map {
            s.set(key, value)?;
        }
        Ok(s)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_map(&parse_key_values(text)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "M" => self.tx = Some(parse_value(key, value)?),
            "N" => self.rx = Some(parse_value(key, value)?),
            "L" => self.taps = Some(parse_value(key, value)?),
            "K" => self.block_len = Some(parse_value(key, value)?),
            "rate" => self.rate = Some(parse_finite(key, value)?),
            "snr-start" => self.snr_start = Some(parse_finite(key, value)?),
            "snr-stop" => self.snr_stop = Some(parse_finite(key, value)?),
            "snr-step" => self.snr_step = Some(parse_finite(key, value)?),
            "seed" => self.seed = Some(parse_value(key, value)?),
            "workers" => {
                self.workers = Some(if value == "auto" {
                    Workers::Auto
                } else {
                    match parse_value::<usize>(key, value)? {
                        n @ 1..=MAX_WORKERS => Workers::Fixed(n),
                        _ => {
                            return Err(Error::Config(format!(
                                "workers must be in 1..={MAX_WORKERS} or 'auto'"
                            )))
                        }
                    }
                })
            }
            "min-trials" => self.min_trials = Some(parse_count(key, value)?),
            "max-trials" => self.max_trials = Some(parse_count(key, value)?),
            "target-events" => self.target_events = Some(parse_count(key, value)?),
            "scaling" => self.scaling = Some(value.parse()?),
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Values present in `overrides` win.
    pub fn overlay(self, overrides: Settings) -> Settings {
        Settings {
            tx: overrides.tx.or(self.tx),
            rx: overrides.rx.or(self.rx),
            taps: overrides.taps.or(self.taps),
            block_len: overrides.block_len.or(self.block_len),
            rate: overrides.rate.or(self.rate),
            snr_start: overrides.snr_start.or(self.snr_start),
            snr_stop: overrides.snr_stop.or(self.snr_stop),
            snr_step: overrides.snr_step.or(self.snr_step),
            seed: overrides.seed.or(self.seed),
            workers: overrides.workers.or(self.workers),
            min_trials: overrides.min_trials.or(self.min_trials),
            max_trials: overrides.max_trials.or(self.max_trials),
            target_events: overrides.target_events.or(self.target_events),
            scaling: overrides.scaling.or(self.scaling),
            out: overrides.out.or(self.out),
        }
    }

    /// Scenario from `M`, `N`, `L`, `K`, `rate`. `L > 1` selects the
    /// cyclic-prefix model; `K` defaults to 64 there.
    pub fn system(&self) -> Result<SystemConfig> {
        let need = |v: Option<usize>, k: &str| v.ok_or_else(|| Error::Config(format!("missing '{k}'")));
        let tx = need(self.tx, "M")?;
        let rx = need(self.rx, "N")?;
        let taps = self.taps.unwrap_or(1);
        let rate = self.rate.ok_or_else(|| Error::Config("missing 'rate'".into()))?;
        let cfg = if taps > 1 {
            SystemConfig::selective(tx, rx, taps, self.block_len.unwrap_or(64), rate)
        } else {
            SystemConfig::flat(tx, rx, rate)
        }
        .with_scaling(self.scaling.unwrap_or_default());
        cfg.validate()?;
        Ok(cfg)
    }

    /// SNR grid in dB; defaults to 0–35 dB in 2.5 dB steps.
    pub fn grid(&self) -> Result<Vec<f64>> {
        snr_grid(
            self.snr_start.unwrap_or(0.0),
            self.snr_stop.unwrap_or(35.0),
            self.snr_step.unwrap_or(2.5),
        )
    }

    pub fn policy(&self) -> Result<ConvergencePolicy> {
        let d = ConvergencePolicy::default();
        let p = ConvergencePolicy {
            min_trials: self.min_trials.unwrap_or(d.min_trials),
            max_trials: self.max_trials.unwrap_or(d.max_trials),
            target_events: self.target_events.unwrap_or(d.target_events),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }
}
