use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use mmse_outage::config::{Settings, Workers};
use mmse_outage::Error;

#[derive(Debug, Parser)]
#[command(name = "mmse-outage", version, about = "MMSE receiver outage and diversity analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the rate regime and predicted diversity.
    Predict(RunArgs),
    /// Monte Carlo outage sweep, CSV curve and slope-fit report.
    Outage(RunArgs),
    /// Wishart spectrum checks and small-ball exponents.
    VerifyWishart(RunArgs),
    /// Haar sampler checks against the QR reference.
    VerifyHaar(RunArgs),
    /// SINR formula checks against the block-circulant reference.
    VerifySinr(RunArgs),
}

/// Every flag is also accepted as `key = value` in `--config`; flags win.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// Transmit antennas.
    #[arg(long = "M")]
    pub tx: Option<String>,
    /// Receive antennas.
    #[arg(long = "N")]
    pub rx: Option<String>,
    /// Channel taps (L > 1 selects the cyclic-prefix model).
    #[arg(long = "L")]
    pub taps: Option<String>,
    /// Block length.
    #[arg(long = "K")]
    pub block_len: Option<String>,
    /// Target rate in bits/s/Hz.
    #[arg(long)]
    pub rate: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub snr_start: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub snr_stop: Option<String>,
    #[arg(long)]
    pub snr_step: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Worker threads, or `auto`.
    #[arg(long)]
    pub workers: Option<String>,
    #[arg(long)]
    pub min_trials: Option<String>,
    #[arg(long)]
    pub max_trials: Option<String>,
    #[arg(long)]
    pub target_events: Option<String>,
    /// `per-tap` (ρ/(ML)) or `paper` (ρ/M).
    #[arg(long)]
    pub scaling: Option<String>,
    /// Flat `key = value` file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output path for the CSV curve.
    #[arg(long)]
    pub out: Option<String>,
}

impl RunArgs {
    fn pairs(&self) -> Vec<(&'static str, &String)> {
        [
            ("M", &self.tx),
            ("N", &self.rx),
            ("L", &self.taps),
            ("K", &self.block_len),
            ("rate", &self.rate),
            ("snr-start", &self.snr_start),
            ("snr-stop", &self.snr_stop),
            ("snr-step", &self.snr_step),
            ("seed", &self.seed),
            ("workers", &self.workers),
            ("min-trials", &self.min_trials),
            ("max-trials", &self.max_trials),
            ("target-events", &self.target_events),
            ("scaling", &self.scaling),
            ("out", &self.out),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
        .collect()
    }

    pub fn settings(&self) -> Result<Settings, Error> {
        let base = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                Settings::from_text(&text)?
            }
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        for (key, value) in self.pairs() {
            flags.set(key, value)?;
        }
        Ok(base.overlay(flags))
    }
}

/// Runs `f` on a pool sized by `--workers`. Results do not depend on it.
pub fn with_workers<T: Send>(settings: &Settings, f: impl FnOnce() -> T + Send) -> T {
    match settings.workers {
        Some(Workers::Fixed(n)) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(f),
            Err(e) => {
                log::warn!("cannot build a {n}-thread pool ({e}); using the global pool");
                f()
            }
        },
        _ => f(),
    }
}
