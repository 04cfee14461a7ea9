use std::fmt::Write as _;

use mmse_outage::config::Settings;
use mmse_outage::curve_csv;
use mmse_outage::diversity::{self, FitWindow, RateRegime, SlopeFit};
use mmse_outage::mmse::{ChannelKind, SystemConfig};
use mmse_outage::montecarlo::{ConvergencePolicy, OutageCurve};
use mmse_outage::{Error, Result};

use crate::Status;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Allowed distance between the fitted slope and the predicted diversity.
pub fn slope_tolerance(predicted: usize) -> f64 {
    (0.2 * predicted as f64).max(0.25)
}

fn describe_model(cfg: &SystemConfig) -> String {
    match cfg.kind {
        ChannelKind::Flat => format!("flat (M={} N={})", cfg.tx, cfg.rx),
        ChannelKind::Selective => format!(
            "selective (M={} N={} L={} K={}, scaling {})",
            cfg.tx, cfg.rx, cfg.taps, cfg.block_len, cfg.scaling
        ),
    }
}

pub fn regime_line(r: &RateRegime) -> String {
    if r.tight {
        format!("m={}, diversity={} (tight)", r.m, r.diversity_high)
    } else {
        format!(
            "m={}, diversity in [{}, {}] (gap region: bounds only)",
            r.m, r.diversity_low, r.diversity_high
        )
    }
}

fn applicability_line(cfg: &SystemConfig) -> String {
    match cfg.kind {
        ChannelKind::Flat => "flat-fading prediction applies for any M <= N".into(),
        ChannelKind::Selective if cfg.taps == 1 => "single tap: K > M²(L-1) holds trivially".into(),
        ChannelKind::Selective => format!(
            "K > M²(L-1) holds: {} > {}",
            cfg.block_len,
            cfg.tx * cfg.tx * (cfg.taps - 1)
        ),
    }
}

pub fn predict(settings: &Settings) -> Result<Status> {
    let cfg = settings.system()?;
    let regime = diversity::predict(&cfg)?;
    println!("{}", regime_line(&regime));
    println!(
        "R/M = {} in ({}, {}) bits/s/Hz per stream",
        cfg.rate / cfg.tx as f64,
        regime.rate_interval.0,
        regime.rate_interval.1
    );
    println!("model: {}", describe_model(&cfg));
    println!("applicability: {}", applicability_line(&cfg));
    Ok(Status::Ok)
}

struct OutageRun<'a> {
    cfg: &'a SystemConfig,
    grid: &'a [f64],
    policy: &'a ConvergencePolicy,
    seed: u64,
    regime: &'a RateRegime,
    curve: &'a OutageCurve,
    fit: &'a std::result::Result<SlopeFit, Error>,
    status: Status,
    verdict: String,
}

fn render_report(run: &OutageRun<'_>) -> String {
    let cfg = run.cfg;
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "mmse-outage {VERSION} outage report");
    let _ = writeln!(w, "scenario: {}", run.curve.scenario);
    let _ = writeln!(w, "model: {}", describe_model(cfg));
    let _ = writeln!(w, "rate: {} bits/s/Hz", cfg.rate);
    let _ = writeln!(w, "seed: {}", run.seed);
    let _ = writeln!(
        w,
        "policy: target {} events, trials in [{}, {}] per point",
        run.policy.target_events, run.policy.min_trials, run.policy.max_trials
    );
    let _ = writeln!(
        w,
        "grid: {} points, {} to {} dB",
        run.grid.len(),
        run.grid[0],
        run.grid[run.grid.len() - 1]
    );
    let _ = writeln!(w, "prediction: {}", regime_line(run.regime));
    let converged = run.curve.points.iter().filter(|p| p.converged).count();
    let _ = writeln!(w, "converged points: {converged} of {}", run.curve.points.len());
    match run.fit {
        Ok(f) => {
            let _ = writeln!(
                w,
                "fit: d_hat = {:.4} from {} points over {} to {} dB (weighted RMS residual {:.4} decades)",
                f.d_hat, f.points_used, f.snr_span_db.0, f.snr_span_db.1, f.residual
            );
            let _ = writeln!(w, "fit window: converged points with p_out <= 0.1");
        }
        Err(e) => {
            let _ = writeln!(w, "fit: unavailable ({e})");
        }
    }
    if run.curve.clamps > 0 {
        let _ = writeln!(w, "numerical health: {} SINRs clamped beyond -1e-12", run.curve.clamps);
    }
    let _ = writeln!(w, "verdict: {}", run.verdict);

    let _ = writeln!(w, "---");
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(w, "{k}={v}");
    };
    kv("tool_version", VERSION.into());
    kv("scenario", run.curve.scenario.clone());
    kv("M", cfg.tx.to_string());
    kv("N", cfg.rx.to_string());
    kv("L", cfg.taps.to_string());
    kv("K", cfg.block_len.to_string());
    kv("rate", format!("{:?}", cfg.rate));
    kv("scaling", cfg.scaling.to_string());
    kv("seed", run.seed.to_string());
    kv("min_trials", run.policy.min_trials.to_string());
    kv("max_trials", run.policy.max_trials.to_string());
    kv("target_events", run.policy.target_events.to_string());
    kv("snr_start", format!("{:?}", run.grid[0]));
    kv("snr_stop", format!("{:?}", run.grid[run.grid.len() - 1]));
    kv("snr_points", run.grid.len().to_string());
    kv("m", run.regime.m.to_string());
    kv("diversity_low", run.regime.diversity_low.to_string());
    kv("diversity_high", run.regime.diversity_high.to_string());
    kv("tight", run.regime.tight.to_string());
    if let Ok(f) = run.fit {
        kv("d_hat", format!("{:?}", f.d_hat));
        kv("intercept", format!("{:?}", f.intercept));
        kv("points_used", f.points_used.to_string());
        kv("residual", format!("{:?}", f.residual));
        kv("fit_snr_min_db", format!("{:?}", f.snr_span_db.0));
        kv("fit_snr_max_db", format!("{:?}", f.snr_span_db.1));
    }
    kv("severe_clamps", run.curve.clamps.to_string());
    kv(
        "status",
        match run.status {
            Status::Ok => "pass",
            Status::Incomplete => "incomplete",
            Status::InvalidRequest => "invalid",
        }
        .into(),
    );
    out
}

pub fn outage(settings: &Settings) -> Result<Status> {
    let cfg = settings.system()?;
    let grid = settings.grid()?;
    let policy = settings.policy()?;
    let seed = settings.seed();
    if grid.len() < 3 {
        return Err(Error::InsufficientData { found: grid.len() });
    }
    let regime = diversity::predict(&cfg)?;

    let curve = diversity::estimate_outage(&cfg, &grid, &policy, seed)?;
    let csv = curve_csv::write_curve(&curve);
    let fit = diversity::fit_diversity_slope(&curve, &FitWindow::default());

    let (status, verdict) = match &fit {
        Ok(f) => {
            let tol = slope_tolerance(regime.diversity_high);
            let lo = regime.diversity_low as f64 - tol;
            let hi = regime.diversity_high as f64 + tol;
            if f.d_hat >= lo && f.d_hat <= hi {
                (Status::Ok, format!("PASS: d_hat within [{lo}, {hi}]"))
            } else {
                (Status::Incomplete, format!("FAIL: d_hat outside [{lo}, {hi}]"))
            }
        }
        Err(_) => (Status::Incomplete, "INCOMPLETE: too few converged points to fit".into()),
    };
    let report = render_report(&OutageRun {
        cfg: &cfg,
        grid: &grid,
        policy: &policy,
        seed,
        regime: &regime,
        curve: &curve,
        fit: &fit,
        status,
        verdict,
    });

    match &settings.out {
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
            print!("{report}");
        }
        None => {
            print!("{csv}");
            eprint!("{report}");
        }
    }
    Ok(status)
}
