//! Deterministic event counting with adaptive stopping.
//!
//! Trial `t` at grid point `g` always draws from stream `(seed, g, t)`.
//! Trials run in parallel batches, but outcomes are scanned in index order
//! and the stopping rule is applied per trial, so the reported counts equal
//! those of a sequential run for any worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{Stream, StreamFamily};
use crate::stats::wilson_interval;

const FIRST_BATCH: u64 = 1 << 12;
const MAX_BATCH: u64 = 1 << 18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvergencePolicy {
    pub min_trials: u64,
    pub max_trials: u64,
    /// Stop once this many events have been observed (after `min_trials`).
    pub target_events: u64,
}

impl Default for ConvergencePolicy {
    fn default() -> Self {
        Self { min_trials: 1, max_trials: 10_000_000, target_events: 200 }
    }
}

impl ConvergencePolicy {
    pub fn validate(&self) -> Result<()> {
        if self.min_trials == 0 || self.max_trials < self.min_trials {
            return Err(Error::Config(format!(
                "policy needs max_trials >= min_trials >= 1, got min={} max={}",
                self.min_trials, self.max_trials
            )));
        }
        if self.target_events == 0 {
            return Err(Error::Config("target event count must be at least 1".into()));
        }
        Ok(())
    }
}

/// Raw counts for one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EventCounts {
    pub trials: u64,
    pub events: u64,
    /// Numerical-health counter accumulated from the trial kernel.
    pub clamps: u64,
}

/// Runs trials of family `family` until `policy` says stop.
///
/// `init` builds per-worker scratch space; `trial` returns whether the event
/// occurred and how many severe clamps it needed.
pub fn count_events<W, I, F>(
    family: StreamFamily,
    policy: &ConvergencePolicy,
    init: I,
    trial: F,
) -> Result<EventCounts>
where
    I: Fn() -> W + Sync + Send,
    F: Fn(&mut W, &mut Stream) -> Result<(bool, usize)> + Sync + Send,
{
    policy.validate()?;
    let mut counts = EventCounts::default();
    let mut batch = FIRST_BATCH;
    loop {
        let start = counts.trials;
        let end = (start + batch).min(policy.max_trials);
        let outcomes: Vec<Result<(bool, usize)>> = (start..end)
            .into_par_iter()
            .map_init(&init, |ws, t| trial(ws, &mut family.trial(t)))
            .collect();
        for outcome in outcomes {
            let (event, clamps) = outcome?;
            counts.trials += 1;
            counts.events += u64::from(event);
            counts.clamps += clamps as u64;
            let enough = counts.trials >= policy.min_trials && counts.events >= policy.target_events;
            if enough || counts.trials >= policy.max_trials {
                return Ok(counts);
            }
        }
        batch = (batch * 2).min(MAX_BATCH);
    }
}

/// One SNR point of an outage (or tail-probability) curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub rho: f64,
    pub snr_db: f64,
    pub trials: u64,
    pub outages: u64,
    pub p_out: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub converged: bool,
}

impl CurvePoint {
    pub fn from_counts(snr_db: f64, counts: EventCounts, policy: &ConvergencePolicy) -> Self {
        let (ci_low, ci_high) = wilson_interval(counts.events, counts.trials);
        Self {
            rho: db_to_linear(snr_db),
            snr_db,
            trials: counts.trials,
            outages: counts.events,
            p_out: counts.events as f64 / counts.trials as f64,
            ci_low,
            ci_high,
            converged: counts.events >= policy.target_events,
        }
    }
}

/// Per-SNR event probability estimates for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct OutageCurve {
    /// Identifier without commas or whitespace, used as the CSV scenario column.
    pub scenario: String,
    pub points: Vec<CurvePoint>,
    /// Severe SINR clamps summed over all trials.
    pub clamps: u64,
}

pub type TailCurve = OutageCurve;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(rho: f64) -> f64 {
    10.0 * rho.log10()
}

/// Largest SNR grid accepted by [`snr_grid`].
pub const MAX_GRID_POINTS: usize = 100_000;

/// Builds `start, start+step, …` up to and including `stop` (within 1e-9 of a step).
pub fn snr_grid(start_db: f64, stop_db: f64, step_db: f64) -> Result<Vec<f64>> {
    if !(start_db.is_finite() && stop_db.is_finite() && step_db.is_finite()) {
        return Err(Error::Config("SNR grid bounds must be finite".into()));
    }
    if !(step_db > 0.0) || !(start_db <= stop_db) {
        return Err(Error::Config(format!(
            "SNR grid needs start <= stop and step > 0, got {start_db}..{stop_db} step {step_db}"
        )));
    }
    let steps = ((stop_db - start_db) / step_db + 1e-9).floor();
    if !(steps < MAX_GRID_POINTS as f64) {
        return Err(Error::Config(format!("SNR grid exceeds {MAX_GRID_POINTS} points")));
    }
    let grid: Vec<f64> = (0..=steps as usize).map(|i| start_db + i as f64 * step_db).collect();
    check_grid(&grid)?;
    Ok(grid)
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config("SNR grid is empty".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::Config("SNR grid must be finite".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("SNR grid must be strictly increasing".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn bernoulli(p: f64) -> impl Fn(&mut (), &mut Stream) -> Result<(bool, usize)> + Sync + Send {
        move |_, rng| Ok((rng.random::<f64>() < p, 0))
    }

    #[test]
    fn oversized_or_degenerate_grids_rejected() {
        assert!(snr_grid(0.0, 1e6, 1.0).is_err());
        assert!(snr_grid(-1e308, 1e308, 1.0).is_err());
        assert!(snr_grid(1e17, 1e17 + 64.0, 1.0).is_err());
        assert_eq!(snr_grid(5.0, 5.0, 1.0).unwrap(), vec![5.0]);
    }

    #[test]
    fn stops_at_target_event() {
        let policy = ConvergencePolicy { min_trials: 1, max_trials: 1_000_000, target_events: 50 };
        let c = count_events(StreamFamily::new(1, 0), &policy, || (), bernoulli(0.01)).unwrap();
        assert_eq!(c.events, 50);
        assert!(c.trials > 2000 && c.trials < 10_000, "{c:?}");
    }

    #[test]
    fn stops_at_max_trials() {
        let policy = ConvergencePolicy { min_trials: 1, max_trials: 10_000, target_events: 50 };
        let c = count_events(StreamFamily::new(1, 0), &policy, || (), bernoulli(0.0)).unwrap();
        assert_eq!(c, EventCounts { trials: 10_000, events: 0, clamps: 0 });
    }

    #[test]
    fn honors_min_trials() {
        let policy = ConvergencePolicy { min_trials: 5000, max_trials: 10_000, target_events: 1 };
        let c = count_events(StreamFamily::new(1, 0), &policy, || (), bernoulli(1.0)).unwrap();
        assert_eq!(c.trials, 5000);
    }

    #[test]
    fn invalid_policy() {
        let bad = ConvergencePolicy { min_trials: 10, max_trials: 5, target_events: 1 };
        assert!(count_events(StreamFamily::new(1, 0), &bad, || (), bernoulli(0.5)).is_err());
    }

    #[test]
    fn worker_count_does_not_matter() {
        let policy = ConvergencePolicy { min_trials: 1, max_trials: 200_000, target_events: 300 };
        let run = |workers| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap();
            pool.install(|| count_events(StreamFamily::new(9, 2), &policy, || (), bernoulli(0.003)).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn grid_construction() {
        assert_eq!(snr_grid(0.0, 35.0, 2.5).unwrap().len(), 15);
        assert_eq!(snr_grid(0.0, 0.0, 1.0).unwrap(), vec![0.0]);
        assert!(snr_grid(1.0, 0.0, 1.0).is_err());
        assert!(snr_grid(0.0, 1.0, 0.0).is_err());
        assert!(check_grid(&[0.0, 1.0, 1.0]).is_err());
        assert!((db_to_linear(30.0) - 1000.0).abs() < 1e-9);
        assert!((linear_to_db(100.0) - 20.0).abs() < 1e-12);
    }
}
