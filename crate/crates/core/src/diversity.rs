//! Rate-regime prediction, outage estimation and diversity-slope fitting.
//!
//! At a fixed target rate `R` the MMSE outage probability decays as
//! `ρ^{−d}`. With `r = R/M` bits per stream, the regime index `m` is the
//! unique integer with `log₂(M/m) < r < log₂(M/(m−1))`, and
//!
//! * flat fading: `d = m(N − M + m)`;
//! * CP frequency-selective fading (needs `K > M²(L−1)`): `d = m(LN − M + m)`
//!   when additionally `r < −log₂((m−1)/M + (L−1)(M−m+1)/K)`. Above that bound
//!   only the bracket `(m−1)(LN−M+m−1) ≤ d ≤ m(LN−M+m)` is known.

use crate::error::{Error, Result};
use crate::mmse::{ChannelKind, MmseKernel, SystemConfig, MAX_ANTENNAS, MAX_BLOCK_LEN, MAX_TAPS};
use crate::montecarlo::{
    check_grid, count_events, ConvergencePolicy, CurvePoint, OutageCurve,
};
use crate::randmat::fill_complex_gaussian;
use crate::rng::StreamFamily;
use crate::stats::weighted_line_fit;

/// Relative tolerance for treating `R/M` as sitting on a regime boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRegime {
    pub m: usize,
    /// Open interval of `R/M` (bits/s/Hz per stream) covered by this answer.
    pub rate_interval: (f64, f64),
    pub diversity_low: usize,
    pub diversity_high: usize,
    pub tight: bool,
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= BOUNDARY_TOLERANCE * b.abs().max(1.0)
}

/// `log₂(M/m)`, infinite for `m = 0`.
fn flat_bound(tx: usize, m: usize) -> f64 {
    if m == 0 {
        f64::INFINITY
    } else {
        (tx as f64 / m as f64).log2()
    }
}

/// `−log₂((m−1)/M + (L−1)(M−(m−1))/K)`.
pub fn selective_upper_bound(tx: usize, taps: usize, block_len: usize, m: usize) -> f64 {
    let (txf, mm1) = (tx as f64, (m - 1) as f64);
    let arg = mm1 / txf + (taps - 1) as f64 * (txf - mm1) / block_len as f64;
    -arg.log2()
}

fn check_dims(tx: usize, rx: usize, rate: f64) -> Result<()> {
    if tx == 0 {
        return Err(Error::Config("M must be at least 1".into()));
    }
    if rx < tx {
        return Err(Error::Config(format!("requires N >= M, got N={rx} M={tx}")));
    }
    if rx > MAX_ANTENNAS {
        return Err(Error::Config(format!("antenna counts limited to {MAX_ANTENNAS}")));
    }
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::Config(format!("rate must be finite and > 0, got {rate}")));
    }
    Ok(())
}

fn regime_index(tx: usize, rate: f64) -> Result<usize> {
    let r = rate / tx as f64;
    for m in 1..=tx {
        let lower = flat_bound(tx, m);
        if m < tx && near(r, lower) {
            return Err(Error::Boundary { per_stream_rate: r, regime_above: m, regime_below: m + 1 });
        }
        if r > lower {
            return Ok(m);
        }
    }
    unreachable!("log2(M/M) = 0 < R/M")
}

pub fn resolve_rate_regime_flat(tx: usize, rx: usize, rate: f64) -> Result<RateRegime> {
    check_dims(tx, rx, rate)?;
    let m = regime_index(tx, rate)?;
    let d = m * (rx - tx + m);
    Ok(RateRegime {
        m,
        rate_interval: (flat_bound(tx, m), flat_bound(tx, m - 1)),
        diversity_low: d,
        diversity_high: d,
        tight: true,
    })
}

pub fn resolve_rate_regime_selective(
    tx: usize,
    rx: usize,
    taps: usize,
    block_len: usize,
    rate: f64,
) -> Result<RateRegime> {
    check_dims(tx, rx, rate)?;
    if taps == 0 || block_len == 0 {
        return Err(Error::Config("L and K must be at least 1".into()));
    }
    if taps > MAX_TAPS || block_len > MAX_BLOCK_LEN {
        return Err(Error::Config(format!("requires L <= {MAX_TAPS} and K <= {MAX_BLOCK_LEN}")));
    }
    let bound = tx * tx * (taps - 1);
    if taps > 1 && block_len <= bound {
        return Err(Error::Applicability { block_len, bound });
    }
    let m = regime_index(tx, rate)?;
    let r = rate / tx as f64;
    let virtual_rx = taps * rx;
    let high = m * (virtual_rx - tx + m);
    let upper = selective_upper_bound(tx, taps, block_len, m);
    if r < upper {
        Ok(RateRegime {
            m,
            rate_interval: (flat_bound(tx, m), upper),
            diversity_low: high,
            diversity_high: high,
            tight: true,
        })
    } else {
        Ok(RateRegime {
            m,
            rate_interval: (upper, flat_bound(tx, m - 1)),
            diversity_low: (m - 1) * (virtual_rx - tx + m - 1),
            diversity_high: high,
            tight: false,
        })
    }
}

/// Regime for `cfg`, dispatching on the channel kind.
pub fn predict(cfg: &SystemConfig) -> Result<RateRegime> {
    match cfg.kind {
        ChannelKind::Flat => resolve_rate_regime_flat(cfg.tx, cfg.rx, cfg.rate),
        ChannelKind::Selective => {
            resolve_rate_regime_selective(cfg.tx, cfg.rx, cfg.taps, cfg.block_len, cfg.rate)
        }
    }
}

/// CSV-safe scenario label, e.g. `selective_M2_N2_L2_K64_R3_per-tap`.
pub fn scenario_label(cfg: &SystemConfig) -> String {
    match cfg.kind {
        ChannelKind::Flat => format!("flat_M{}_N{}_R{}", cfg.tx, cfg.rx, cfg.rate),
        ChannelKind::Selective => format!(
            "selective_M{}_N{}_L{}_K{}_R{}_{}",
            cfg.tx, cfg.rx, cfg.taps, cfg.block_len, cfg.rate, cfg.scaling
        ),
    }
}

/// Monte Carlo estimate of `P(I < R)` at each SNR (dB) of `grid_db`.
pub fn estimate_outage(
    cfg: &SystemConfig,
    grid_db: &[f64],
    policy: &ConvergencePolicy,
    master_seed: u64,
) -> Result<OutageCurve> {
    cfg.validate()?;
    check_grid(grid_db)?;
    policy.validate()?;
    let kernel = MmseKernel::for_config(cfg)?;
    let rate = cfg.rate;
    let mut points = Vec::with_capacity(grid_db.len());
    let mut clamps = 0;
    for (g, &snr_db) in grid_db.iter().enumerate() {
        let rho = crate::montecarlo::db_to_linear(snr_db);
        let counts = count_events(
            StreamFamily::new(master_seed, g as u64),
            policy,
            || (kernel.clone(), vec![Default::default(); kernel.input_len()]),
            |(k, buf), rng| {
                fill_complex_gaussian(buf, rng);
                let (bits, clamps) = k.capacity_bits(buf, rho)?;
                Ok((bits < rate, clamps))
            },
        )?;
        if counts.clamps > 0 {
            log::warn!(
                "numerical health: {} SINRs below -{:e} clamped at {snr_db} dB",
                counts.clamps,
                crate::mmse::CLAMP_SLACK
            );
        }
        clamps += counts.clamps;
        points.push(CurvePoint::from_counts(snr_db, counts, policy));
    }
    Ok(OutageCurve { scenario: scenario_label(cfg), points, clamps })
}

/// Which curve points enter the slope fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitWindow {
    pub snr_min_db: f64,
    pub snr_max_db: f64,
    pub p_min: f64,
    pub p_max: f64,
}

impl Default for FitWindow {
    fn default() -> Self {
        Self { snr_min_db: f64::NEG_INFINITY, snr_max_db: f64::INFINITY, p_min: 0.0, p_max: 0.1 }
    }
}

impl FitWindow {
    pub fn admits(&self, p: &CurvePoint) -> bool {
        p.converged
            && p.p_out > 0.0
            && p.p_out >= self.p_min
            && p.p_out <= self.p_max
            && p.snr_db >= self.snr_min_db
            && p.snr_db <= self.snr_max_db
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    /// Minus the fitted log-log slope.
    pub d_hat: f64,
    /// Fitted `log₁₀ p_out` at `ρ = 1`.
    pub intercept: f64,
    pub points_used: usize,
    /// Weighted RMS residual in decades.
    pub residual: f64,
    /// SNR span (dB) of the points actually used.
    pub snr_span_db: (f64, f64),
}

/// Weighted least squares of `log₁₀ p_out` on `log₁₀ ρ`, weights = event counts.
pub fn fit_diversity_slope(curve: &OutageCurve, window: &FitWindow) -> Result<SlopeFit> {
    let used: Vec<&CurvePoint> = curve.points.iter().filter(|p| window.admits(p)).collect();
    if used.len() < 3 {
        return Err(Error::InsufficientData { found: used.len() });
    }
    let triples: Vec<(f64, f64, f64)> = used
        .iter()
        .map(|p| (p.rho.log10(), p.p_out.log10(), p.outages as f64))
        .collect();
    let fit = weighted_line_fit(&triples)
        .ok_or_else(|| Error::Numerical("degenerate slope fit (coincident SNRs)".into()))?;
    let lo = used.iter().map(|p| p.snr_db).fold(f64::INFINITY, f64::min);
    let hi = used.iter().map(|p| p.snr_db).fold(f64::NEG_INFINITY, f64::max);
    Ok(SlopeFit {
        d_hat: -fit.slope,
        intercept: fit.intercept,
        points_used: used.len(),
        residual: fit.residual,
        snr_span_db: (lo, hi),
    })
}
