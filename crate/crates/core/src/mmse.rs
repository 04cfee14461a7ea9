//! Per-stream MMSE SINRs and the resulting mutual information.
//!
//! Flat fading: `β_j = 1 / [(I + c·H*H)^{-1}]_{jj} − 1` with `c = ρ/M`.
//!
//! Cyclic-prefix frequency-selective fading: the block-circulant channel is
//! diagonalized by the length-`K` DFT, and
//!
//! ```text
//! β_j = 1 / ( (1/K) Σ_k [S(k/K)^{-1}]_{jj} ) − 1,   S(ν) = I + c·H(ν)*H(ν)
//! ```
//!
//! where `H(ν) = Σ_l H_l e^{−2iπνl}`. The constant `c` is `ρ/(ML)` under
//! [`Scaling::PerTap`] (each tap carries `1/L` of the transmit power) and
//! `ρ/M` under [`Scaling::Paper`]. A constant rescaling of `ρ` only shifts
//! outage curves horizontally, so fitted diversity does not depend on it.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::randmat::{fill_complex_gaussian, ComplexMatrix};

/// Negative SINRs closer to zero than this are roundoff and clamped silently.
pub const CLAMP_SLACK: f64 = 1e-12;

/// Largest `K·M` the block-circulant oracle accepts.
pub const ORACLE_MAX_SIZE: usize = 512;

/// Dimension limits accepted by [`SystemConfig::validate`].
pub const MAX_ANTENNAS: usize = 64;
pub const MAX_TAPS: usize = 64;
pub const MAX_BLOCK_LEN: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scaling {
    /// `c = ρ/(ML)`, matching the per-tap transmit normalization.
    #[default]
    PerTap,
    /// `c = ρ/M` regardless of the tap count.
    Paper,
}

impl Scaling {
    pub fn coefficient(self, rho: f64, tx: usize, taps: usize) -> f64 {
        match self {
            Scaling::PerTap => rho / (tx * taps) as f64,
            Scaling::Paper => rho / tx as f64,
        }
    }
}

impl fmt::Display for Scaling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scaling::PerTap => "per-tap",
            Scaling::Paper => "paper",
        })
    }
}

impl FromStr for Scaling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-tap" => Ok(Scaling::PerTap),
            "paper" => Ok(Scaling::Paper),
            other => Err(Error::Config(format!(
                "unknown scaling '{other}', expected per-tap or paper"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Flat,
    Selective,
}

/// Scenario dimensions and target rate. The SNR is supplied per evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    pub kind: ChannelKind,
    /// Transmit antennas `M`.
    pub tx: usize,
    /// Receive antennas `N`.
    pub rx: usize,
    /// Channel taps `L` (1 for flat fading).
    pub taps: usize,
    /// Cyclic-prefix block length `K`; ignored for flat fading.
    pub block_len: usize,
    /// Target rate `R` in bits/s/Hz.
    pub rate: f64,
    pub scaling: Scaling,
}

impl SystemConfig {
    pub fn flat(tx: usize, rx: usize, rate: f64) -> Self {
        Self { kind: ChannelKind::Flat, tx, rx, taps: 1, block_len: 1, rate, scaling: Scaling::PerTap }
    }

    pub fn selective(tx: usize, rx: usize, taps: usize, block_len: usize, rate: f64) -> Self {
        Self { kind: ChannelKind::Selective, tx, rx, taps, block_len, rate, scaling: Scaling::PerTap }
    }

    pub fn with_scaling(mut self, scaling: Scaling) -> Self {
        self.scaling = scaling;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.tx == 0 {
            return Err(Error::Config("M must be at least 1".into()));
        }
        if self.rx < self.tx {
            return Err(Error::Config(format!("requires N >= M, got N={} M={}", self.rx, self.tx)));
        }
        if self.taps == 0 {
            return Err(Error::Config("L must be at least 1".into()));
        }
        if self.rx > MAX_ANTENNAS || self.taps > MAX_TAPS || self.block_len > MAX_BLOCK_LEN {
            return Err(Error::Config(format!(
                "dimensions limited to M, N <= {MAX_ANTENNAS}, L <= {MAX_TAPS}, K <= {MAX_BLOCK_LEN}"
            )));
        }
        match self.kind {
            ChannelKind::Flat if self.taps != 1 => {
                return Err(Error::Config("flat fading has exactly one tap".into()));
            }
            ChannelKind::Selective if self.block_len < self.taps => {
                return Err(Error::Config(format!(
                    "requires K >= L, got K={} L={}",
                    self.block_len, self.taps
                )));
            }
            _ => {}
        }
        if !(self.rate.is_finite() && self.rate >= 0.0) {
            return Err(Error::Config(format!("rate must be finite and >= 0, got {}", self.rate)));
        }
        Ok(())
    }
}

/// One channel draw: a single `N × M` matrix, or `L` tap matrices.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelRealization {
    Flat(ComplexMatrix),
    Selective(Vec<ComplexMatrix>),
}

impl ChannelRealization {
    pub fn selective(taps: Vec<ComplexMatrix>) -> Result<Self> {
        let first = taps.first().ok_or_else(|| Error::Config("need at least one tap".into()))?;
        let shape = first.shape();
        if taps.iter().any(|t| t.shape() != shape) {
            return Err(Error::Config("all taps must share the same N x M shape".into()));
        }
        Ok(Self::Selective(taps))
    }

    /// Draws a realization for `cfg` with i.i.d. CN(0,1) entries.
    pub fn sample<R: Rng + ?Sized>(cfg: &SystemConfig, rng: &mut R) -> Result<Self> {
        cfg.validate()?;
        let mut draw = || {
            let mut h = ComplexMatrix::zeros(cfg.rx, cfg.tx);
            fill_complex_gaussian(h.as_mut_slice(), rng);
            h
        };
        Ok(match cfg.kind {
            ChannelKind::Flat => Self::Flat(draw()),
            ChannelKind::Selective => Self::Selective((0..cfg.taps).map(|_| draw()).collect()),
        })
    }

    pub fn taps(&self) -> &[ComplexMatrix] {
        match self {
            Self::Flat(h) => std::slice::from_ref(h),
            Self::Selective(t) => t,
        }
    }

    /// `(N, M)`
    pub fn shape(&self) -> (usize, usize) {
        self.taps()[0].shape()
    }

    fn contiguous(&self) -> Result<Vec<Complex64>> {
        let taps = self.taps();
        let mut out = Vec::with_capacity(taps.len() * taps[0].len());
        for t in taps {
            if t.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::Input("channel contains non-finite entries".into()));
            }
            out.extend_from_slice(t.as_slice());
        }
        Ok(out)
    }
}

/// Linear per-stream SINRs.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrVector {
    pub beta: Vec<f64>,
    /// Entries that came out below `−CLAMP_SLACK` before clamping.
    pub severe_clamps: usize,
}

/// Mutual information in bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CapacityValue(pub f64);

impl CapacityValue {
    pub fn bits(self) -> f64 {
        self.0
    }
}

/// `Σ_j log₂(1 + β_j)`.
pub fn capacity(s: &SinrVector) -> Result<CapacityValue> {
    if let Some(b) = s.beta.iter().find(|b| !(**b >= 0.0)) {
        return Err(Error::Input(format!("SINR must be nonnegative, got {b}")));
    }
    Ok(CapacityValue(s.beta.iter().map(|b| b.ln_1p()).sum::<f64>() / std::f64::consts::LN_2))
}

pub fn flat_sinrs(h: &ComplexMatrix, rho: f64) -> Result<SinrVector> {
    check_rho(rho)?;
    let channel = ChannelRealization::Flat(h.clone());
    let data = channel.contiguous()?;
    let (rx, tx) = h.shape();
    let mut kernel = MmseKernel::new(tx, rx, 1, 1, Scaling::Paper)?;
    kernel.sinrs(&data, rho)
}

pub fn selective_sinrs(
    channel: &ChannelRealization,
    rho: f64,
    block_len: usize,
    scaling: Scaling,
) -> Result<SinrVector> {
    check_rho(rho)?;
    let taps = channel.taps().len();
    if block_len < taps {
        return Err(Error::Config(format!("requires K >= L, got K={block_len} L={taps}")));
    }
    let data = channel.contiguous()?;
    let (rx, tx) = channel.shape();
    let mut kernel = MmseKernel::new(tx, rx, taps, block_len, scaling)?;
    kernel.sinrs(&data, rho)
}

/// Diagonal of `(I_{KM} + c·C*C)^{-1}` where `C` is the `KN × KM`
/// block-circulant channel operator, block `(t, s)` = `H_{(t−s) mod K}`.
/// Entry `t·M + j` belongs to time slot `t`, stream `j`.
pub fn block_circulant_resolvent_diagonal(
    channel: &ChannelRealization,
    rho: f64,
    block_len: usize,
    scaling: Scaling,
) -> Result<Vec<f64>> {
    check_rho(rho)?;
    let taps = channel.taps();
    let (rx, tx) = channel.shape();
    if block_len < taps.len() {
        return Err(Error::Config(format!(
            "requires K >= L, got K={block_len} L={}",
            taps.len()
        )));
    }
    if block_len * tx > ORACLE_MAX_SIZE {
        return Err(Error::Config(format!(
            "oracle limited to K*M <= {ORACLE_MAX_SIZE}, got {}",
            block_len * tx
        )));
    }
    channel.contiguous()?;
    let c = scaling.coefficient(rho, tx, taps.len());
    let mut op = DMatrix::<Complex64>::zeros(block_len * rx, block_len * tx);
    for t in 0..block_len {
        for s in 0..block_len {
            let lag = (t + block_len - s) % block_len;
            if let Some(h) = taps.get(lag) {
                op.view_mut((t * rx, s * tx), (rx, tx)).copy_from(h);
            }
        }
    }
    let size = block_len * tx;
    let mut a = op.adjoint() * &op * Complex64::new(c, 0.0);
    for i in 0..size {
        a[(i, i)] += Complex64::new(1.0, 0.0);
    }
    let g = a
        .try_inverse()
        .ok_or_else(|| Error::Numerical("block-circulant resolvent is singular".into()))?;
    Ok((0..size).map(|i| g[(i, i)].re).collect())
}

/// Time-domain reference for [`selective_sinrs`]: inverts the full
/// block-circulant resolvent, `O((KM)³)`.
pub fn selective_sinrs_oracle(
    channel: &ChannelRealization,
    rho: f64,
    block_len: usize,
    scaling: Scaling,
) -> Result<SinrVector> {
    let diag = block_circulant_resolvent_diagonal(channel, rho, block_len, scaling)?;
    let tx = channel.shape().1;
    let mean: Vec<f64> = (0..tx)
        .map(|j| (0..block_len).map(|t| diag[t * tx + j]).sum::<f64>() / block_len as f64)
        .collect();
    Ok(sinrs_from_resolvent(&mean))
}

fn check_rho(rho: f64) -> Result<()> {
    if rho.is_finite() && rho > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("SNR must be finite and > 0, got {rho}")))
    }
}

fn sinrs_from_resolvent(diag: &[f64]) -> SinrVector {
    let mut severe_clamps = 0;
    let beta = diag
        .iter()
        .map(|&g| {
            let b = 1.0 / g - 1.0;
            if b < -CLAMP_SLACK {
                severe_clamps += 1;
            }
            b.max(0.0)
        })
        .collect();
    SinrVector { beta, severe_clamps }
}

/// Allocation-free SINR evaluator for a fixed set of dimensions.
///
/// Channel data is passed as `L` column-major `N × M` blocks laid end to end.
#[derive(Debug, Clone)]
pub struct MmseKernel {
    tx: usize,
    rx: usize,
    taps: usize,
    block_len: usize,
    scaling: Scaling,
    /// `e^{−2iπkl/K}`, indexed `k·L + l`.
    twiddles: Vec<Complex64>,
    freq: Vec<Complex64>,
    gram: Vec<Complex64>,
    column: Vec<Complex64>,
    inv_pivot: Vec<f64>,
    diag: Vec<f64>,
    acc: Vec<f64>,
}

impl MmseKernel {
    pub fn new(tx: usize, rx: usize, taps: usize, block_len: usize, scaling: Scaling) -> Result<Self> {
        if tx == 0 || rx == 0 || taps == 0 || block_len < taps {
            return Err(Error::Config(format!(
                "invalid kernel dimensions M={tx} N={rx} L={taps} K={block_len}"
            )));
        }
        let twiddles = (0..block_len)
            .flat_map(|k| {
                (0..taps).map(move |l| {
                    // reduce the exponent first so large K·L keeps full accuracy
                    let turn = ((k * l) % block_len) as f64 / block_len as f64;
                    Complex64::from_polar(1.0, -TAU * turn)
                })
            })
            .collect();
        Ok(Self {
            tx,
            rx,
            taps,
            block_len,
            scaling,
            twiddles,
            freq: vec![Complex64::default(); rx * tx],
            gram: vec![Complex64::default(); tx * tx],
            column: vec![Complex64::default(); tx],
            inv_pivot: vec![0.0; tx],
            diag: vec![0.0; tx],
            acc: vec![0.0; tx],
        })
    }

    pub fn for_config(cfg: &SystemConfig) -> Result<Self> {
        cfg.validate()?;
        match cfg.kind {
            ChannelKind::Flat => Self::new(cfg.tx, cfg.rx, 1, 1, Scaling::Paper),
            ChannelKind::Selective => Self::new(cfg.tx, cfg.rx, cfg.taps, cfg.block_len, cfg.scaling),
        }
    }

    /// Number of complex entries expected by [`MmseKernel::sinrs`].
    pub fn input_len(&self) -> usize {
        self.taps * self.rx * self.tx
    }

    pub fn sinrs(&mut self, channel: &[Complex64], rho: f64) -> Result<SinrVector> {
        self.resolvent_mean(channel, rho)?;
        Ok(sinrs_from_resolvent(&self.acc))
    }

    /// Mutual information in bits, plus the count of severe clamps.
    pub fn capacity_bits(&mut self, channel: &[Complex64], rho: f64) -> Result<(f64, usize)> {
        self.resolvent_mean(channel, rho)?;
        let mut clamps = 0;
        let mut nats = 0.0;
        for &g in &self.acc {
            let b = 1.0 / g - 1.0;
            if b < -CLAMP_SLACK {
                clamps += 1;
            }
            nats += b.max(0.0).ln_1p();
        }
        Ok((nats / std::f64::consts::LN_2, clamps))
    }

    /// Leaves `(1/K) Σ_k diag(S_k^{-1})` in `self.acc`.
    fn resolvent_mean(&mut self, channel: &[Complex64], rho: f64) -> Result<()> {
        if channel.len() != self.input_len() {
            return Err(Error::Input(format!(
                "expected {} channel entries, got {}",
                self.input_len(),
                channel.len()
            )));
        }
        let c = self.scaling.coefficient(rho, self.tx, self.taps);
        let block = self.rx * self.tx;
        self.acc.iter_mut().for_each(|a| *a = 0.0);
        if self.taps == 1 {
            self.freq.copy_from_slice(channel);
            self.bin_diagonal(c)?;
            self.acc.copy_from_slice(&self.diag);
            return Ok(());
        }
        for k in 0..self.block_len {
            let tw = &self.twiddles[k * self.taps..(k + 1) * self.taps];
            self.freq.copy_from_slice(&channel[..block]);
            for (l, w) in tw.iter().enumerate().skip(1) {
                let tap = &channel[l * block..(l + 1) * block];
                for (f, h) in self.freq.iter_mut().zip(tap) {
                    *f += w * h;
                }
            }
            self.bin_diagonal(c)?;
            for (a, d) in self.acc.iter_mut().zip(&self.diag) {
                *a += d;
            }
        }
        let inv_k = 1.0 / self.block_len as f64;
        self.acc.iter_mut().for_each(|a| *a *= inv_k);
        Ok(())
    }

    /// `diag((I + c·F*F)^{-1})` for the matrix currently in `self.freq`.
    fn bin_diagonal(&mut self, c: f64) -> Result<()> {
        let (m, n) = (self.tx, self.rx);
        // lower triangle of the Gram matrix, row-major
        for j in 0..m {
            let col_j = &self.freq[j * n..(j + 1) * n];
            for k in 0..j {
                let col_k = &self.freq[k * n..(k + 1) * n];
                let mut dot = Complex64::default();
                for (a, b) in col_j.iter().zip(col_k) {
                    dot += a.conj() * b;
                }
                self.gram[j * m + k] = dot * c;
            }
            let energy: f64 = col_j.iter().map(|z| z.norm_sqr()).sum();
            self.gram[j * m + j] = Complex64::new(1.0 + c * energy, 0.0);
        }
        ldl_inverse_diagonal(&mut self.gram, m, &mut self.column, &mut self.inv_pivot, &mut self.diag)
    }
}

/// Factors the Hermitian positive-definite `a` (row-major, lower triangle
/// read) in place as `L·D·L*` with unit lower-triangular `L`, then writes
/// `diag(A^{-1}) = Σ_i |(L^{-1})_{ij}|² / D_i` into `out` by forward-solving
/// `L x = e_j` for each column. `inv_pivot` receives `1/D_j`.
fn ldl_inverse_diagonal(
    a: &mut [Complex64],
    m: usize,
    column: &mut [Complex64],
    inv_pivot: &mut [f64],
    out: &mut [f64],
) -> Result<()> {
    for j in 0..m {
        let row_j = j * m;
        // entries left of the diagonal hold L_jk·D_k until their row becomes the pivot row
        let mut d = a[row_j + j].re;
        for k in 0..j {
            let ldk = a[row_j + k];
            let l = ldk * inv_pivot[k];
            d -= (ldk * l.conj()).re;
            a[row_j + k] = l;
        }
        if !(d > 0.0) {
            return Err(Error::Numerical(format!("matrix not positive definite at pivot {j}")));
        }
        inv_pivot[j] = 1.0 / d;
        for i in j + 1..m {
            let row_i = i * m;
            let mut s = a[row_i + j];
            for k in 0..j {
                s -= a[row_i + k] * a[row_j + k].conj();
            }
            a[row_i + j] = s;
        }
    }
    for j in 0..m {
        column[j] = Complex64::new(1.0, 0.0);
        let mut sum = inv_pivot[j];
        for i in j + 1..m {
            let row_i = i * m;
            let mut s = Complex64::default();
            for k in j..i {
                s -= a[row_i + k] * column[k];
            }
            column[i] = s;
            sum += s.norm_sqr() * inv_pivot[i];
        }
        out[j] = sum;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randmat::sample_complex_gaussian;
    use crate::rng::stream;

    fn explicit_flat(h: &ComplexMatrix, rho: f64) -> Vec<f64> {
        let m = h.ncols();
        let a = ComplexMatrix::identity(m, m) + h.adjoint() * h * Complex64::new(rho / m as f64, 0.0);
        let inv = a.try_inverse().unwrap();
        (0..m).map(|j| 1.0 / inv[(j, j)].re - 1.0).collect()
    }

    #[test]
    fn siso_unit_channel() {
        let h = ComplexMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        let s = flat_sinrs(&h, 3.0).unwrap();
        assert!((s.beta[0] - 3.0).abs() < 1e-14);
        assert!((capacity(&s).unwrap().bits() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn zero_channel_gives_zero() {
        let h = ComplexMatrix::zeros(3, 2);
        let s = flat_sinrs(&h, 10.0).unwrap();
        assert_eq!(s.beta, vec![0.0, 0.0]);
        assert_eq!(capacity(&s).unwrap().bits(), 0.0);

        let sel = ChannelRealization::selective(vec![ComplexMatrix::zeros(2, 2); 3]).unwrap();
        assert_eq!(selective_sinrs(&sel, 5.0, 8, Scaling::PerTap).unwrap().beta, vec![0.0, 0.0]);
        assert_eq!(selective_sinrs_oracle(&sel, 5.0, 8, Scaling::PerTap).unwrap().beta, vec![0.0, 0.0]);
    }

    #[test]
    fn capacity_values() {
        let cap = |b: Vec<f64>| capacity(&SinrVector { beta: b, severe_clamps: 0 });
        assert_eq!(cap(vec![0.0, 0.0]).unwrap().bits(), 0.0);
        assert!((cap(vec![1.0, 3.0]).unwrap().bits() - 3.0).abs() < 1e-14);
        assert!(matches!(cap(vec![1.0, -0.5]), Err(Error::Input(_))));
    }

    #[test]
    fn flat_matches_explicit_inverse() {
        let mut rng = stream(5, 0);
        for _ in 0..50 {
            let h = sample_complex_gaussian(2, 2, &mut rng).unwrap();
            let got = flat_sinrs(&h, 10.0).unwrap().beta;
            for (g, e) in got.iter().zip(explicit_flat(&h, 10.0)) {
                assert!((g - e).abs() <= 1e-10 * e.abs().max(1e-300), "{g} vs {e}");
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut h = ComplexMatrix::zeros(2, 2);
        assert!(matches!(flat_sinrs(&h, 0.0), Err(Error::Config(_))));
        h[(0, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(matches!(flat_sinrs(&h, 1.0), Err(Error::Input(_))));

        let sel = ChannelRealization::selective(vec![ComplexMatrix::zeros(2, 2); 3]).unwrap();
        assert!(matches!(selective_sinrs(&sel, 1.0, 2, Scaling::PerTap), Err(Error::Config(_))));
        let big = ChannelRealization::selective(vec![ComplexMatrix::zeros(2, 3); 2]).unwrap();
        assert!(matches!(
            selective_sinrs_oracle(&big, 1.0, 200, Scaling::PerTap),
            Err(Error::Config(_))
        ));
        assert!(ChannelRealization::selective(vec![]).is_err());
        assert!(ChannelRealization::selective(vec![ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(3, 2)]).is_err());
    }

    #[test]
    fn single_tap_selective_equals_flat() {
        let mut rng = stream(6, 0);
        for _ in 0..20 {
            let h = sample_complex_gaussian(3, 2, &mut rng).unwrap();
            let flat = flat_sinrs(&h, 7.0).unwrap().beta;
            let sel = ChannelRealization::selective(vec![h]).unwrap();
            for scaling in [Scaling::PerTap, Scaling::Paper] {
                let got = selective_sinrs(&sel, 7.0, 8, scaling).unwrap().beta;
                for (g, f) in got.iter().zip(&flat) {
                    assert!((g - f).abs() <= 1e-12 * f.abs(), "{g} vs {f}");
                }
            }
        }
    }

    #[test]
    fn scalar_circulant_oracle() {
        let tap = ComplexMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        let sel = ChannelRealization::selective(vec![tap]).unwrap();
        let s = selective_sinrs_oracle(&sel, 1.0, 2, Scaling::PerTap).unwrap();
        assert!((s.beta[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn circulant_diagonal_is_shift_invariant() {
        let mut rng = stream(7, 0);
        let cfg = SystemConfig::selective(2, 3, 3, 8, 1.0);
        let ch = ChannelRealization::sample(&cfg, &mut rng).unwrap();
        let diag = block_circulant_resolvent_diagonal(&ch, 4.0, 8, Scaling::PerTap).unwrap();
        for j in 0..2 {
            for t in 1..8 {
                assert!((diag[t * 2 + j] - diag[j]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn frequency_domain_matches_oracle() {
        let mut rng = stream(8, 0);
        let cfg = SystemConfig::selective(2, 2, 3, 8, 1.0);
        for scaling in [Scaling::PerTap, Scaling::Paper] {
            let ch = ChannelRealization::sample(&cfg, &mut rng).unwrap();
            let fast = selective_sinrs(&ch, 5.0, 8, scaling).unwrap().beta;
            let slow = selective_sinrs_oracle(&ch, 5.0, 8, scaling).unwrap().beta;
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() <= 1e-8 * b.abs(), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn kernel_rejects_wrong_length() {
        let mut k = MmseKernel::new(2, 2, 2, 4, Scaling::PerTap).unwrap();
        assert!(k.sinrs(&[Complex64::default(); 3], 1.0).is_err());
        assert!(MmseKernel::new(2, 2, 3, 2, Scaling::PerTap).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SystemConfig::flat(2, 2, 3.0).validate().is_ok());
        assert!(SystemConfig::flat(3, 2, 3.0).validate().is_err());
        assert!(SystemConfig::flat(0, 2, 3.0).validate().is_err());
        assert!(SystemConfig::flat(2, 2, -1.0).validate().is_err());
        assert!(SystemConfig::selective(2, 2, 3, 2, 1.0).validate().is_err());
        assert!(SystemConfig::selective(2, 2, 2, 64, 3.0).validate().is_ok());
        assert_eq!("paper".parse::<Scaling>().unwrap(), Scaling::Paper);
        assert!("bogus".parse::<Scaling>().is_err());
    }
}
