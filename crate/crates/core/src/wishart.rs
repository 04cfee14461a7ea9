//! Ordered eigenvalues of complex Wishart matrices `H*H` and their small-ball
//! probabilities.
//!
//! The joint density of the ordered eigenvalues `λ₁ ≤ … ≤ λ_M` of `H*H`,
//! `H` an `N × M` CN(0,1) matrix, is proportional to
//! `Π λ_i^{N−M} e^{−λ_i} · Π_{i<j} (λ_i − λ_j)²`. Near the origin this gives
//!
//! ```text
//! P(Σ_{k≤m} ρλ_k < b) ≐ P(λ_m ≤ b/ρ) ≐ ρ^{−m(N−M+m)}.
//! ```

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::mmse::CLAMP_SLACK;
use crate::montecarlo::{check_grid, count_events, ConvergencePolicy, CurvePoint, TailCurve};
use crate::randmat::fill_complex_gaussian;
use crate::rng::StreamFamily;

/// Ascending eigenvalues of an `M × M` Wishart matrix with `N` degrees of freedom.
#[derive(Debug, Clone, PartialEq)]
pub struct WishartSpectrum {
    eigenvalues: Vec<f64>,
    rx: usize,
}

impl WishartSpectrum {
    /// Sorts `eigenvalues` ascending; roundoff negatives within `CLAMP_SLACK` become 0.
    pub fn new(mut eigenvalues: Vec<f64>, rx: usize) -> Result<Self> {
        if eigenvalues.is_empty() || rx < eigenvalues.len() {
            return Err(Error::Config(format!(
                "requires N >= M >= 1, got N={rx} M={}",
                eigenvalues.len()
            )));
        }
        if eigenvalues.iter().any(|x| !x.is_finite() || *x < -CLAMP_SLACK) {
            return Err(Error::Input("eigenvalues must be finite and nonnegative".into()));
        }
        eigenvalues.iter_mut().for_each(|x| *x = x.max(0.0));
        eigenvalues.sort_by(f64::total_cmp);
        Ok(Self { eigenvalues, rx })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn tx(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn rx(&self) -> usize {
        self.rx
    }
}

/// Ascending eigenvalues of `H*H` for column-major `h` (`rx × tx`), written to `out`.
///
/// Orders one and two use the closed form; larger orders go through a
/// Hermitian eigensolver.
pub fn gram_eigenvalues(h: &[Complex64], rx: usize, tx: usize, out: &mut [f64]) {
    let col = |j: usize| &h[j * rx..(j + 1) * rx];
    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    };
    match tx {
        1 => out[0] = col(0).iter().map(|z| z.norm_sqr()).sum(),
        2 => {
            let a: f64 = col(0).iter().map(|z| z.norm_sqr()).sum();
            let d: f64 = col(1).iter().map(|z| z.norm_sqr()).sum();
            let b = dot(col(0), col(1));
            let mean = 0.5 * (a + d);
            let disc = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            out[0] = (mean - disc).max(0.0);
            out[1] = mean + disc;
        }
        _ => {
            let hm = DMatrix::from_column_slice(rx, tx, h);
            let eig = SymmetricEigen::new(hm.adjoint() * hm);
            for (o, e) in out.iter_mut().zip(eig.eigenvalues.iter()) {
                *o = e.max(0.0);
            }
            out[..tx].sort_by(f64::total_cmp);
        }
    }
}

pub fn sample_ordered_spectrum<R: Rng + ?Sized>(tx: usize, rx: usize, rng: &mut R) -> Result<WishartSpectrum> {
    if tx == 0 || rx < tx {
        return Err(Error::Config(format!("requires N >= M >= 1, got N={rx} M={tx}")));
    }
    let mut h = vec![Complex64::default(); rx * tx];
    fill_complex_gaussian(&mut h, rng);
    let mut eig = vec![0.0; tx];
    gram_eigenvalues(&h, rx, tx, &mut eig);
    if eig.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("eigensolver returned non-finite values".into()));
    }
    WishartSpectrum::new(eig, rx)
}

/// `Σ_i [(N−M) ln λ_i − λ_i] + 2 Σ_{i<j} ln|λ_i − λ_j|`: the log joint density
/// of the ordered eigenvalues, without its normalizing constant.
pub fn log_density_unnormalized(spec: &WishartSpectrum) -> Result<f64> {
    log_density_of(spec.eigenvalues(), spec.rx())
}

/// Same expression for eigenvalues in any order.
pub fn log_density_of(eigenvalues: &[f64], rx: usize) -> Result<f64> {
    let l = eigenvalues;
    if l.is_empty() || l.len() > rx {
        return Err(Error::Domain(format!("need 1 <= M <= N, got M={} N={rx}", l.len())));
    }
    if l.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::Domain("eigenvalues must be strictly positive".into()));
    }
    let power = (rx - l.len()) as f64;
    let mut total: f64 = l.iter().map(|&x| power * x.ln() - x).sum();
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            let gap = (l[i] - l[j]).abs();
            if gap == 0.0 {
                return Err(Error::Domain("eigenvalues must be distinct".into()));
            }
            total += 2.0 * gap.ln();
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TailEvent {
    /// `Σ_{k≤m} λ_k < b/ρ`
    SumOfSmallest,
    /// `λ_m ≤ b/ρ`
    SmallestBounded,
}

/// Monte Carlo estimate of `P(Σ_{k≤m} ρλ_k < b)` at each SNR (dB) in `grid_db`.
pub fn tail_sum_probability(
    tx: usize,
    rx: usize,
    m: usize,
    b: f64,
    grid_db: &[f64],
    policy: &ConvergencePolicy,
    seed: u64,
) -> Result<TailCurve> {
    tail_curve(tx, rx, m, b, grid_db, policy, seed, TailEvent::SumOfSmallest)
}

/// Monte Carlo estimate of `P(λ_m ≤ b/ρ)`, i.e. the `m` smallest eigenvalues
/// all below `b/ρ`.
pub fn smallest_eigs_probability(
    tx: usize,
    rx: usize,
    m: usize,
    b: f64,
    grid_db: &[f64],
    policy: &ConvergencePolicy,
    seed: u64,
) -> Result<TailCurve> {
    tail_curve(tx, rx, m, b, grid_db, policy, seed, TailEvent::SmallestBounded)
}

#[allow(clippy::too_many_arguments)]
fn tail_curve(
    tx: usize,
    rx: usize,
    m: usize,
    b: f64,
    grid_db: &[f64],
    policy: &ConvergencePolicy,
    seed: u64,
    event: TailEvent,
) -> Result<TailCurve> {
    if tx == 0 || rx < tx || m == 0 || m > tx {
        return Err(Error::Config(format!("requires 1 <= m <= M <= N, got m={m} M={tx} N={rx}")));
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::Config(format!("threshold b must be finite and > 0, got {b}")));
    }
    check_grid(grid_db)?;
    policy.validate()?;
    let mut points = Vec::with_capacity(grid_db.len());
    for (g, &snr_db) in grid_db.iter().enumerate() {
        let threshold = b / crate::montecarlo::db_to_linear(snr_db);
        let counts = count_events(
            StreamFamily::new(seed, g as u64),
            policy,
            || (vec![Complex64::default(); rx * tx], vec![0.0; tx]),
            |(h, eig), rng| {
                fill_complex_gaussian(h, rng);
                gram_eigenvalues(h, rx, tx, eig);
                let hit = match event {
                    TailEvent::SumOfSmallest => eig[..m].iter().sum::<f64>() < threshold,
                    TailEvent::SmallestBounded => eig[m - 1] <= threshold,
                };
                Ok((hit, 0))
            },
        )?;
        points.push(CurvePoint::from_counts(snr_db, counts, policy));
    }
    let kind = match event {
        TailEvent::SumOfSmallest => "tailsum",
        TailEvent::SmallestBounded => "smallest",
    };
    Ok(TailCurve { scenario: format!("{kind}_M{tx}_N{rx}_m{m}_b{b}"), points, clamps: 0 })
}
