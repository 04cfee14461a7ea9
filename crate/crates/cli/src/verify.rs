//! `verify-*` suites: each check prints one PASS/FAIL line.

use std::f64::consts::FRAC_PI_2;

use mmse_outage::config::Settings;
use mmse_outage::diversity::{fit_diversity_slope, FitWindow};
use mmse_outage::mmse::{
    capacity, flat_sinrs, selective_sinrs, selective_sinrs_oracle, ChannelRealization, SystemConfig,
};
use mmse_outage::montecarlo::{snr_grid, ConvergencePolicy, TailCurve};
use mmse_outage::randmat::{
    sample_complex_gaussian, sample_haar_qr_oracle, sample_haar_recursive, sample_sin_power_angle,
    unitarity_residual, ComplexMatrix,
};
use mmse_outage::rng::{stream, StreamFamily};
use mmse_outage::stats::{ks_critical_1pct, ks_statistic, ks_two_sample, ks_two_sample_critical_1pct};
use mmse_outage::wishart::{
    log_density_of, log_density_unnormalized, sample_ordered_spectrum, smallest_eigs_probability,
    tail_sum_probability,
};
use mmse_outage::Result;
use num_complex::Complex64;
use rand::Rng as _;

use crate::Status;

struct Suite {
    failures: usize,
}

impl Suite {
    fn new(name: &str, seed: u64) -> Self {
        println!("{name} (seed {seed}, mmse-outage {})", crate::report::VERSION);
        Self { failures: 0 }
    }

    fn check(&mut self, name: &str, passed: bool, detail: String) {
        if !passed {
            self.failures += 1;
        }
        println!("{} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    }

    fn finish(self) -> Status {
        if self.failures == 0 {
            println!("all checks passed");
            Status::Ok
        } else {
            println!("{} check(s) failed", self.failures);
            Status::Incomplete
        }
    }
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// CDF of the density `∝ sin^k θ` on `[0, π/2]` by cumulative trapezoid quadrature.
fn sin_power_cdf(k: u32) -> impl Fn(f64) -> f64 {
    const STEPS: usize = 20_000;
    let h = FRAC_PI_2 / STEPS as f64;
    let f = |t: f64| t.sin().powi(k as i32);
    let mut cum = vec![0.0; STEPS + 1];
    for i in 1..=STEPS {
        cum[i] = cum[i - 1] + 0.5 * h * (f((i - 1) as f64 * h) + f(i as f64 * h));
    }
    let total = cum[STEPS];
    move |t: f64| {
        let x = (t / h).clamp(0.0, STEPS as f64);
        let i = (x.floor() as usize).min(STEPS - 1);
        let frac = x - i as f64;
        (cum[i] + frac * (cum[i + 1] - cum[i])) / total
    }
}

pub fn haar(settings: &Settings) -> Result<Status> {
    let seed = settings.seed();
    let draws = settings.max_trials.unwrap_or(100_000).max(2) as usize;
    let orders: Vec<usize> = match settings.tx {
        Some(m) => vec![m],
        None => vec![2, 3, 4],
    };
    let mut suite = Suite::new("verify-haar", seed);

    for k in [0u32, 1, 2, 3, 5] {
        let mut rng = stream(seed, 100 + u64::from(k));
        let mut xs: Vec<f64> = (0..draws).map(|_| sample_sin_power_angle(k, &mut rng)).collect();
        let d = ks_statistic(&mut xs, sin_power_cdf(k));
        let crit = ks_critical_1pct(draws);
        suite.check(&format!("angle sampler k={k}"), d < crit, format!("KS {d:.5} < {crit:.5}"));
    }

    for &order in &orders {
        let rec_family = StreamFamily::new(seed, 2 * order as u64);
        let qr_family = StreamFamily::new(seed, 2 * order as u64 + 1);
        let mut samples = [Vec::with_capacity(draws), Vec::with_capacity(draws)];
        let mut worst = [0.0f64; 2];
        for draw in 0..draws as u64 {
            let u = [
                sample_haar_recursive(order, &mut rec_family.trial(draw))?,
                sample_haar_qr_oracle(order, &mut qr_family.trial(draw))?,
            ];
            for (s, u) in u.into_iter().enumerate() {
                worst[s] = worst[s].max(unitarity_residual(&u));
                samples[s].push(u.iter().map(|z| z.norm_sqr()).collect::<Vec<f64>>());
            }
        }
        for (s, label) in ["recursive", "qr"].iter().enumerate() {
            suite.check(
                &format!("M={order} {label} unitarity"),
                worst[s] <= 1e-10,
                format!("max residual {:.2e} <= 1e-10", worst[s]),
            );
            let target = 1.0 / order as f64;
            let mut max_z: f64 = 0.0;
            for entry in 0..order * order {
                let xs: Vec<f64> = samples[s].iter().map(|v| v[entry]).collect();
                let (mean, se) = mean_and_se(&xs);
                max_z = max_z.max((mean - target).abs() / se);
            }
            suite.check(
                &format!("M={order} {label} second moments"),
                max_z <= 3.0,
                format!("max |mean - 1/M| / se = {max_z:.3} <= 3"),
            );
        }
        let mut a: Vec<f64> = samples[0].iter().map(|v| v[0]).collect();
        let mut b: Vec<f64> = samples[1].iter().map(|v| v[0]).collect();
        let d = ks_two_sample(&mut a, &mut b);
        let crit = ks_two_sample_critical_1pct(draws, draws);
        suite.check(
            &format!("M={order} |U11|² recursive vs qr"),
            d < crit,
            format!("KS {d:.5} < {crit:.5}"),
        );
    }
    Ok(suite.finish())
}

fn relative_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

fn ml_capacity(h: &ComplexMatrix, rho: f64) -> f64 {
    let m = h.ncols();
    let a = ComplexMatrix::identity(m, m) + h.adjoint() * h * Complex64::new(rho / m as f64, 0.0);
    let l = a.cholesky().expect("I + PSD is positive definite").l();
    (0..m).map(|i| 2.0 * l[(i, i)].re.log2()).sum()
}

pub fn sinr(settings: &Settings) -> Result<Status> {
    let seed = settings.seed();
    let scaling = settings.scaling.unwrap_or_default();
    let instances = settings.max_trials.unwrap_or(100) as usize;
    let mut suite = Suite::new("verify-sinr", seed);
    let mut rng = stream(seed, 0);

    let mut worst: f64 = 0.0;
    let mut worst_reduction: f64 = 0.0;
    let mut ml_violations = 0;
    let mut monotone_violations = 0;
    let mut negative = 0;
    for _ in 0..instances {
        let tx = rng.random_range(1..=3);
        let rx = rng.random_range(tx..=3);
        let taps = rng.random_range(1..=3);
        let block_len = [4, 8, 16][rng.random_range(0..3)];
        let rho = 10f64.powf(rng.random_range(-1.0..3.0));
        let cfg = SystemConfig::selective(tx, rx, taps, block_len, 1.0).with_scaling(scaling);
        let ch = ChannelRealization::sample(&cfg, &mut rng)?;
        let fast = selective_sinrs(&ch, rho, block_len, scaling)?;
        let slow = selective_sinrs_oracle(&ch, rho, block_len, scaling)?;
        worst = worst.max(relative_gap(&fast.beta, &slow.beta));
        negative += fast.beta.iter().filter(|b| **b < 0.0).count();

        let h = sample_complex_gaussian(rx, tx, &mut rng)?;
        let flat = flat_sinrs(&h, rho)?;
        let single = ChannelRealization::selective(vec![h.clone()])?;
        worst_reduction = worst_reduction.max(relative_gap(&selective_sinrs(&single, rho, block_len, scaling)?.beta, &flat.beta));
        if capacity(&flat)?.bits() > ml_capacity(&h, rho) + 1e-9 {
            ml_violations += 1;
        }
        let mut prev: Option<Vec<f64>> = None;
        for step in 0..10 {
            let r = 10f64.powf(-1.0 + 0.5 * step as f64);
            let b = selective_sinrs(&ch, r, block_len, scaling)?.beta;
            if let Some(p) = &prev {
                if b.iter().zip(p).any(|(x, y)| *x < *y - 1e-12 * y.abs()) {
                    monotone_violations += 1;
                }
            }
            prev = Some(b);
        }
    }
    suite.check(
        "frequency-domain vs block-circulant",
        worst <= 1e-8,
        format!("max relative gap {worst:.2e} <= 1e-8 over {instances} instances"),
    );
    suite.check(
        "single tap reduces to flat",
        worst_reduction <= 1e-12,
        format!("max relative gap {worst_reduction:.2e} <= 1e-12"),
    );
    suite.check("nonnegative SINR", negative == 0, format!("{negative} negative values"));
    suite.check("MMSE capacity <= log det", ml_violations == 0, format!("{ml_violations} violations"));
    suite.check("SINR nondecreasing in SNR", monotone_violations == 0, format!("{monotone_violations} violations"));
    Ok(suite.finish())
}

fn tail_check(
    suite: &mut Suite,
    label: &str,
    curve: Result<TailCurve>,
    expected: f64,
    tol: f64,
) -> Result<()> {
    let curve = curve?;
    let window = FitWindow { p_max: 0.1, ..Default::default() };
    match fit_diversity_slope(&curve, &window) {
        Ok(f) => suite.check(
            label,
            (f.d_hat - expected).abs() <= tol,
            format!(
                "exponent {:.3} vs {expected} ± {tol} ({} points, {}..{} dB)",
                f.d_hat, f.points_used, f.snr_span_db.0, f.snr_span_db.1
            ),
        ),
        Err(e) => suite.check(label, false, e.to_string()),
    }
    Ok(())
}

pub fn wishart(settings: &Settings) -> Result<Status> {
    let seed = settings.seed();
    let mut suite = Suite::new("verify-wishart", seed);
    let mut rng = stream(seed, 0);

    for (tx, rx) in [(1, 1), (1, 3), (2, 2)] {
        let xs: Vec<f64> = (0..100_000)
            .map(|_| sample_ordered_spectrum(tx, rx, &mut rng).map(|s| s.eigenvalues().iter().sum()))
            .collect::<Result<_>>()?;
        let (mean, se) = mean_and_se(&xs);
        let expected = (tx * rx) as f64;
        suite.check(
            &format!("E[trace] M={tx} N={rx}"),
            (mean - expected).abs() <= 3.0 * se,
            format!("{mean:.4} vs {expected} (se {se:.4})"),
        );
    }

    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let s = sample_ordered_spectrum(3, 5, &mut rng)?;
        let base = log_density_unnormalized(&s)?;
        let mut perm = s.eigenvalues().to_vec();
        for shift in 1..perm.len() {
            perm.rotate_left(1);
            perm.swap(0, shift);
            worst = worst.max((log_density_of(&perm, 5)? - base).abs() / base.abs().max(1.0));
        }
    }
    suite.check("log density permutation symmetry", worst <= 1e-12, format!("max change {worst:.2e}"));

    let policy = ConvergencePolicy { min_trials: 1, max_trials: 60_000_000, target_events: 200 };
    tail_check(
        &mut suite,
        "P(ρλ1 < 1), M=N=2",
        tail_sum_probability(2, 2, 1, 1.0, &snr_grid(15.0, 35.0, 2.5)?, &policy, seed),
        1.0,
        0.2,
    )?;
    tail_check(
        &mut suite,
        "P(ρ(λ1+λ2) < 4), M=2 N=3",
        tail_sum_probability(2, 3, 2, 4.0, &snr_grid(6.0, 10.0, 0.5)?, &policy, seed),
        6.0,
        0.9,
    )?;
    tail_check(
        &mut suite,
        "P(λ2 <= 2/ρ), M=N=2",
        smallest_eigs_probability(2, 2, 2, 2.0, &snr_grid(5.0, 11.0, 0.5)?, &policy, seed),
        4.0,
        0.8,
    )?;
    Ok(suite.finish())
}
