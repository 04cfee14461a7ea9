use mmse_outage::mmse::{
    block_circulant_resolvent_diagonal, capacity, flat_sinrs, selective_sinrs, selective_sinrs_oracle,
    ChannelRealization, MmseKernel, Scaling, SystemConfig,
};
use mmse_outage::randmat::{sample_complex_gaussian, ComplexMatrix};
use mmse_outage::rng::stream;
use num_complex::Complex64;
use proptest::prelude::*;

fn relative_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs() / y.abs().max(1e-300)).fold(0.0, f64::max)
}

fn log2_det(h: &ComplexMatrix, rho: f64) -> f64 {
    let m = h.ncols();
    let a = ComplexMatrix::identity(m, m) + h.adjoint() * h * Complex64::new(rho / m as f64, 0.0);
    let l = a.cholesky().unwrap().l();
    (0..m).map(|i| 2.0 * l[(i, i)].re.log2()).sum()
}

fn dims() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (1usize..=3, 0usize..=2, 1usize..=3, prop::sample::select(vec![4usize, 8, 16]))
        .prop_map(|(tx, extra, taps, k)| (tx, (tx + extra).min(3), taps, k))
}

fn scaling() -> impl Strategy<Value = Scaling> {
    prop_oneof![Just(Scaling::PerTap), Just(Scaling::Paper)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn frequency_domain_matches_block_circulant(
        (tx, rx, taps, k) in dims(), scaling in scaling(), log_rho in -1.0f64..3.0, seed in any::<u64>()
    ) {
        let cfg = SystemConfig::selective(tx, rx, taps, k, 1.0).with_scaling(scaling);
        let ch = ChannelRealization::sample(&cfg, &mut stream(seed, 0)).unwrap();
        let rho = 10f64.powf(log_rho);
        let fast = selective_sinrs(&ch, rho, k, scaling).unwrap();
        let slow = selective_sinrs_oracle(&ch, rho, k, scaling).unwrap();
        prop_assert!(relative_gap(&fast.beta, &slow.beta) <= 1e-8);
    }

    #[test]
    fn resolvent_diagonal_is_shift_invariant(
        (tx, rx, taps, k) in dims(), log_rho in -1.0f64..3.0, seed in any::<u64>()
    ) {
        let cfg = SystemConfig::selective(tx, rx, taps, k, 1.0);
        let ch = ChannelRealization::sample(&cfg, &mut stream(seed, 0)).unwrap();
        let d = block_circulant_resolvent_diagonal(&ch, 10f64.powf(log_rho), k, Scaling::PerTap).unwrap();
        for t in 1..k {
            for j in 0..tx {
                prop_assert!((d[t * tx + j] - d[j]).abs() <= 1e-10);
            }
        }
        prop_assert!(d.iter().all(|&g| g > 0.0 && g <= 1.0 + 1e-12));
    }

    #[test]
    fn sinrs_nonnegative_and_nondecreasing_in_snr(
        (tx, rx, taps, k) in dims(), scaling in scaling(), seed in any::<u64>()
    ) {
        let cfg = SystemConfig::selective(tx, rx, taps, k, 1.0).with_scaling(scaling);
        let ch = ChannelRealization::sample(&cfg, &mut stream(seed, 0)).unwrap();
        let mut prev = vec![0.0; tx];
        for step in 0..10 {
            let rho = 10f64.powf(-1.0 + 0.45 * step as f64);
            let b = selective_sinrs(&ch, rho, k, scaling).unwrap().beta;
            for (x, p) in b.iter().zip(&prev) {
                prop_assert!(*x >= 0.0);
                prop_assert!(*x >= *p * (1.0 - 1e-12));
            }
            prev = b;
        }
    }

    #[test]
    fn mmse_capacity_below_log_det(tx in 1usize..=4, extra in 0usize..=2, log_rho in -1.0f64..4.0, seed in any::<u64>()) {
        let h = sample_complex_gaussian(tx + extra, tx, &mut stream(seed, 0)).unwrap();
        let rho = 10f64.powf(log_rho);
        let mmse = capacity(&flat_sinrs(&h, rho).unwrap()).unwrap().bits();
        prop_assert!(mmse <= log2_det(&h, rho) + 1e-9);
    }

    #[test]
    fn single_tap_selective_equals_flat(
        tx in 1usize..=3, extra in 0usize..=2, k in 1usize..=16, scaling in scaling(),
        log_rho in -1.0f64..3.0, seed in any::<u64>()
    ) {
        let h = sample_complex_gaussian(tx + extra, tx, &mut stream(seed, 0)).unwrap();
        let rho = 10f64.powf(log_rho);
        let flat = flat_sinrs(&h, rho).unwrap();
        let ch = ChannelRealization::selective(vec![h]).unwrap();
        let sel = selective_sinrs(&ch, rho, k, scaling).unwrap();
        prop_assert!(relative_gap(&sel.beta, &flat.beta) <= 1e-12);
    }

    #[test]
    fn kernel_reuse_matches_fresh_evaluation(
        (tx, rx, taps, k) in dims(), seed in any::<u64>()
    ) {
        let mut kernel = MmseKernel::new(tx, rx, taps, k, Scaling::PerTap).unwrap();
        let cfg = SystemConfig::selective(tx, rx, taps, k, 1.0);
        let mut rng = stream(seed, 0);
        for _ in 0..3 {
            let ch = ChannelRealization::sample(&cfg, &mut rng).unwrap();
            let data: Vec<Complex64> = ch.taps().iter().flat_map(|h| h.iter().copied()).collect();
            let reused = kernel.sinrs(&data, 20.0).unwrap();
            let fresh = selective_sinrs(&ch, 20.0, k, Scaling::PerTap).unwrap();
            prop_assert_eq!(reused, fresh);
        }
    }
}

#[test]
fn rho_over_m_scaling_equals_per_tap_at_doubled_snr() {
    let cfg = SystemConfig::selective(2, 3, 2, 8, 1.0);
    let ch = ChannelRealization::sample(&cfg, &mut stream(5, 0)).unwrap();
    let a = selective_sinrs(&ch, 10.0, 8, Scaling::Paper).unwrap();
    let b = selective_sinrs(&ch, 20.0, 8, Scaling::PerTap).unwrap();
    assert!(relative_gap(&a.beta, &b.beta) <= 1e-14);
}

#[test]
fn siso_flat_sinr_is_snr_times_gain() {
    let h = ComplexMatrix::from_element(1, 1, Complex64::new(0.6, -0.8));
    let b = flat_sinrs(&h, 7.0).unwrap().beta;
    assert!((b[0] - 7.0).abs() < 1e-12);
}
