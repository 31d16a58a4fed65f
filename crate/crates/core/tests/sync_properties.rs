use std::f64::consts::PI;

use ncofdm_sync::ofdm::TimeSignal;
use ncofdm_sync::sync::{g_nirs, metric_trace, synchronize, Correlator, Detector, Metrics, TimingRule};
use ncofdm_sync::Complex64;
use proptest::prelude::*;

const N: usize = 64;

fn direct_g_m_q(w: &[Complex64]) -> (Complex64, f64, Complex64) {
    let n = w.len();
    let g = (0..n / 2).map(|m| w[m].conj() * w[m + n / 2]).sum();
    let m = (0..n / 2).map(|m| w[m + n / 2].norm_sqr()).sum();
    let p = |k: usize| w[k].conj() * w[k + n / 4];
    let q = (0..n / 4).map(|m| p(m) + p(m + n / 4) * 2.0 + p(m + n / 2)).sum::<Complex64>() * 0.5;
    (g, m, q)
}

fn samples() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), N..3 * N)
        .prop_map(|v| v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())
}

proptest! {
    #[test]
    fn streaming_sums_match_direct(r in samples()) {
        let (trace, _) = metric_trace(&TimeSignal::new(r.clone(), 0), N, Metrics::Both).unwrap();
        prop_assert_eq!(trace.len(), r.len() - N + 1);
        for (i, rec) in trace.records.iter().enumerate() {
            let (g, m, q) = direct_g_m_q(&r[i..i + N]);
            prop_assert!((rec.g - g).norm() < 1e-9);
            prop_assert!((rec.m - m).abs() < 1e-9);
            prop_assert!((rec.q.unwrap() - q).norm() < 1e-9);
        }
    }

    #[test]
    fn metrics_are_scale_invariant(r in samples(), scale in 0.01..100.0f64, rot in 0.0..2.0 * PI) {
        let factor = Complex64::from_polar(scale, rot);
        let scaled: Vec<_> = r.iter().map(|s| s * factor).collect();
        let (a, _) = metric_trace(&TimeSignal::new(r, 0), N, Metrics::Both).unwrap();
        let (b, _) = metric_trace(&TimeSignal::new(scaled, 0), N, Metrics::Both).unwrap();
        for (x, y) in a.records.iter().zip(&b.records) {
            prop_assert!((x.metric_sc.unwrap() - y.metric_sc.unwrap()).abs() < 1e-6);
            prop_assert!((x.metric_nirs.unwrap() - y.metric_nirs.unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn sc_metric_is_bounded(r in samples()) {
        // |G|² <= Σ|r(n+m)|² · M by Cauchy-Schwarz
        let (trace, _) = metric_trace(&TimeSignal::new(r.clone(), 0), N, Metrics::Sc).unwrap();
        for (i, rec) in trace.records.iter().enumerate() {
            let first: f64 = r[i..i + N / 2].iter().map(|s| s.norm_sqr()).sum();
            prop_assert!(rec.g.norm_sqr() <= first * rec.m * (1.0 + 1e-12) + 1e-12);
        }
    }

    #[test]
    fn tones_cancel(a in 0.01..10.0f64, f in -32.0..32.0f64, phi in 0.0..2.0 * PI) {
        let tone: Vec<_> = (0..2 * N)
            .map(|n| Complex64::from_polar(a, 2.0 * PI * f * n as f64 / N as f64 + phi))
            .collect();
        let (trace, _) = metric_trace(&TimeSignal::new(tone, 0), N, Metrics::Nirs).unwrap();
        for rec in &trace.records {
            prop_assert!(g_nirs(rec.g, rec.q.unwrap()).norm() < 1e-9 * a * a * (N / 2) as f64);
        }
    }

    #[test]
    fn op_counts_are_exact(r in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), N + 100..N + 300)) {
        let r: Vec<_> = r.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        let pushed = (r.len() - N) as u64;
        let signal = TimeSignal::new(r, 0);
        let sc = synchronize(&signal, N, Detector::SchmidlCox, TimingRule::Argmax).unwrap().ops;
        prop_assert_eq!((sc.real_add_sub, sc.real_mul_div, sc.sqrt_ops), (10 * pushed, 10 * pushed, 0));
        let nirs = synchronize(&signal, N, Detector::Nirs, TimingRule::Argmax).unwrap().ops;
        prop_assert_eq!((nirs.real_add_sub, nirs.real_mul_div, nirs.sqrt_ops), (24 * pushed, 24 * pushed, pushed));
    }
}

#[test]
fn correlator_rejects_bad_sizes() {
    assert!(Correlator::new(62, false, &[Complex64::default(); 62]).is_err());
    assert!(Correlator::new(N, false, &[Complex64::default(); 10]).is_err());
}
