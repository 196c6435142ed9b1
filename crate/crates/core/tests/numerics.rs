mod common;

use std::f64::consts::PI;

use common::*;
use exband::numerics::{
    channel_gain, complex_gaussian, gamma_sample, ln_gamma, q_function, q_inverse, reg_upper_gamma,
    reg_upper_gamma_inv, Channel, RngStream,
};

/// Adaptive Simpson quadrature, used as an independent oracle.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (f(a) + 4.0 * fm + f(b)), fm)
    }
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (left, _) = simpson(f, a, m);
        let (right, _) = simpson(f, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, left, 0.5 * tol, depth - 1) + rec(f, m, b, right, 0.5 * tol, depth - 1)
    }
    let (whole, _) = simpson(f, a, b);
    rec(f, a, b, whole, tol, 50)
}

#[test]
fn upper_gamma_matches_quadrature_oracle() {
    for &(s, x) in &[(20.0, 20.0), (3.5, 1.2), (7.0, 12.0), (40.0, 31.0)] {
        let norm = ln_gamma(s);
        let f = move |t: f64| ((s - 1.0) * t.ln() - t - norm).exp();
        let oracle = adaptive_simpson(&f, x, x + 400.0, 1e-14);
        let got = reg_upper_gamma(s, x).unwrap();
        assert!((got - oracle).abs() <= 1e-10 * oracle, "s={s} x={x} got={got} oracle={oracle}");
    }
}

#[test]
fn upper_gamma_frozen_reference() {
    // 40-digit reference, rounded.
    let v = reg_upper_gamma(20.0, 20.0).unwrap();
    assert!((v - 0.470_257_266_839_239_99).abs() < 1e-13);
}

#[test]
fn upper_gamma_limits() {
    for &s in &[0.5, 1.0, 4.0, 20.0, 80.0] {
        assert_eq!(reg_upper_gamma(s, 0.0).unwrap(), 1.0);
        assert!(reg_upper_gamma(s, 10.0 * s + 200.0).unwrap() < 1e-30);
    }
}

#[test]
fn q_function_against_series_oracle() {
    // Q(z) = 1/2 - φ-series for the central part.
    let series = |z: f64| {
        let mut term = z;
        let mut sum = z;
        for n in 1..200 {
            term *= -z * z / (2.0 * n as f64);
            sum += term / (2 * n + 1) as f64;
        }
        0.5 - sum / (2.0 * PI).sqrt()
    };
    for &z in &[0.3, 1.0, 1.6449, 2.5] {
        assert!((q_function(z) - series(z)).abs() < 1e-12, "z={z}");
    }
    assert!((q_function(1.6449) - 0.049_995_217_468_346_30).abs() < 1e-6);
    assert!((q_function(10.0) - 7.619_853_024_160_5e-24).abs() < 1e-30);
}

#[test]
fn q_inverse_against_bisection_oracle() {
    let bisect = |p: f64| {
        let (mut lo, mut hi) = (-40.0, 40.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if q_function(mid) > p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    for &p in &[1e-12, 1e-6, 0.001, 0.05, 0.3, 0.5, 0.77, 0.999] {
        let z = q_inverse(p).unwrap();
        assert!((z - bisect(p)).abs() < 1e-9 * z.abs().max(1.0), "p={p}");
        assert!((q_function(z) - p).abs() <= 1e-9 * p.max(1e-3), "p={p}");
    }
    assert!((q_inverse(0.05).unwrap() - 1.644_853_626_951_472_7).abs() < 1e-12);
}

#[test]
fn gamma_sampler_moments_and_shape() {
    let mut rng = RngStream::new(11, 1);
    let v: Vec<f64> = (0..1_000_000).map(|_| gamma_sample(3.0, 2.0, &mut rng).unwrap()).collect();
    assert!((mean(&v) - 1.5).abs() <= 3.0 * std_error(&v));
    assert!((variance(&v) - 0.75).abs() <= 3.0 * variance_std_error(&v));
    let sub = &v[..100_000];
    let ks = ks_statistic(sub, |t| 1.0 - reg_upper_gamma(3.0, 2.0 * t).unwrap());
    assert!(ks < ks_critical(sub.len()), "ks={ks}");
}

#[test]
fn integer_shape_is_a_sum_of_exponentials() {
    let mut a = RngStream::new(5, 2);
    let mut b = RngStream::new(5, 3);
    let direct: Vec<f64> = (0..50_000).map(|_| gamma_sample(3.0, 1.0, &mut a).unwrap()).collect();
    let summed: Vec<f64> =
        (0..50_000).map(|_| (0..3).map(|_| gamma_sample(1.0, 1.0, &mut b).unwrap()).sum()).collect();
    assert!(ks_two_sample(&direct, &summed) < ks_critical_two(50_000, 50_000));
}

#[test]
fn complex_gaussian_power_and_phase() {
    let mut rng = RngStream::new(9, 0);
    let draws: Vec<_> = (0..1_000_000).map(|_| complex_gaussian(2.0, &mut rng)).collect();
    let power: Vec<f64> = draws.iter().map(|c| c.norm_sqr()).collect();
    assert!((mean(&power) - 2.0).abs() <= 3.0 * std_error(&power));
    let mut counts = [0usize; 16];
    for c in &draws {
        let bin = (((c.arg() + PI) / (2.0 * PI)) * 16.0).floor() as usize;
        counts[bin.min(15)] += 1;
    }
    let expected = draws.len() as f64 / 16.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // Chi-square 0.99 quantile with 15 degrees of freedom.
    assert!(chi2 < 30.578, "chi2={chi2}");
}

#[test]
fn channel_normalization_and_nakagami_one() {
    let mut rng = RngStream::new(4, 0);
    let ray: Vec<f64> = (0..1_000_000).map(|_| channel_gain(&Channel::Rayleigh, &mut rng).unwrap().norm_sqr()).collect();
    assert!((mean(&ray) - 1.0).abs() <= 3.0 * std_error(&ray));
    let mut rng = RngStream::new(4, 1);
    let amp: Vec<f64> =
        (0..100_000).map(|_| channel_gain(&Channel::Nakagami { m: 1.0 }, &mut rng).unwrap().norm()).collect();
    // Rayleigh amplitude with E|h|^2 = 1: F(a) = 1 - exp(-a^2).
    let ks = ks_statistic(&amp, |a| 1.0 - (-a * a).exp());
    assert!(ks < ks_critical(amp.len()), "ks={ks}");
}

#[test]
fn gamma_median_by_root_finding() {
    // Gamma(2, 1) median.
    let m = reg_upper_gamma_inv(2.0, 0.5).unwrap();
    assert!((m - 1.678_346_990_016_660_7).abs() < 1e-10);
}
