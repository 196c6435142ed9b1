use exband::analysis::{
    map_noise_bins, map_noise_time, pd_alrd1, pd_alrd2_clt, pd_opt, pfa_alrd1, pfa_alrd2_clt, pfa_opt,
    posterior_update, PosteriorPrecision,
};
use exband::detectors::{
    glrd1_decide, mu_glrd1, phi_decide, rho_glrd2, t_alrd1, t_alrd2, t_opt, ThresholdSpec,
};
use exband::montecarlo::{wilson_interval, EmpiricalCdf};
use exband::numerics::{q_function, q_inverse, reg_upper_gamma};
use exband::observation::BandGeometry;
use exband::signal::{Hypothesis, NoisePrior, SignalSpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn prior() -> impl Strategy<Value = NoisePrior> {
    (1u32..12, 0.2f64..8.0).prop_map(|(k, t)| NoisePrior::new(k, t).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn upper_gamma_is_a_decreasing_probability(s in 0.2f64..60.0, x in 0.0f64..120.0, dx in 0.0f64..5.0) {
        let a = reg_upper_gamma(s, x).unwrap();
        let b = reg_upper_gamma(s, x + dx).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b <= a + 1e-15);
    }

    #[test]
    fn q_inverse_round_trips(p in 1e-10f64..0.999_999) {
        let z = q_inverse(p).unwrap();
        prop_assert!((q_function(z) - p).abs() <= 1e-9 * p.max(1e-2));
    }

    #[test]
    fn q_function_strictly_decreasing(z in -8.0f64..8.0, dz in 1e-3f64..2.0) {
        prop_assert!(q_function(z + dz) < q_function(z));
    }

    #[test]
    fn closed_forms_are_monotone_and_ordered(
        n in 2usize..60, alpha in 0.1f64..5.0, snr in 0.01f64..10.0, eta in 0.0f64..100.0,
        deta in 0.0f64..10.0, pr in prior(),
    ) {
        let pairs = [
            (pfa_opt(n, alpha, eta).unwrap(), pfa_opt(n, alpha, eta + deta).unwrap()),
            (pd_opt(n, alpha, snr, eta).unwrap(), pd_opt(n, alpha, snr, eta + deta).unwrap()),
            (pfa_alrd1(n, alpha, &pr, eta).unwrap(), pfa_alrd1(n, alpha, &pr, eta + deta).unwrap()),
            (pd_alrd1(n, alpha, &pr, snr, eta).unwrap(), pd_alrd1(n, alpha, &pr, snr, eta + deta).unwrap()),
        ];
        for (a, b) in pairs {
            prop_assert!((0.0..=1.0).contains(&a) && b <= a + 1e-15);
        }
        prop_assert!(pd_opt(n, alpha, snr, eta).unwrap() >= pfa_opt(n, alpha, eta).unwrap());
        prop_assert!(pd_alrd1(n, alpha, &pr, snr, eta).unwrap() >= pfa_alrd1(n, alpha, &pr, eta).unwrap());
    }

    #[test]
    fn clt_forms_are_monotone_and_ordered(
        l in 1usize..40, p in 1usize..12, alpha in 0.1f64..3.0, theta in 0.2f64..8.0,
        eta in 0.0f64..20.0, deta in 0.0f64..5.0, hr in -2.0f64..2.0, si in -8.0f64..8.0,
    ) {
        let n = l + p;
        let h = Complex64::new(hr, 0.3);
        let s = Complex64::new(1.0, si);
        let a = pfa_alrd2_clt(l, p, n, alpha, theta, eta).unwrap();
        let b = pfa_alrd2_clt(l, p, n, alpha, theta, eta + deta).unwrap();
        prop_assert!((0.0..=1.0).contains(&a) && b <= a + 1e-15);
        let pd = pd_alrd2_clt(l, p, n, alpha, theta, eta, h, s).unwrap();
        let pd2 = pd_alrd2_clt(l, p, n, alpha, theta, eta + deta, h, s).unwrap();
        prop_assert!((0.0..=1.0).contains(&pd) && pd2 <= pd + 1e-12);
        prop_assert!(pd >= a - 1e-15);
    }

    #[test]
    fn sequential_posterior_equals_joint(
        pr in prior(), p1 in 1usize..20, p2 in 1usize..20, y1 in 0.0f64..5.0, y2 in 0.0f64..5.0,
    ) {
        let seq = posterior_update(&pr, y1, p1).unwrap().update(y2, p2).unwrap();
        let joint_mean = (p1 as f64 * y1 + p2 as f64 * y2) / (p1 + p2) as f64;
        let joint = posterior_update(&pr, joint_mean, p1 + p2).unwrap();
        prop_assert_eq!(seq.shape(), joint.shape());
        prop_assert!((seq.rate() - joint.rate()).abs() <= 1e-12 * joint.rate());
        prop_assert_eq!(seq.shape(), (p1 + p2) as f64 + pr.k() as f64 + 1.0);
        let base = PosteriorPrecision::from_prior(&pr);
        prop_assert_eq!(base.rate(), pr.theta());
    }

    #[test]
    fn map_estimates_coincide_at_zero_snr(
        pr in prior(), r in 0.0f64..5.0, x in 0.0f64..5.0, y in 0.0f64..5.0,
        n in 1usize..60, l in 1usize..40, p in 1usize..12,
    ) {
        prop_assert_eq!(map_noise_time(r, n, &pr, 0.0, Hypothesis::H0), map_noise_time(r, n, &pr, 0.0, Hypothesis::H1));
        prop_assert_eq!(
            map_noise_bins(x, l, y, p, &pr, 0.0, Hypothesis::H0),
            map_noise_bins(x, l, y, p, &pr, 0.0, Hypothesis::H1)
        );
        prop_assert!(map_noise_time(r, n, &pr, 1.0, Hypothesis::H1) <= map_noise_time(r, n, &pr, 1.0, Hypothesis::H0));
    }

    #[test]
    fn ratio_and_phi_rules_agree(
        pr in prior(), x in prop::collection::vec(0.0f64..200.0, 16), y in prop::collection::vec(0.0f64..200.0, 4),
        eta in 0.01f64..20.0,
    ) {
        prop_assert_eq!(t_alrd2(&x, &y, &pr) > eta, phi_decide(&x, &y, &pr, eta));
    }

    #[test]
    fn one_sided_glr_equals_alr(pr in prior(), r in prop::collection::vec(0.0f64..10.0, 20), eta in 0.0f64..30.0) {
        let v = glrd1_decide(&r, &pr, &ThresholdSpec::one_sided(eta));
        prop_assert_eq!(v.decided_h1, t_alrd1(&r, &pr) > eta);
        prop_assert!((t_alrd1(&r, &pr) - t_opt(&r) / pr.theta()).abs() <= 1e-12 * t_opt(&r).max(1.0));
    }

    #[test]
    fn extrema_positive(n in 1usize..100, p in 0usize..20, k in 1u32..20, snr in 0.0f64..20.0) {
        prop_assert!(mu_glrd1(n, k, snr).unwrap() > 0.0);
        prop_assert!(rho_glrd2(n, p, k, snr).unwrap() > 0.0);
    }

    #[test]
    fn band_split_partitions(n in 4usize..200, beta in 0.05f64..1.0) {
        let spec = SignalSpec::critically_sampled(54e3, beta, 1.0).unwrap();
        if let Ok(g) = BandGeometry::new(n, &spec) {
            let mut all: Vec<usize> = g.inband_indices().iter().chain(g.excess_indices()).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            prop_assert!((g.l_inband() as f64 - n as f64 / (1.0 + beta)).abs() <= 1.0);
        }
    }

    #[test]
    fn empirical_cdf_is_consistent(v in prop::collection::vec(-50.0f64..50.0, 1..300), q in 0.001f64..1.0) {
        let cdf = EmpiricalCdf::from_samples(v).unwrap();
        let s = cdf.samples();
        for w in s.windows(2) {
            prop_assert!(cdf.eval(w[0]) <= cdf.eval(w[1]));
        }
        prop_assert_eq!(cdf.eval(cdf.max()), 1.0);
        let t = cdf.quantile(q);
        prop_assert!(cdf.eval(t) >= q - 1e-12);
    }

    #[test]
    fn wilson_contains_the_estimate(n in 1usize..5000, frac in 0.0f64..=1.0) {
        let s = ((n as f64) * frac).floor() as usize;
        let (lo, hi) = wilson_interval(s, n);
        let p = s as f64 / n as f64;
        prop_assert!(lo <= p && p <= hi);
    }
}
