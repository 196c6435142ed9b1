mod common;

use common::*;
use exband::montecarlo::{map_trials, Phase};
use exband::numerics::{complex_gaussian, reg_upper_gamma_inv, Channel, RngStream};
use exband::observation::{spectrum_bins, split_bands, BandGeometry};
use exband::signal::{
    draw_noise_power, generate_bins, generate_time_block, Hypothesis, NoisePower, NoisePrior, ObservationModel,
    ScenarioConfig, SignalSpec,
};
use num_complex::Complex64;

fn spec(snr: f64) -> SignalSpec {
    SignalSpec::critically_sampled(54e3, 0.25, snr).unwrap()
}

fn cfg(hyp: Hypothesis, obs: ObservationModel, trials: usize) -> ScenarioConfig {
    ScenarioConfig::new(20, NoisePrior::new(4, 4.0).unwrap(), spec(1.0), Channel::Awgn)
        .with_hypothesis(hyp)
        .with_observation(obs)
        .with_noise_power(NoisePower::Fixed(1.0))
        .with_trials(trials)
}

#[test]
fn noise_power_prior_mean_and_support() {
    let prior = NoisePrior::new(4, 4.0).unwrap();
    let mut rng = RngStream::new(2, 0);
    let v: Vec<f64> = (0..1_000_000).map(|_| draw_noise_power(&prior, &mut rng)).collect();
    assert!(v.iter().all(|&a| a > 0.0));
    assert!((mean(&v) - 1.0).abs() <= 3.0 * std_error(&v));
}

#[test]
fn precision_median_matches_root_finding() {
    let prior = NoisePrior::new(1, 1.0).unwrap();
    let mut rng = RngStream::new(8, 0);
    let mut lambdas: Vec<f64> = (0..200_001).map(|_| 1.0 / draw_noise_power(&prior, &mut rng)).collect();
    lambdas.sort_by(f64::total_cmp);
    let median = lambdas[100_000];
    let oracle = reg_upper_gamma_inv(2.0, 0.5).unwrap();
    // Binomial band on the sample median, about 3 SE.
    assert!((median - oracle).abs() < 0.01, "median={median} oracle={oracle}");
}

#[test]
fn time_block_powers() {
    for (hyp, want) in [(Hypothesis::H0, 1.0), (Hypothesis::H1, 2.0)] {
        let c = cfg(hyp, ObservationModel::Waveform, 1);
        let mut rng = RngStream::new(3, 0);
        let p: Vec<f64> = (0..50_000)
            .flat_map(|_| generate_time_block(&c, 1.0, Complex64::new(1.0, 0.0), &mut rng))
            .map(|z| z.norm_sqr())
            .collect();
        assert!((mean(&p) - want).abs() <= 3.0 * std_error(&p), "{hyp:?}");
    }
}

#[test]
fn averaged_periodogram_follows_raised_cosine() {
    let c = cfg(Hypothesis::H1, ObservationModel::Waveform, 1);
    let geometry = c.geometry().unwrap();
    let mut rng = RngStream::new(12, 0);
    let mut avg = vec![0.0; 20];
    let blocks = 10_000;
    for _ in 0..blocks {
        let z = generate_time_block(&c, 1.0, Complex64::new(1.0, 0.0), &mut rng);
        for (a, w) in avg.iter_mut().zip(spectrum_bins(&z)) {
            *a += w / blocks as f64;
        }
    }
    // Independent raised-cosine profile on the symmetric bin grid, unit mean.
    let (b, beta, fs) = (54e3, 0.25, 67.5e3);
    let rc = |f: f64| {
        let f = f.abs();
        let (lo, hi) = ((1.0 - beta) * b / 2.0, (1.0 + beta) * b / 2.0);
        if f <= lo {
            1.0
        } else if f <= hi {
            0.5 * (1.0 + (std::f64::consts::PI / (beta * b) * (f - lo)).cos())
        } else {
            0.0
        }
    };
    let profile: Vec<f64> = (0..20).map(|j| rc((((j + 10) % 20) as f64 - 9.5) * fs / 20.0)).collect();
    let scale = 20.0 / profile.iter().sum::<f64>();
    let expected: Vec<f64> = profile.iter().map(|p| 20.0 * (1.0 + p * scale)).collect();
    let (ax, ay) = geometry.split(&avg);
    let (ex, ey) = geometry.split(&expected);
    let ratio = mean(&ay) / mean(&ax);
    let oracle = mean(&ey) / mean(&ex);
    assert!((ratio / oracle - 1.0).abs() < 0.05, "ratio={ratio} oracle={oracle}");
}

#[test]
fn bin_means_under_both_hypotheses() {
    for (hyp, want_x) in [(Hypothesis::H0, 20.0), (Hypothesis::H1, 40.0)] {
        let c = cfg(hyp, ObservationModel::Ideal, 1);
        let mut rng = RngStream::new(6, 0);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for _ in 0..62_500 {
            let (x, y) = generate_bins(&c, 1.0, Complex64::new(1.0, 0.0), None, &mut rng).unwrap();
            xs.extend(x);
            ys.extend(y);
        }
        assert!((mean(&xs) - want_x).abs() <= 3.0 * std_error(&xs), "{hyp:?}");
        assert!((mean(&ys) - 20.0).abs() <= 3.0 * std_error(&ys), "{hyp:?}");
    }
}

#[test]
fn bin_means_scale_with_noise_power() {
    let c = cfg(Hypothesis::H1, ObservationModel::Ideal, 1);
    let mut rng = RngStream::new(6, 1);
    let mut xs = Vec::new();
    for _ in 0..50_000 {
        xs.extend(generate_bins(&c, 2.5, Complex64::new(1.0, 0.0), None, &mut rng).unwrap().0);
    }
    assert!((mean(&xs) - 2.5 * 40.0).abs() <= 3.0 * std_error(&xs));
}

#[test]
fn excess_bins_uncorrelated_with_in_band_bins() {
    let c = cfg(Hypothesis::H1, ObservationModel::Ideal, 1_000_000);
    let pairs = map_trials(&c, Phase::Detection, |t| (t.x[0], t.y[0])).unwrap();
    let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let b: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let (ma, mb) = (mean(&a), mean(&b));
    let cov = pairs.iter().map(|p| (p.0 - ma) * (p.1 - mb)).sum::<f64>() / pairs.len() as f64;
    let corr = cov / (variance(&a) * variance(&b)).sqrt();
    assert!(corr.abs() < 0.01, "corr={corr}");
}

#[test]
fn h0_bins_ignore_the_channel() {
    let base = cfg(Hypothesis::H0, ObservationModel::Ideal, 20_000);
    let awgn = map_trials(&base, Phase::Calibration, |t| t.x.clone()).unwrap();
    let mut ray = base.clone();
    ray.channel = Channel::Rayleigh;
    let rayleigh = map_trials(&ray, Phase::Calibration, |t| t.x.clone()).unwrap();
    assert_eq!(awgn, rayleigh);
}

#[test]
fn h0_in_band_and_excess_bins_share_a_distribution() {
    let c = cfg(Hypothesis::H0, ObservationModel::Waveform, 25_000);
    let pairs = map_trials(&c, Phase::Calibration, |t| (t.x.clone(), t.y.clone())).unwrap();
    let xs: Vec<f64> = pairs.iter().flat_map(|p| p.0.iter().copied()).take(100_000).collect();
    let ys: Vec<f64> = pairs.iter().flat_map(|p| p.1.iter().copied()).take(100_000).collect();
    assert!(ks_two_sample(&xs, &ys) < ks_critical_two(xs.len(), ys.len()));
    // White noise gives exponential bins with mean N α.
    let ks = ks_statistic(&xs, |w| 1.0 - (-w / 20.0).exp());
    assert!(ks < ks_critical(xs.len()), "ks={ks}");
}

#[test]
fn parseval_on_random_blocks() {
    let mut rng = RngStream::new(1, 1);
    for n in [5usize, 20, 33, 40, 64] {
        let z: Vec<Complex64> = (0..n).map(|_| complex_gaussian(1.7, &mut rng)).collect();
        let w = spectrum_bins(&z);
        let energy: f64 = z.iter().map(|c| c.norm_sqr()).sum();
        assert!((w.iter().sum::<f64>() / (n as f64 * energy) - 1.0).abs() < 1e-9);
    }
}

#[test]
fn split_partitions_every_bin() {
    for n in [8usize, 20, 27, 40, 63] {
        let w: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let (x, y, g) = split_bands(&w, &spec(1.0)).unwrap();
        let mut all: Vec<f64> = x.into_iter().chain(y).collect();
        all.sort_by(f64::total_cmp);
        assert_eq!(all, w, "n={n}");
        assert_eq!(g.l_inband() + g.p_excess(), n);
    }
}

#[test]
fn observation_paths_agree() {
    // H0: the waveform path and the direct bin draw share bin means.
    for (hyp, check_y) in [(Hypothesis::H0, true), (Hypothesis::H1, false)] {
        let means = |obs| {
            let v = map_trials(&cfg(hyp, obs, 10_000), Phase::for_hypothesis(hyp), |t| (mean(&t.x), mean(&t.y)))
                .unwrap();
            (mean(&v.iter().map(|p| p.0).collect::<Vec<_>>()), mean(&v.iter().map(|p| p.1).collect::<Vec<_>>()))
        };
        let (ix, iy) = means(ObservationModel::Ideal);
        let (wx, wy) = means(ObservationModel::Waveform);
        if check_y {
            assert!((ix / wx - 1.0).abs() < 0.02 && (iy / wy - 1.0).abs() < 0.02, "{ix} {wx} {iy} {wy}");
        } else {
            // A shaped waveform puts its roll-off into the excess bins, so its
            // band means follow the mean pulse weight of each band.
            let g = BandGeometry::new(20, &spec(1.0)).unwrap();
            let (win, wex) = g.split(&spec(1.0).bin_weights(20));
            assert!((wx / (20.0 * (1.0 + mean(&win))) - 1.0).abs() < 0.02);
            assert!((wy / (20.0 * (1.0 + mean(&wex))) - 1.0).abs() < 0.02);
            assert!((ix / 40.0 - 1.0).abs() < 0.02 && (iy / 20.0 - 1.0).abs() < 0.02);
        }
    }
}
