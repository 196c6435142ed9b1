//! The `roc`, `cdf`, `curves`, `calibrate` and `validate` commands.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use exband::analysis::{
    pd_alrd1, pd_alrd2_clt, pd_opt, pfa_alrd1, pfa_alrd2_clt, pfa_opt, threshold_alrd1, threshold_opt,
};
use exband::detectors::{DetectorKind, ThresholdSpec};
use exband::montecarlo::{calibrate_thresholds, empirical_cdf, roc_sweep_many, run_trials, RocPoint};
use exband::signal::{Hypothesis, NoisePower};
use exband::validation::{self, CheckOutcome};
use num_complex::Complex64;

use crate::config::{Experiment, Scenario, ThresholdMode};
use crate::format::fmt_g;
use crate::manifest::RunManifest;
use crate::svg::{line_chart, Series};
use crate::CliError;

/// Flags shared by every command.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub out: PathBuf,
    pub svg: bool,
}

/// Files written by a command, manifest last.
pub type Written = Vec<PathBuf>;

fn prepare(text: &str, opts: &Options) -> Result<(Experiment, Vec<Scenario>), CliError> {
    let mut exp = Experiment::parse(text)?;
    if let Some(seed) = opts.seed {
        exp.seed = seed;
    }
    if let Some(trials) = opts.trials {
        if trials == 0 {
            return Err(CliError::Config("--trials must be positive".into()));
        }
        exp.trials = trials;
    }
    let scenarios = exp.scenarios()?;
    Ok((exp, scenarios))
}

/// Collects output files and stamps them with the run manifest.
struct Output {
    dir: PathBuf,
    manifest: RunManifest,
    started: Instant,
    files: Written,
}

impl Output {
    fn new(dir: &Path, command: &str, exp: &Experiment) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            manifest: RunManifest::new(command, exp.echo(), exp.seed),
            started: Instant::now(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.files.push(path);
        Ok(())
    }

    fn csv(&mut self, name: &str, header: &str, rows: &str) -> Result<(), CliError> {
        let body = format!("{}\n{header}\n{rows}", self.manifest.header_line());
        self.write(name, &body)
    }

    fn finish(mut self, stem: &str) -> Result<Written, CliError> {
        self.manifest.wall_clock = self.started.elapsed();
        let text = self.manifest.render();
        self.write(&format!("{stem}_manifest.txt"), &text)?;
        Ok(self.files)
    }
}

fn row_prefix(d: DetectorKind, sc: &Scenario) -> String {
    format!("{},{},{},{}", d.id(), sc.n_samples, fmt_g(sc.snr_db), sc.channel.id())
}

fn fixed_alpha(sc: &Scenario) -> Option<f64> {
    match sc.cfg.noise_power {
        NoisePower::Fixed(a) => Some(a),
        NoisePower::Prior => None,
    }
}

/// Noise power the closed forms condition on.
fn conditioning_alpha(sc: &Scenario) -> f64 {
    fixed_alpha(sc).unwrap_or_else(|| sc.cfg.prior.mean_noise_power())
}

/// Threshold from the closed-form false-alarm expression.
fn closed_form_threshold(sc: &Scenario, d: DetectorKind, target: f64) -> Result<f64, CliError> {
    let alpha = fixed_alpha(sc).ok_or_else(|| CliError::Config("closed-form thresholds need a fixed noise power".into()))?;
    let n = sc.n_samples;
    let prior = &sc.cfg.prior;
    Ok(match d {
        DetectorKind::Optimal => threshold_opt(n, 1.0, target)?,
        DetectorKind::Alrd1 | DetectorKind::Glrd1 => threshold_alrd1(n, alpha, prior, target)?,
        DetectorKind::Alrd2 | DetectorKind::Glrd2 => {
            let g = sc.cfg.geometry()?;
            let (l, p) = (g.l_inband(), g.p_excess());
            let pfa = |eta: f64| pfa_alrd2_clt(l, p, n, alpha, prior.theta(), eta);
            let floor = pfa(1e12)?;
            if target <= floor {
                return Err(CliError::Config(format!(
                    "{d}: target {target} is below the approximation's floor {}",
                    fmt_g(floor)
                )));
            }
            let mut hi = 1.0;
            while pfa(hi)? > target {
                hi *= 2.0;
            }
            let mut lo = 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if pfa(mid)? > target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            hi
        }
    })
}

fn closed_form_roc(sc: &Scenario, detectors: &[DetectorKind], grid: &[f64]) -> Result<Vec<(DetectorKind, Vec<RocPoint>)>, CliError> {
    let h0 = sc.cfg.clone().with_hypothesis(Hypothesis::H0);
    let h1 = sc.cfg.clone().with_hypothesis(Hypothesis::H1);
    detectors
        .iter()
        .map(|&d| {
            let points = grid
                .iter()
                .map(|&target| {
                    let eta = closed_form_threshold(sc, d, target)?;
                    let th = ThresholdSpec::one_sided(eta);
                    let pfa = run_trials(&h0, d, &th)?;
                    let pd = run_trials(&h1, d, &th)?;
                    Ok(RocPoint {
                        pfa_target: target,
                        pfa_empirical: pfa.rate,
                        pd_empirical: pd.rate,
                        pd_ci_low: pd.ci_low,
                        pd_ci_high: pd.ci_high,
                        threshold: eta,
                        threshold_upper: f64::INFINITY,
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Ok((d, points))
        })
        .collect()
}

pub fn cmd_roc(text: &str, opts: &Options) -> Result<Written, CliError> {
    let (exp, scenarios) = prepare(text, opts)?;
    let mut out = Output::new(&opts.out, "roc", &exp)?;
    let mut rows = String::new();
    for sc in &scenarios {
        let curves = match exp.threshold_mode {
            ThresholdMode::Empirical => roc_sweep_many(&sc.cfg, &exp.detectors, &exp.pfa_grid)?,
            ThresholdMode::ClosedForm => closed_form_roc(sc, &exp.detectors, &exp.pfa_grid)?,
        };
        for (d, points) in &curves {
            for p in points {
                let _ = writeln!(
                    rows,
                    "{},{},{},{},{},{},{}",
                    row_prefix(*d, sc),
                    fmt_g(p.pfa_target),
                    fmt_g(p.pfa_empirical),
                    fmt_g(p.pd_empirical),
                    fmt_g(p.pd_ci_low),
                    fmt_g(p.pd_ci_high),
                    fmt_g(p.threshold)
                );
            }
        }
        if opts.svg {
            let series: Vec<Series> = curves
                .iter()
                .map(|(d, pts)| Series {
                    label: d.id().to_string(),
                    points: pts.iter().map(|p| (p.pfa_empirical, p.pd_empirical)).collect(),
                })
                .collect();
            let title = format!("ROC, {}, N = {}, SNR {} dB", sc.channel.id(), sc.n_samples, fmt_g(sc.snr_db));
            let svg = line_chart(&title, "false-alarm probability", "detection probability", &series, (0.0, 1.0), (0.0, 1.0));
            out.write(&format!("{}_roc_{}.svg", exp.name, sc.tag()), &svg)?;
        }
    }
    out.csv(
        &format!("{}_roc.csv", exp.name),
        "detector,n_samples,snr_db,channel,pfa_target,pfa_emp,pd_emp,pd_ci_low,pd_ci_high,threshold",
        &rows,
    )?;
    out.finish(&format!("{}_roc", exp.name))
}

/// Sample indices at which the empirical CDF is reported: the first and last
/// sample plus evenly spaced ones in between.
fn cdf_indices(len: usize, points: usize) -> Vec<usize> {
    if len <= points {
        return (0..len).collect();
    }
    let mut idx: Vec<usize> = (0..points).map(|j| (j * (len - 1) + (points - 1) / 2) / (points - 1)).collect();
    idx.dedup();
    idx
}

pub fn cmd_cdf(text: &str, opts: &Options) -> Result<Written, CliError> {
    let (exp, scenarios) = prepare(text, opts)?;
    let mut out = Output::new(&opts.out, "cdf", &exp)?;
    for sc in &scenarios {
        let mut rows = String::new();
        let mut series = Vec::new();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &d in &exp.detectors {
            let cdf = empirical_cdf(&sc.cfg, d)?;
            let samples = cdf.samples();
            let mut pts = Vec::new();
            for i in cdf_indices(samples.len(), exp.cdf_points) {
                let (v, c) = (samples[i], cdf.eval(samples[i]));
                let _ = writeln!(rows, "{},{},{}", d.id(), fmt_g(v), fmt_g(c));
                pts.push((v, c));
            }
            lo = lo.min(cdf.min());
            hi = hi.max(cdf.max());
            series.push(Series { label: d.id().to_string(), points: pts });
        }
        out.csv(&format!("{}_cdf_{}.csv", exp.name, sc.tag()), "detector,statistic_value,cdf", &rows)?;
        if opts.svg {
            let title = format!("False-alarm CDF, N = {}", sc.n_samples);
            let svg = line_chart(&title, "statistic", "CDF", &series, (lo.min(0.0), hi), (0.0, 1.0));
            out.write(&format!("{}_cdf_{}.svg", exp.name, sc.tag()), &svg)?;
        }
    }
    out.finish(&format!("{}_cdf", exp.name))
}

/// Closed-form `(pfa, pd)` at threshold `t`, and the threshold range worth
/// plotting.
struct CurveModel<'a> {
    sc: &'a Scenario,
    detector: DetectorKind,
    alpha: f64,
    l: usize,
    p: usize,
}

impl CurveModel<'_> {
    fn eval(&self, t: f64) -> Result<(f64, f64), CliError> {
        let (n, snr, prior) = (self.sc.n_samples, self.sc.cfg.snr(), &self.sc.cfg.prior);
        Ok(match self.detector {
            DetectorKind::Optimal => (pfa_opt(n, 1.0, t)?, pd_opt(n, 1.0, snr, t)?),
            DetectorKind::Alrd1 | DetectorKind::Glrd1 => {
                (pfa_alrd1(n, self.alpha, prior, t)?, pd_alrd1(n, self.alpha, prior, snr, t)?)
            }
            DetectorKind::Alrd2 | DetectorKind::Glrd2 => {
                let one = Complex64::new(1.0, 0.0);
                let s = Complex64::new((n as f64 * self.alpha * snr).sqrt(), 0.0);
                (
                    pfa_alrd2_clt(self.l, self.p, n, self.alpha, prior.theta(), t)?,
                    pd_alrd2_clt(self.l, self.p, n, self.alpha, prior.theta(), t, one, s)?,
                )
            }
        })
    }

    fn max_threshold(&self) -> Result<f64, CliError> {
        let (n, snr, prior) = (self.sc.n_samples, self.sc.cfg.snr(), &self.sc.cfg.prior);
        Ok(match self.detector {
            DetectorKind::Optimal => threshold_opt(n, 1.0 + snr, 1e-4)?,
            DetectorKind::Alrd1 | DetectorKind::Glrd1 => threshold_alrd1(n, self.alpha * (1.0 + snr), prior, 1e-4)?,
            DetectorKind::Alrd2 | DetectorKind::Glrd2 => {
                let na = n as f64 * self.alpha;
                3.0 * self.l as f64 * na * (1.0 + snr) / (prior.theta() + self.p as f64 * na)
            }
        })
    }
}

pub fn cmd_curves(text: &str, opts: &Options) -> Result<Written, CliError> {
    let (exp, scenarios) = prepare(text, opts)?;
    let mut out = Output::new(&opts.out, "curves", &exp)?;
    for sc in &scenarios {
        let g = sc.cfg.geometry()?;
        let mut rows = String::new();
        for &d in &exp.detectors {
            let model = CurveModel { sc, detector: d, alpha: conditioning_alpha(sc), l: g.l_inband(), p: g.p_excess() };
            let top = model.max_threshold()?;
            for i in 0..exp.curve_points {
                let t = top * i as f64 / (exp.curve_points - 1) as f64;
                let (pfa, pd) = model.eval(t)?;
                let _ = writeln!(rows, "{},{},{},{}", d.id(), fmt_g(t), fmt_g(pfa), fmt_g(pd));
            }
        }
        out.csv(&format!("{}_curves_{}.csv", exp.name, sc.tag()), "detector,threshold,pfa_cf,pd_cf", &rows)?;
    }
    out.finish(&format!("{}_curves", exp.name))
}

pub fn cmd_calibrate(text: &str, pfa: f64, opts: &Options) -> Result<(Written, String), CliError> {
    let (exp, scenarios) = prepare(text, opts)?;
    let mut out = Output::new(&opts.out, &format!("calibrate pfa={}", fmt_g(pfa)), &exp)?;
    let mut rows = String::new();
    for sc in &scenarios {
        for &d in &exp.detectors {
            let th = match exp.threshold_mode {
                ThresholdMode::Empirical => calibrate_thresholds(&sc.cfg, d, pfa)?,
                ThresholdMode::ClosedForm => {
                    if !(pfa > 0.0 && pfa < 1.0) {
                        return Err(CliError::Config(format!("--pfa must lie in (0, 1), got {pfa}")));
                    }
                    ThresholdSpec::one_sided(closed_form_threshold(sc, d, pfa)?)
                }
            };
            let _ = writeln!(rows, "{},{},{},{}", row_prefix(d, sc), fmt_g(pfa), fmt_g(th.eta1), fmt_g(th.eta2));
        }
    }
    let header = "detector,n_samples,snr_db,channel,pfa_target,threshold,threshold_upper";
    out.csv(&format!("{}_calibrate.csv", exp.name), header, &rows)?;
    let files = out.finish(&format!("{}_calibrate", exp.name))?;
    Ok((files, format!("{header}\n{rows}")))
}

/// Runs the oracle suite, or the listed checks only (1 to 9; 10 needs the
/// full suite).
pub fn cmd_validate(seed: u64, checks: &[u8]) -> Result<Vec<CheckOutcome>, CliError> {
    let outcomes = if checks.is_empty() || checks.contains(&10) {
        let all = validation::run_all(seed);
        if checks.is_empty() {
            all
        } else {
            all.into_iter().filter(|c| checks.contains(&c.id)).collect()
        }
    } else {
        let mut v = Vec::new();
        for &id in checks {
            v.push(match id {
                1 => validation::check_optimal_closed_form(seed),
                2 => validation::check_conjugacy(seed),
                3 => validation::check_map(seed),
                4 => validation::check_glr_unimodal(seed),
                5 => validation::check_markov(seed),
                6 => validation::check_clt(seed),
                7 => validation::check_moments(seed),
                8 => validation::check_ordering(seed),
                9 => validation::check_fading(seed),
                other => return Err(CliError::Config(format!("no check with id {other}"))),
            });
        }
        v
    };
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::cdf_indices;

    #[test]
    fn cdf_indices_cover_both_ends() {
        let idx = cdf_indices(10_000, 200);
        assert_eq!((idx[0], *idx.last().unwrap(), idx.len()), (0, 9_999, 200));
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(cdf_indices(50, 200).len(), 50);
    }
}
