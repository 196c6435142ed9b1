//! Flat `key = value` experiment files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use exband::detectors::DetectorKind;
use exband::numerics::Channel;
use exband::signal::{NoisePower, NoisePrior, ObservationModel, PulseShape, ScenarioConfig, SignalSpec};

use crate::format::fmt_g;
use crate::CliError;

const KEYS: &[&str] = &[
    "name",
    "n_samples",
    "snr_db",
    "channel",
    "nakagami_m",
    "prior_k",
    "prior_theta",
    "bandwidth_hz",
    "rolloff",
    "sample_rate_hz",
    "pulse",
    "observation",
    "detectors",
    "pfa_grid",
    "trials",
    "seed",
    "glr_two_sided",
    "noise_power",
    "threshold_mode",
    "cdf_points",
    "curve_points",
];

pub const DEFAULT_PFA_GRID: &[f64] = &[0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    Empirical,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Awgn,
    Rayleigh,
    Nakagami,
}

impl ChannelKind {
    pub fn id(self) -> &'static str {
        match self {
            ChannelKind::Awgn => "awgn",
            ChannelKind::Rayleigh => "rayleigh",
            ChannelKind::Nakagami => "nakagami",
        }
    }
}

/// A parsed experiment file.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub name: String,
    pub n_samples: Vec<usize>,
    pub snr_db: Vec<f64>,
    pub channels: Vec<ChannelKind>,
    pub nakagami_m: Option<f64>,
    pub prior: NoisePrior,
    pub bandwidth_hz: f64,
    pub rolloff: f64,
    pub sample_rate_hz: f64,
    pub pulse: PulseShape,
    pub observation: ObservationModel,
    pub detectors: Vec<DetectorKind>,
    pub pfa_grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub glr_two_sided: bool,
    pub noise_power: NoisePower,
    pub threshold_mode: ThresholdMode,
    pub cdf_points: usize,
    pub curve_points: usize,
}

/// One point of the (channel, N, SNR) product.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub channel: ChannelKind,
    pub n_samples: usize,
    pub snr_db: f64,
    pub cfg: ScenarioConfig,
}

impl Scenario {
    /// File-name fragment such as `n20_snr0_awgn`.
    pub fn tag(&self) -> String {
        let snr = fmt_g(self.snr_db).replace('-', "m").replace('.', "p");
        format!("n{}_snr{}_{}", self.n_samples, snr, self.channel.id())
    }
}

fn err<T>(line: usize, msg: impl std::fmt::Display) -> Result<T, CliError> {
    Err(CliError::Config(format!("line {line}: {msg}")))
}

fn list(v: &str) -> Vec<&str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, CliError> {
    v.parse().or_else(|_| err(line, format!("`{key}` expects a number, got `{v}`")))
}

fn finite(line: usize, key: &str, v: &str) -> Result<f64, CliError> {
    let x: f64 = num(line, key, v)?;
    if !x.is_finite() {
        return err(line, format!("`{key}` must be finite"));
    }
    Ok(x)
}

fn positive(line: usize, key: &str, v: &str) -> Result<f64, CliError> {
    let x = finite(line, key, v)?;
    if x <= 0.0 {
        return err(line, format!("`{key}` must be positive, got {x}"));
    }
    Ok(x)
}

fn non_empty<T>(line: usize, key: &str, v: Vec<T>) -> Result<Vec<T>, CliError> {
    if v.is_empty() {
        return err(line, format!("`{key}` needs at least one value"));
    }
    Ok(v)
}

impl Experiment {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut raw: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return err(line_no, format!("expected `key = value`, got `{body}`"));
            };
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return err(line_no, format!("unknown key `{k}`"));
            }
            if raw.insert(k, (line_no, v)).is_some() {
                return err(line_no, format!("duplicate key `{k}`"));
            }
        }
        let get = |k: &str| raw.get(k).copied();
        let need = |k: &str| get(k).ok_or_else(|| CliError::Config(format!("missing mandatory key `{k}`")));

        let name = get("name").map_or("experiment".to_string(), |(_, v)| v.to_string());
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(CliError::Config(format!("`name` must be a plain file stem, got `{name}`")));
        }

        let (l, v) = need("n_samples")?;
        let n_samples = non_empty(l, "n_samples", list(v).iter().map(|s| num(l, "n_samples", s)).collect::<Result<Vec<usize>, _>>()?)?;
        if n_samples.contains(&0) {
            return err(l, "`n_samples` must be positive");
        }

        let (l, v) = need("snr_db")?;
        let snr_db = non_empty(l, "snr_db", list(v).iter().map(|s| finite(l, "snr_db", s)).collect::<Result<Vec<_>, _>>()?)?;

        let channels = match get("channel") {
            None => vec![ChannelKind::Awgn],
            Some((l, v)) => non_empty(
                l,
                "channel",
                list(v)
                    .iter()
                    .map(|s| match *s {
                        "awgn" => Ok(ChannelKind::Awgn),
                        "rayleigh" => Ok(ChannelKind::Rayleigh),
                        "nakagami" => Ok(ChannelKind::Nakagami),
                        other => err(l, format!("unknown channel `{other}`")),
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            )?,
        };
        let nakagami_m = get("nakagami_m").map(|(l, v)| positive(l, "nakagami_m", v)).transpose()?;
        if channels.contains(&ChannelKind::Nakagami) {
            match nakagami_m {
                None => return Err(CliError::Config("the nakagami channel needs `nakagami_m`".into())),
                Some(m) if m < 0.5 => return Err(CliError::Config(format!("`nakagami_m` must be at least 0.5, got {m}"))),
                _ => {}
            }
        }

        let (l, v) = need("prior_k")?;
        let k: u32 = num(l, "prior_k", v)?;
        let (l2, v) = need("prior_theta")?;
        let theta = positive(l2, "prior_theta", v)?;
        let prior = NoisePrior::new(k, theta).or_else(|e| err(l, e))?;

        let bandwidth_hz = get("bandwidth_hz").map_or(Ok(54e3), |(l, v)| positive(l, "bandwidth_hz", v))?;
        let rolloff = get("rolloff").map_or(Ok(0.25), |(l, v)| finite(l, "rolloff", v))?;
        let sample_rate_hz = get("sample_rate_hz")
            .map_or(Ok(bandwidth_hz * (1.0 + rolloff)), |(l, v)| positive(l, "sample_rate_hz", v))?;

        let pulse = match get("pulse") {
            None | Some((_, "raised_cosine")) => PulseShape::RaisedCosine,
            Some((_, "flat")) => PulseShape::Flat,
            Some((l, v)) => return err(l, format!("unknown pulse `{v}`")),
        };
        let observation = match get("observation") {
            None | Some((_, "ideal")) => ObservationModel::Ideal,
            Some((_, "waveform")) => ObservationModel::Waveform,
            Some((l, v)) => return err(l, format!("unknown observation model `{v}`")),
        };

        let (l, v) = need("detectors")?;
        let detectors = list(v)
            .iter()
            .map(|s| s.parse::<DetectorKind>().or_else(|e| err(l, e)))
            .collect::<Result<Vec<_>, _>>()?;
        let detectors = non_empty(l, "detectors", detectors)?;

        let pfa_grid = match get("pfa_grid") {
            None => DEFAULT_PFA_GRID.to_vec(),
            Some((l, v)) => {
                let g = non_empty(l, "pfa_grid", list(v).iter().map(|s| finite(l, "pfa_grid", s)).collect::<Result<Vec<_>, _>>()?)?;
                if g.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
                    return err(l, "`pfa_grid` values must lie in (0, 1)");
                }
                if g.windows(2).any(|w| w[0] >= w[1]) {
                    return err(l, "`pfa_grid` must be strictly ascending");
                }
                g
            }
        };

        let trials = get("trials").map_or(Ok(10_000), |(l, v)| num(l, "trials", v))?;
        if trials == 0 {
            return Err(CliError::Config("`trials` must be positive".into()));
        }
        let seed = get("seed").map_or(Ok(1), |(l, v)| num(l, "seed", v))?;
        let glr_two_sided = match get("glr_two_sided") {
            None | Some((_, "false")) => false,
            Some((_, "true")) => true,
            Some((l, v)) => return err(l, format!("`glr_two_sided` expects true or false, got `{v}`")),
        };
        let noise_power = match get("noise_power") {
            None | Some((_, "prior")) => NoisePower::Prior,
            Some((l, v)) => NoisePower::Fixed(positive(l, "noise_power", v)?),
        };
        let threshold_mode = match get("threshold_mode") {
            None | Some((_, "empirical")) => ThresholdMode::Empirical,
            Some((_, "closed_form")) => ThresholdMode::ClosedForm,
            Some((l, v)) => return err(l, format!("unknown threshold mode `{v}`")),
        };
        if threshold_mode == ThresholdMode::ClosedForm {
            if noise_power == NoisePower::Prior {
                return Err(CliError::Config("closed-form thresholds need a fixed `noise_power`".into()));
            }
            if glr_two_sided {
                return Err(CliError::Config("closed-form thresholds cover the one-sided rule only".into()));
            }
        }
        let cdf_points = get("cdf_points").map_or(Ok(200), |(l, v)| num(l, "cdf_points", v))?;
        if cdf_points < 200 {
            return Err(CliError::Config(format!("`cdf_points` must be at least 200, got {cdf_points}")));
        }
        let curve_points = get("curve_points").map_or(Ok(201), |(l, v)| num(l, "curve_points", v))?;
        if curve_points < 2 {
            return Err(CliError::Config("`curve_points` must be at least 2".into()));
        }

        let exp = Self {
            name,
            n_samples,
            snr_db,
            channels,
            nakagami_m,
            prior,
            bandwidth_hz,
            rolloff,
            sample_rate_hz,
            pulse,
            observation,
            detectors,
            pfa_grid,
            trials,
            seed,
            glr_two_sided,
            noise_power,
            threshold_mode,
            cdf_points,
            curve_points,
        };
        exp.scenarios()?;
        Ok(exp)
    }

    fn channel(&self, kind: ChannelKind) -> Channel {
        match kind {
            ChannelKind::Awgn => Channel::Awgn,
            ChannelKind::Rayleigh => Channel::Rayleigh,
            ChannelKind::Nakagami => Channel::Nakagami { m: self.nakagami_m.unwrap_or(1.0) },
        }
    }

    /// Scenarios in file order: channel, then N, then SNR.
    pub fn scenarios(&self) -> Result<Vec<Scenario>, CliError> {
        let mut out = Vec::new();
        for &channel in &self.channels {
            for &n in &self.n_samples {
                for &snr_db in &self.snr_db {
                    let spec = SignalSpec::new(self.bandwidth_hz, self.rolloff, self.sample_rate_hz, 10f64.powf(snr_db / 10.0))
                        .map_err(|e| CliError::Config(e.to_string()))?
                        .with_shape(self.pulse);
                    let mut cfg = ScenarioConfig::new(n, self.prior, spec, self.channel(channel))
                        .with_trials(self.trials)
                        .with_seed(self.seed)
                        .with_noise_power(self.noise_power)
                        .with_observation(self.observation);
                    cfg.glr_two_sided = self.glr_two_sided;
                    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
                    out.push(Scenario { channel, n_samples: n, snr_db, cfg });
                }
            }
        }
        Ok(out)
    }

    /// Canonical `key = value` listing of every setting, defaults included.
    pub fn echo(&self) -> String {
        let join = |v: Vec<String>| v.join(", ");
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("name", self.name.clone());
        put("n_samples", join(self.n_samples.iter().map(|n| n.to_string()).collect()));
        put("snr_db", join(self.snr_db.iter().map(|&x| fmt_g(x)).collect()));
        put("channel", join(self.channels.iter().map(|c| c.id().to_string()).collect()));
        if let Some(m) = self.nakagami_m {
            put("nakagami_m", fmt_g(m));
        }
        put("prior_k", self.prior.k().to_string());
        put("prior_theta", fmt_g(self.prior.theta()));
        put("bandwidth_hz", fmt_g(self.bandwidth_hz));
        put("rolloff", fmt_g(self.rolloff));
        put("sample_rate_hz", fmt_g(self.sample_rate_hz));
        put(
            "pulse",
            match self.pulse {
                PulseShape::RaisedCosine => "raised_cosine".into(),
                PulseShape::Flat => "flat".into(),
            },
        );
        put(
            "observation",
            match self.observation {
                ObservationModel::Ideal => "ideal".into(),
                ObservationModel::Waveform => "waveform".into(),
            },
        );
        put("detectors", join(self.detectors.iter().map(|d| d.id().to_string()).collect()));
        put("pfa_grid", join(self.pfa_grid.iter().map(|&p| fmt_g(p)).collect()));
        put("trials", self.trials.to_string());
        put("seed", self.seed.to_string());
        put("glr_two_sided", self.glr_two_sided.to_string());
        put(
            "noise_power",
            match self.noise_power {
                NoisePower::Prior => "prior".into(),
                NoisePower::Fixed(a) => fmt_g(a),
            },
        );
        put(
            "threshold_mode",
            match self.threshold_mode {
                ThresholdMode::Empirical => "empirical".into(),
                ThresholdMode::ClosedForm => "closed_form".into(),
            },
        );
        put("cdf_points", self.cdf_points.to_string());
        put("curve_points", self.curve_points.to_string());
        s
    }
}
