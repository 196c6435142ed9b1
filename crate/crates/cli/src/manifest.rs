//! Run manifests: what produced a set of output files.

use std::fmt::Write as _;
use std::time::Duration;

use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Notes attached to every manifest about conventions a reader of the
/// output could otherwise misread.
pub const NOTES: &[&str] = &[
    "time-domain likelihood-ratio closed forms use the incomplete-gamma argument eta*theta/alpha",
    "optimal detector statistic is sum(r)/alpha with the trial's own noise power",
    "frequency-domain detection uses a Gaussian approximation with mean L(|hs|^2 + N alpha) - eta P N alpha and variance N^2 alpha^2 (L + P eta^2) + 2 N L alpha |hs|^2",
    "the frequency-domain false-alarm approximation never falls below Q((theta + alpha N P) / (alpha N sqrt(P)))",
    "prior_k, prior_theta and nakagami_m are user choices",
    "closed-form curves condition on the fixed noise power, or on the prior mean theta/k, with unit channel gain",
];

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: String,
    pub config_echo: String,
    pub version: String,
    pub master_seed: u64,
    pub notes: Vec<String>,
    pub wall_clock: Duration,
}

impl RunManifest {
    pub fn new(command: &str, config_echo: String, master_seed: u64) -> Self {
        Self {
            command: command.to_string(),
            config_echo,
            version: VERSION.to_string(),
            master_seed,
            notes: NOTES.iter().map(|s| s.to_string()).collect(),
            wall_clock: Duration::ZERO,
        }
    }

    /// Everything that determines the output, in a fixed layout.
    fn body(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "tool = exband {}", self.version);
        let _ = writeln!(s, "command = {}", self.command);
        let _ = writeln!(s, "master_seed = {}", self.master_seed);
        s.push_str("[config]\n");
        s.push_str(&self.config_echo);
        s.push_str("[notes]\n");
        for n in &self.notes {
            let _ = writeln!(s, "- {n}");
        }
        s
    }

    /// SHA-256 of the body; the wall-clock time is left out so the hash,
    /// and every file that quotes it, is reproducible.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.body().as_bytes()))
    }

    pub fn render(&self) -> String {
        let mut s = self.body();
        let _ = writeln!(s, "[run]\nwall_clock_seconds = {:.3}", self.wall_clock.as_secs_f64());
        let _ = writeln!(s, "manifest = {}", self.hash());
        s
    }

    /// First line of every CSV the run writes.
    pub fn header_line(&self) -> String {
        format!("# manifest={}", self.hash())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_ignores_wall_clock() {
        let mut m = RunManifest::new("roc", "a = 1\n".into(), 7);
        let h = m.hash();
        m.wall_clock = Duration::from_secs(3);
        assert_eq!(m.hash(), h);
        assert_eq!(h.len(), 64);
        m.master_seed = 8;
        assert_ne!(m.hash(), h);
    }
}
