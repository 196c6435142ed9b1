//! Experiment runner behind the `exband` binary.
//!
//! Experiments are flat `key = value` files; see the `presets/` directory for
//! complete examples. Every CSV starts with `# manifest=<sha256>`, the hash of
//! the run manifest written next to it.

pub mod commands;
pub mod config;
pub mod format;
pub mod manifest;
pub mod svg;

use std::fmt;
use std::path::Path;

/// Shipped experiment files, addressable by name.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig2", include_str!("../../../presets/fig2.conf")),
    ("fig3", include_str!("../../../presets/fig3.conf")),
    ("fig4", include_str!("../../../presets/fig4.conf")),
    ("fig5", include_str!("../../../presets/fig5.conf")),
    ("fig6", include_str!("../../../presets/fig6.conf")),
    ("fig7", include_str!("../../../presets/fig7.conf")),
];

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Io(String),
    /// Number of failed validation checks.
    Validation(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numeric(_) | CliError::Io(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Validation(n) => write!(f, "{n} validation check(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<exband::Error> for CliError {
    fn from(e: exband::Error) -> Self {
        match e {
            // Out-of-domain arguments reach the library only through the
            // experiment file.
            exband::Error::Config(m) | exband::Error::Domain(m) => CliError::Config(m),
            exband::Error::Numeric(m) => CliError::Numeric(m),
        }
    }
}

/// Reads an experiment file, falling back to a preset of that name.
pub fn load_config(arg: &str) -> Result<String, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{arg}: {e}")));
    }
    PRESETS
        .iter()
        .find(|(name, _)| *name == arg)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| CliError::Config(format!("{arg}: no such file or preset")))
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book {}
