use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// The fully resolved settings of one run. Every output document embeds it,
/// so a result can be reproduced from its own metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<PathBuf>,
    pub format: Format,
    pub fuel: u64,
    pub residual: f64,
    pub seed: u64,
    /// Command-specific options, by flag name.
    pub options: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(command: &str, format: Format, fuel: u64, residual: f64, seed: u64) -> Self {
        RunConfig {
            command: command.into(),
            inputs: Vec::new(),
            format,
            fuel,
            residual,
            seed,
            options: BTreeMap::new(),
        }
    }

    pub fn input(mut self, path: impl Into<PathBuf>) -> Self {
        self.inputs.push(path.into());
        self
    }

    pub fn option(mut self, key: &str, value: impl ToString) -> Self {
        self.options.insert(key.into(), value.to_string());
        self
    }
}
