//! Run configuration: defaults, optional JSON file, then command-line flags.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};
use zeta_cousin::{Execution, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub truncation_decay: f64,
    pub output_dir: PathBuf,
    pub output_format: Format,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let q = QuadratureConfig::default();
        Self {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_subdivisions: q.max_subdivisions,
            truncation_decay: q.truncation_decay,
            output_dir: PathBuf::from("."),
            output_format: Format::Csv,
            threads: 1,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// `--tol` sets the relative tolerance and a matching absolute floor.
    pub fn set_tol(&mut self, tol: f64) {
        self.rel_tol = tol;
        self.abs_tol = self.abs_tol.min(tol * 1e-2);
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_subdivisions: self.max_subdivisions,
            truncation_decay: self.truncation_decay,
        }
    }

    pub fn execution(&self) -> Execution {
        Execution::from_threads(self.threads)
    }
}
