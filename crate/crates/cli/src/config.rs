use std::path::Path;

use clap::ValueEnum;
use mf_core::continuation::DEFAULT_ORDER;
use mf_core::elliptic::{DEFAULT_TRUNC, MIN_TRUNC};
use mf_core::normal_forms::Branch;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }
    }
}

/// Settings shared by every subcommand. Read from the JSON file named by
/// `MF_CONFIG`, then overridden by command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub tol: f64,
    pub trunc: usize,
    pub theta_radius: usize,
    pub series_order: usize,
    pub seed: u64,
    pub format: Format,
    pub branch: Option<BranchArg>,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            trunc: DEFAULT_TRUNC,
            theta_radius: 8,
            series_order: DEFAULT_ORDER,
            seed: 1,
            format: Format::Json,
            branch: None,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// Absolute and relative tolerance
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Lattice truncation N for Eisenstein sums
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    /// Box radius for theta sums
    #[arg(long, global = true)]
    pub theta_radius: Option<usize>,
    /// Power-series order M for germs
    #[arg(long, global = true)]
    pub series_order: Option<usize>,
    /// Seed for randomized checks
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Square-root branch for conversions that need one
    #[arg(long, global = true, value_enum)]
    pub branch: Option<BranchArg>,
    /// Worker threads
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn load(env_path: Option<&Path>, o: &Overrides) -> Result<Self, CliError> {
        let mut c = match env_path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Input(format!("cannot read MF_CONFIG {}: {e}", p.display()))
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Input(format!("invalid MF_CONFIG: {e}")))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = o.tol {
            c.tol = v;
        }
        if let Some(v) = o.trunc {
            c.trunc = v;
        }
        if let Some(v) = o.theta_radius {
            c.theta_radius = v;
        }
        if let Some(v) = o.series_order {
            c.series_order = v;
        }
        if let Some(v) = o.seed {
            c.seed = v;
        }
        if let Some(v) = o.format {
            c.format = v;
        }
        if o.branch.is_some() {
            c.branch = o.branch;
        }
        if o.threads.is_some() {
            c.threads = o.threads;
        }
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Input(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.trunc < MIN_TRUNC {
            return Err(CliError::Input(format!(
                "trunc must be at least {MIN_TRUNC}"
            )));
        }
        if self.theta_radius == 0 || self.series_order < 4 {
            return Err(CliError::Input(
                "theta_radius must be positive and series_order at least 4".into(),
            ));
        }
        if self.threads == Some(0) {
            return Err(CliError::Input("threads must be positive".into()));
        }
        Ok(())
    }
}
