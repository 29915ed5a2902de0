use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Volume,
    Bergman,
    Energy,
    Approx,
    Envelope,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Volume => "volume",
            Experiment::Bergman => "bergman",
            Experiment::Energy => "energy",
            Experiment::Approx => "approx",
            Experiment::Envelope => "envelope",
        }
    }

    /// The committed configuration used when `--config` is not given.
    pub fn default_config(self) -> &'static str {
        match self {
            Experiment::Volume => include_str!("../fixtures/volume_thirds_quarters.json"),
            Experiment::Bergman => include_str!("../fixtures/bergman_thirds_quarters.json"),
            Experiment::Energy => include_str!("../fixtures/energy_annulus.json"),
            Experiment::Approx => include_str!("../fixtures/approx_thirds_quarters.json"),
            Experiment::Envelope => include_str!("../fixtures/envelope_annulus.json"),
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Twist {
    pub rank: u32,
    pub degree_shift: i64,
}

impl Default for Twist {
    fn default() -> Self {
        Twist { rank: 1, degree_shift: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub fixture: String,
    pub k_schedule: Vec<u32>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub twist: Twist,
    /// Where the tolerances came from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl ExperimentConfig {
    pub fn parse(json: &str) -> Result<Self> {
        let c: ExperimentConfig = serde_json::from_str(json).context("invalid experiment config")?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&s).with_context(|| format!("in {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_schedule.contains(&0) {
            bail!("k-schedule entries must be positive");
        }
        if let Some(w) = self.k_schedule.windows(2).find(|w| w[1] <= w[0]) {
            bail!("k-schedule not strictly increasing at {} → {}", w[0], w[1]);
        }
        if self.k_schedule.is_empty() && self.experiment != Experiment::Envelope {
            bail!("empty k-schedule");
        }
        if self.twist.rank == 0 {
            bail!("twist rank must be positive");
        }
        if let Some((k, v)) = self.tolerances.iter().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            bail!("tolerance {k} = {v} is not a finite non-negative number");
        }
        Ok(())
    }

    /// Named tolerance, falling back to `default` when not configured.
    pub fn tol(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out").join(self.experiment.name()))
    }
}
