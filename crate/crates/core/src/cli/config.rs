use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::datagen::{ingest_csv, PersonalizedSpec, SocietySpec};
use crate::error::{Error, Result};
use crate::evaluation::{DataSource, Mechanism, PrivacySetting, SweepConfig};
use crate::inference::SolverConfig;

/// A scalar or a list of values; every grid axis accepts both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            Self::One(x) => vec![x.clone()],
            Self::Many(v) => v.clone(),
        }
    }

    /// The value of a scalar axis; lists of length one also qualify.
    pub fn single(&self, key: &str) -> Result<T> {
        match self {
            Self::One(x) => Ok(x.clone()),
            Self::Many(v) if v.len() == 1 => Ok(v[0].clone()),
            Self::Many(_) => Err(Error::Config(format!("'{key}' must be a single value here"))),
        }
    }
}

fn default_d() -> OneOrMany<usize> {
    OneOrMany::One(10)
}
fn default_n() -> OneOrMany<usize> {
    OneOrMany::One(50)
}
fn default_big_n() -> OneOrMany<usize> {
    OneOrMany::One(100)
}
fn default_b() -> OneOrMany<f64> {
    OneOrMany::One(2.0)
}
fn default_mechanism() -> OneOrMany<Mechanism> {
    OneOrMany::One(Mechanism::Vlcp)
}
fn default_trials() -> usize {
    20
}
fn default_test_scenarios() -> usize {
    10_000
}

/// The privacy grid used throughout the synthetic experiments.
pub const EPSILON_GRID: [f64; 17] = [
    0.01, 0.02, 0.03, 0.05, 0.07, 0.09, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0, 2.0, 3.0, 5.0, 10.0,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(default = "default_d")]
    pub d: OneOrMany<usize>,
    #[serde(default = "default_n")]
    pub n: OneOrMany<usize>,
    #[serde(rename = "N", default = "default_big_n")]
    pub big_n: OneOrMany<usize>,
    #[serde(rename = "B", default = "default_b")]
    pub bound: OneOrMany<f64>,
    #[serde(default = "default_mechanism")]
    pub mechanism: OneOrMany<Mechanism>,
    #[serde(default)]
    pub epsilons: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_test_scenarios")]
    pub test_scenarios: usize,
    #[serde(default)]
    pub personalized: Option<OneOrMany<PersonalizedSpec>>,
    #[serde(default)]
    pub solver: SolverConfig,
    /// Ingest this corpus instead of generating synthetic societies.
    #[serde(default)]
    pub corpus: Option<PathBuf>,
    /// Fill the `runtime_ms` column.
    #[serde(default)]
    pub record_runtime: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        for e in &self.epsilons {
            if !(*e > 0.0 && e.is_finite()) {
                return Err(Error::Config(format!("epsilons must be positive, got {e}")));
            }
        }
        if let Some(p) = &self.personalized {
            for spec in p.to_vec() {
                spec.validate().map_err(|e| Error::Config(e.to_string()))?;
            }
        }
        self.solver
            .validate()
            .map_err(|e| Error::Config(e.to_string()))
    }

    /// The single-society spec used by `generate`.
    pub fn society_spec(&self) -> Result<SocietySpec> {
        let spec = SocietySpec {
            n_voters: self.big_n.single("N")?,
            n_records: self.n.single("n")?,
            d: self.d.single("d")?,
            seed: self.seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn sweep_config(&self, base_dir: Option<&Path>) -> Result<SweepConfig> {
        let data = match &self.corpus {
            Some(p) => {
                let p = match base_dir {
                    Some(dir) if p.is_relative() => dir.join(p),
                    _ => p.clone(),
                };
                DataSource::Ingested(ingest_csv(&p)?)
            }
            None => DataSource::Synthetic {
                n_voters: self.big_n.to_vec(),
                n_records: self.n.to_vec(),
                dims: self.d.to_vec(),
            },
        };
        let epsilons: &[f64] = if self.epsilons.is_empty() && self.personalized.is_none() {
            &EPSILON_GRID
        } else {
            &self.epsilons
        };
        let mut privacy: Vec<PrivacySetting> = epsilons.iter().map(|e| PrivacySetting::Uniform(*e)).collect();
        if let Some(p) = &self.personalized {
            privacy.extend(p.to_vec().into_iter().map(PrivacySetting::Personalized));
        }
        let cfg = SweepConfig {
            seed: self.seed,
            data,
            bounds: self.bound.to_vec(),
            mechanisms: self.mechanism.to_vec(),
            privacy,
            trials: self.trials,
            test_scenarios: self.test_scenarios,
            solver: self.solver,
            record_runtime: self.record_runtime,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
