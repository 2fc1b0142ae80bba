//! Parameter sweeps over society shape, mechanism and privacy setting.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::{assign_privacy_groups, fmt_real, generate_corpus, preprocess_scale, PersonalizedSpec, SocietySpec};
use crate::error::{Error, Result};
use crate::inference::{aggregate_mean, fit_voter, SolverConfig};
use crate::linalg::linf_distance;
use crate::mechanisms::{rldp_functional_fit, vldp_perturb_voter, vlcp_release};
use crate::rng::derive_seed;
use crate::types::{Corpus, PreferenceVector, PrivacyBudget};

use super::accuracy::{accuracy, generate_test_scenarios, TestScenarioSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mechanism {
    /// Centralized Laplace noise on the society mean.
    #[serde(rename = "vlcp")]
    Vlcp,
    /// Distributed Laplace noise on each voter's fitted vector.
    #[serde(rename = "vldp")]
    Vldp,
    /// Distributed functional mechanism on each voter's objective.
    #[serde(rename = "rldp-fm")]
    RldpFm,
}

impl Mechanism {
    pub const ALL: [Mechanism; 3] = [Mechanism::Vlcp, Mechanism::Vldp, Mechanism::RldpFm];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Vlcp => "vlcp",
            Self::Vldp => "vldp",
            Self::RldpFm => "rldp-fm",
        }
    }

    fn seed_tag(self) -> u64 {
        match self {
            Self::Vlcp => 1,
            Self::Vldp => 2,
            Self::RldpFm => 3,
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mechanism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vlcp" => Ok(Self::Vlcp),
            "vldp" => Ok(Self::Vldp),
            "rldp-fm" => Ok(Self::RldpFm),
            other => Err(Error::Config(format!(
                "unknown mechanism '{other}' (expected vlcp, vldp or rldp-fm)"
            ))),
        }
    }
}

/// Either one ε shared by every voter or a personalized group spec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrivacySetting {
    Uniform(f64),
    Personalized(PersonalizedSpec),
}

impl PrivacySetting {
    /// Label used in the `epsilon_spec` results column.
    pub fn label(&self) -> String {
        match self {
            Self::Uniform(e) => format!("{e}"),
            Self::Personalized(p) => format!(
                "fc={};fm={};ec={};em={};el={}",
                p.f_c, p.f_m, p.eps_c, p.eps_m, p.eps_l
            ),
        }
    }

    pub fn parse_label(s: &str) -> Result<Self> {
        if let Ok(e) = s.parse::<f64>() {
            return Ok(Self::Uniform(e));
        }
        let mut spec = PersonalizedSpec::default();
        for part in s.split(';') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("bad epsilon_spec '{s}'")))?;
            let v: f64 = v
                .parse()
                .map_err(|_| Error::Config(format!("bad epsilon_spec '{s}'")))?;
            match k {
                "fc" => spec.f_c = v,
                "fm" => spec.f_m = v,
                "ec" => spec.eps_c = v,
                "em" => spec.eps_m = v,
                "el" => spec.eps_l = v,
                _ => return Err(Error::Config(format!("bad epsilon_spec '{s}'"))),
            }
        }
        Ok(Self::Personalized(spec))
    }
}

/// Where voter data comes from.
#[derive(Debug, Clone)]
pub enum DataSource {
    /// Fresh synthetic societies for every grid point and trial.
    Synthetic {
        n_voters: Vec<usize>,
        n_records: Vec<usize>,
        dims: Vec<usize>,
    },
    /// A fixed ingested corpus; there is no generating truth, so
    /// `accuracy_ratio` is NaN.
    Ingested(Corpus),
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub seed: u64,
    pub data: DataSource,
    pub bounds: Vec<f64>,
    pub mechanisms: Vec<Mechanism>,
    pub privacy: Vec<PrivacySetting>,
    pub trials: usize,
    pub test_scenarios: usize,
    pub solver: SolverConfig,
    /// Record wall-clock time per release. Off by default so that reruns are
    /// byte-identical.
    pub record_runtime: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Config(m));
        if self.trials < 1 {
            return err("trials must be >= 1".into());
        }
        if self.test_scenarios < 1 {
            return err("test_scenarios must be >= 1".into());
        }
        if self.mechanisms.is_empty() {
            return err("at least one mechanism is required".into());
        }
        if self.privacy.is_empty() {
            return err("no privacy settings (epsilons or personalized) given".into());
        }
        if self.bounds.is_empty() || self.bounds.iter().any(|b| !(*b > 0.0 && b.is_finite())) {
            return err("norm bounds B must be positive".into());
        }
        for p in &self.privacy {
            match p {
                PrivacySetting::Uniform(e) => {
                    PrivacyBudget::new(*e).map_err(|e| Error::Config(e.to_string()))?;
                }
                PrivacySetting::Personalized(s) => {
                    s.validate()?;
                    if self.mechanisms.contains(&Mechanism::Vlcp) {
                        return err(
                            "vlcp uses one universal epsilon; personalized settings need vldp or rldp-fm"
                                .into(),
                        );
                    }
                }
            }
        }
        match &self.data {
            DataSource::Synthetic {
                n_voters,
                n_records,
                dims,
            } => {
                if n_voters.is_empty() || n_records.is_empty() || dims.is_empty() {
                    return err("N, n and d need at least one value each".into());
                }
                for &n in n_voters.iter().chain(n_records).chain(dims) {
                    if n < 1 {
                        return err("N, n and d must all be >= 1".into());
                    }
                }
            }
            DataSource::Ingested(c) => crate::types::validate_corpus(c)?,
        }
        self.solver.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub mechanism: Mechanism,
    pub privacy: PrivacySetting,
    pub n_voters: usize,
    pub n_records: usize,
    pub d: usize,
    pub bound: f64,
    pub trial: usize,
    /// Agreement of the release with the non-private mean.
    pub accuracy: f64,
    /// Agreement with the generating mean, relative to the non-private
    /// mean's agreement with it.
    pub accuracy_ratio: f64,
    /// ‖release − non-private mean‖∞.
    pub linf_error: f64,
    /// Agreement of the non-private mean with the generating mean.
    pub baseline_accuracy: f64,
    pub runtime_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

pub const RESULTS_HEADER: [&str; 11] = [
    "mechanism",
    "epsilon_spec",
    "N",
    "n",
    "d",
    "B",
    "trial",
    "accuracy",
    "accuracy_ratio",
    "linf_error",
    "runtime_ms",
];

impl SweepResult {
    /// Writes the results CSV. `runtime_ms` is left empty when not recorded.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e.to_string()));
        w.write_record(RESULTS_HEADER).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.mechanism.as_str().to_string(),
                r.privacy.label(),
                r.n_voters.to_string(),
                r.n_records.to_string(),
                r.d.to_string(),
                format!("{}", r.bound),
                r.trial.to_string(),
                fmt_real(r.accuracy),
                fmt_real(r.accuracy_ratio),
                fmt_real(r.linf_error),
                r.runtime_ms.map(fmt_real).unwrap_or_default(),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Everything a trial needs that does not depend on the mechanism.
pub struct TrialData {
    pub corpus: Corpus,
    pub preprocessed: Corpus,
    pub fits: Vec<PreferenceVector>,
    pub nonprivate: PreferenceVector,
    pub ground: Option<PreferenceVector>,
    pub scenarios: TestScenarioSet,
    pub seed: u64,
}

impl TrialData {
    /// Fits every voter and draws test scenarios. `ground` is the
    /// generating mean when known.
    pub fn prepare(
        corpus: Corpus,
        ground: Option<PreferenceVector>,
        bound: f64,
        solver: &SolverConfig,
        test_scenarios: usize,
        seed: u64,
    ) -> Result<Self> {
        let fits = corpus
            .voters
            .iter()
            .map(|v| fit_voter(v, bound, solver).map(|f| f.beta))
            .collect::<Result<Vec<_>>>()?;
        let nonprivate = aggregate_mean(&fits)?;
        let scenarios = generate_test_scenarios(corpus.d, test_scenarios, derive_seed(seed, &[7]))?;
        let preprocessed = preprocess_scale(&corpus);
        Ok(Self {
            corpus,
            preprocessed,
            fits,
            nonprivate,
            ground,
            scenarios,
            seed,
        })
    }

    /// Agreement of the non-private mean with the generating mean.
    pub fn baseline_accuracy(&self) -> Result<f64> {
        match &self.ground {
            Some(g) => accuracy(g, &self.nonprivate, &self.scenarios),
            None => Ok(f64::NAN),
        }
    }

    fn budgets(&self, setting: &PrivacySetting) -> Result<Vec<PrivacyBudget>> {
        let n = self.corpus.voters.len();
        match setting {
            PrivacySetting::Uniform(e) => Ok(vec![PrivacyBudget::new(*e)?; n]),
            PrivacySetting::Personalized(spec) => {
                assign_privacy_groups(n, spec, derive_seed(self.seed, &[100]))?
                    .into_iter()
                    .map(|a| PrivacyBudget::new(a.epsilon))
                    .collect()
            }
        }
    }

    /// Runs one mechanism on this trial's data.
    ///
    /// The noise seed depends on the trial and the mechanism but not on the
    /// privacy setting, so a sweep over ε reuses the same underlying draws.
    pub fn release(
        &self,
        mechanism: Mechanism,
        setting: &PrivacySetting,
        bound: f64,
        solver: &SolverConfig,
    ) -> Result<PreferenceVector> {
        let seed = derive_seed(self.seed, &[mechanism.seed_tag()]);
        match mechanism {
            Mechanism::Vlcp => match setting {
                PrivacySetting::Uniform(e) => {
                    vlcp_release(&self.fits, PrivacyBudget::new(*e)?, bound, seed)
                }
                PrivacySetting::Personalized(_) => Err(Error::Config(
                    "vlcp uses one universal epsilon".into(),
                )),
            },
            Mechanism::Vldp => {
                let budgets = self.budgets(setting)?;
                let noisy = self
                    .fits
                    .iter()
                    .zip(&self.corpus.voters)
                    .zip(&budgets)
                    .map(|((b, v), e)| vldp_perturb_voter(b, v.voter_id, *e, bound, seed))
                    .collect::<Result<Vec<_>>>()?;
                aggregate_mean(&noisy)
            }
            Mechanism::RldpFm => {
                let budgets = self.budgets(setting)?;
                let noisy = self
                    .preprocessed
                    .voters
                    .iter()
                    .zip(&budgets)
                    .map(|(v, e)| rldp_functional_fit(v, *e, bound, solver, seed).map(|f| f.beta))
                    .collect::<Result<Vec<_>>>()?;
                aggregate_mean(&noisy)
            }
        }
    }
}

struct Structure {
    n_voters: usize,
    n_records: usize,
    d: usize,
    bound: f64,
}

fn structures(cfg: &SweepConfig) -> Vec<Structure> {
    let mut out = Vec::new();
    match &cfg.data {
        DataSource::Synthetic {
            n_voters,
            n_records,
            dims,
        } => {
            for &nv in n_voters {
                for &nr in n_records {
                    for &d in dims {
                        for &bound in &cfg.bounds {
                            out.push(Structure {
                                n_voters: nv,
                                n_records: nr,
                                d,
                                bound,
                            });
                        }
                    }
                }
            }
        }
        DataSource::Ingested(c) => {
            let n_records = c.voters.iter().map(|v| v.len()).max().unwrap_or(0);
            for &bound in &cfg.bounds {
                out.push(Structure {
                    n_voters: c.voters.len(),
                    n_records,
                    d: c.d,
                    bound,
                });
            }
        }
    }
    out
}

fn run_structure_trial(
    cfg: &SweepConfig,
    s_idx: usize,
    s: &Structure,
    trial: usize,
) -> Result<Vec<(usize, usize, SweepRow)>> {
    let trial_seed = derive_seed(cfg.seed, &[s_idx as u64, trial as u64]);
    let (corpus, ground) = match &cfg.data {
        DataSource::Synthetic { .. } => {
            let spec = SocietySpec {
                n_voters: s.n_voters,
                n_records: s.n_records,
                d: s.d,
                seed: trial_seed,
            };
            let (society, corpus) = generate_corpus(&spec)?;
            (corpus, Some(aggregate_mean(&society.truth)?))
        }
        DataSource::Ingested(c) => (c.clone(), None),
    };
    let data = TrialData::prepare(corpus, ground, s.bound, &cfg.solver, cfg.test_scenarios, trial_seed)?;
    let baseline = data.baseline_accuracy()?;
    let per_structure = cfg.mechanisms.len() * cfg.privacy.len();
    let mut rows = Vec::with_capacity(per_structure);
    for (m_idx, &mechanism) in cfg.mechanisms.iter().enumerate() {
        for (p_idx, setting) in cfg.privacy.iter().enumerate() {
            let start = Instant::now();
            let released = data.release(mechanism, setting, s.bound, &cfg.solver)?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            let acc = accuracy(&data.nonprivate, &released, &data.scenarios)?;
            let ratio = match &data.ground {
                Some(g) if baseline > 0.0 => accuracy(g, &released, &data.scenarios)? / baseline,
                _ => f64::NAN,
            };
            let cell = s_idx * per_structure + m_idx * cfg.privacy.len() + p_idx;
            rows.push((
                cell,
                trial,
                SweepRow {
                    mechanism,
                    privacy: *setting,
                    n_voters: s.n_voters,
                    n_records: s.n_records,
                    d: s.d,
                    bound: s.bound,
                    trial,
                    accuracy: acc,
                    accuracy_ratio: ratio,
                    linf_error: linf_distance(&released.beta, &data.nonprivate.beta),
                    baseline_accuracy: baseline,
                    runtime_ms: cfg.record_runtime.then_some(elapsed),
                },
            ));
        }
    }
    Ok(rows)
}

/// Runs every (structure, trial) job, in parallel on `jobs` threads when
/// given, and returns rows ordered by (cell, trial) where a cell is one
/// (N, n, d, B, mechanism, privacy) combination.
pub fn run_sweep(cfg: &SweepConfig, jobs: Option<usize>) -> Result<SweepResult> {
    cfg.validate()?;
    let structs = structures(cfg);
    let work: Vec<(usize, usize)> = (0..structs.len())
        .flat_map(|s| (0..cfg.trials).map(move |t| (s, t)))
        .collect();
    let run = || -> Result<Vec<Vec<(usize, usize, SweepRow)>>> {
        work.par_iter()
            .map(|&(s, t)| run_structure_trial(cfg, s, &structs[s], t))
            .collect()
    };
    let batches = match jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let mut rows: Vec<(usize, usize, SweepRow)> = batches.into_iter().flatten().collect();
    rows.sort_by_key(|(cell, trial, _)| (*cell, *trial));
    Ok(SweepResult {
        rows: rows.into_iter().map(|(_, _, r)| r).collect(),
    })
}
