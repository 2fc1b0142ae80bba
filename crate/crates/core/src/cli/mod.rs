//! Command-line entry point.
//!
//! ```text
//! dpmoral generate   --config C --out corpus.csv [--truth truth.csv] [--seed S]
//! dpmoral preprocess --corpus corpus.csv --out clipped.csv
//! dpmoral fit        --corpus corpus.csv --out betas.csv [--bound B] [--config C]
//! dpmoral release    (--betas F | --corpus F) --mechanism M (--epsilon E | --personalized P)
//!                    --seed S --out release.csv [--bound B] [--no-noise]
//! dpmoral experiment --config C --out results.csv [--jobs K] [--seed S]
//! dpmoral plotdata   --results results.csv --figure fig1a --out fig1a.csv
//! ```

mod config;
mod files;
mod plotdata;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub use config::{ExperimentConfig, OneOrMany, EPSILON_GRID};
pub use files::{
    looks_preprocessed, read_betas, read_betas_file, read_release_file, write_betas, write_betas_file,
    write_release, write_release_file, write_truth_file, BetaRow, ReleaseMeta, ReleaseRow,
};
pub use plotdata::{aggregate, figure_ids, mean_stderr, read_results, read_results_file, write_plot, PlotPoint, ResultRow};

use crate::datagen::{
    assign_privacy_groups, generate_corpus, ingest_csv, preprocess_scale, write_corpus_file, PersonalizedSpec,
};
use crate::error::{Error, Result};
use crate::evaluation::{run_sweep, Mechanism, PrivacySetting};
use crate::inference::{aggregate_mean, fit_voter, SolverConfig};
use crate::mechanisms::{
    functional_fit_without_noise, functional_sensitivity_bound, rldp_functional_fit, vldp_perturb_voter,
    vlcp_release,
};
use crate::types::{Corpus, PreferenceVector, PrivacyBudget};

#[derive(Debug, Parser)]
#[command(name = "dpmoral", version, about = "Differentially private aggregation of pairwise preference data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a society and write its comparisons and generating vectors.
    Generate(GenerateArgs),
    /// Clip every alternative of a corpus to l2 norm 1/2.
    Preprocess(PreprocessArgs),
    /// Fit each voter's preference vector.
    Fit(FitArgs),
    /// Release a private society vector.
    Release(ReleaseArgs),
    /// Run a parameter sweep.
    Experiment(ExperimentArgs),
    /// Aggregate sweep results for one figure.
    Plotdata(PlotdataArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Defaults to `<out stem>.truth.csv` next to the corpus.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub bound: f64,
    /// Experiment config whose `solver` block is used.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReleaseArgs {
    #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus")]
    pub betas: Option<PathBuf>,
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub mechanism: String,
    #[arg(long, conflicts_with = "personalized", required_unless_present_any = ["personalized", "no_noise"])]
    pub epsilon: Option<f64>,
    /// JSON file with `f_c, f_m, eps_c, eps_m, eps_l`.
    #[arg(long)]
    pub personalized: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 2.0)]
    pub bound: f64,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Skip the noise. The output is not private and is stamped `private=false`.
    #[arg(long)]
    pub no_noise: bool,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PlotdataArgs {
    #[arg(long)]
    pub results: PathBuf,
    #[arg(long)]
    pub figure: String,
    #[arg(long)]
    pub out: PathBuf,
}

/// Process exit code for an error: 2 config or validation, 3 I/O,
/// 4 numerical failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 3,
        Error::Numerical(_) => 4,
        _ => 2,
    }
}

fn solver_from(config: Option<&Path>) -> Result<SolverConfig> {
    match config {
        Some(p) => Ok(ExperimentConfig::load(p)?.solver),
        None => Ok(SolverConfig::default()),
    }
}

fn default_truth_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.truth.csv"))
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let spec = cfg.society_spec()?;
    let (society, corpus) = generate_corpus(&spec)?;
    write_corpus_file(&corpus, &args.out)?;
    let truth = args.truth.clone().unwrap_or_else(|| default_truth_path(&args.out));
    write_truth_file(&society.truth, &society.mean, &truth)
}

pub fn cmd_preprocess(args: &PreprocessArgs) -> Result<()> {
    let corpus = ingest_csv(&args.corpus)?;
    write_corpus_file(&preprocess_scale(&corpus), &args.out)
}

pub fn cmd_fit(args: &FitArgs) -> Result<()> {
    let solver = solver_from(args.config.as_deref())?;
    let corpus = ingest_csv(&args.corpus)?;
    let rows = fit_corpus(&corpus, args.bound, &solver)?;
    write_betas_file(&rows, corpus.d, &args.out)
}

pub fn fit_corpus(corpus: &Corpus, bound: f64, solver: &SolverConfig) -> Result<Vec<BetaRow>> {
    corpus
        .voters
        .iter()
        .map(|v| fit_voter(v, bound, solver).map(|f| BetaRow::from_fit(v.voter_id, f)))
        .collect()
}

/// Input to a release: fitted vectors or raw comparisons.
pub enum ReleaseInput {
    Betas(Vec<BetaRow>),
    Corpus(Corpus),
}

/// Privacy request of a release; `None` budgets mean the no-noise mode.
pub struct ReleaseRequest {
    pub mechanism: Mechanism,
    pub privacy: Option<PrivacySetting>,
    pub seed: u64,
    pub bound: f64,
    pub solver: SolverConfig,
}

/// Runs one mechanism and returns the release metadata and rows (per-voter
/// rows for the distributed mechanisms, then the `mean` row).
pub fn release(input: &ReleaseInput, req: &ReleaseRequest) -> Result<(ReleaseMeta, Vec<ReleaseRow>)> {
    let n_input = match input {
        ReleaseInput::Betas(b) => b.len(),
        ReleaseInput::Corpus(c) => c.voters.len(),
    };
    let budgets: Option<Vec<f64>> = match &req.privacy {
        None => None,
        Some(PrivacySetting::Uniform(e)) => {
            PrivacyBudget::new(*e).map_err(|e| Error::Config(e.to_string()))?;
            Some(vec![*e; n_input])
        }
        Some(PrivacySetting::Personalized(spec)) => {
            if req.mechanism == Mechanism::Vlcp {
                return Err(Error::Config(
                    "vlcp takes one universal --epsilon; personalized budgets need vldp or rldp-fm".into(),
                ));
            }
            Some(
                assign_privacy_groups(n_input, spec, req.seed)?
                    .into_iter()
                    .map(|a| a.epsilon)
                    .collect(),
            )
        }
    };
    let epsilon_spec = req
        .privacy
        .as_ref()
        .map(|p| p.label())
        .unwrap_or_else(|| "none".into());
    let private = budgets.is_some();
    match (req.mechanism, input) {
        (Mechanism::Vlcp, ReleaseInput::Betas(rows)) => {
            let betas: Vec<PreferenceVector> = rows.iter().map(|r| r.beta.clone()).collect();
            let released = match &budgets {
                Some(b) => vlcp_release(&betas, PrivacyBudget::new(b[0])?, req.bound, req.seed)?,
                None => aggregate_mean(&betas)?,
            };
            let meta = ReleaseMeta {
                mechanism: req.mechanism.to_string(),
                epsilon_spec,
                seed: req.seed,
                bound: req.bound,
                delta: 2.0 * req.bound / betas.len() as f64,
                private,
            };
            let row = ReleaseRow {
                id: "mean".into(),
                epsilon: budgets.as_ref().map(|b| b[0]),
                beta: released.beta,
            };
            Ok((meta, vec![row]))
        }
        (Mechanism::Vldp, ReleaseInput::Betas(rows)) => {
            let mut out = Vec::with_capacity(rows.len() + 1);
            let mut noisy = Vec::with_capacity(rows.len());
            for (i, r) in rows.iter().enumerate() {
                let v = match &budgets {
                    Some(b) => vldp_perturb_voter(&r.beta, r.voter_id, PrivacyBudget::new(b[i])?, req.bound, req.seed)?,
                    None => r.beta.clone(),
                };
                out.push(ReleaseRow {
                    id: r.voter_id.to_string(),
                    epsilon: budgets.as_ref().map(|b| b[i]),
                    beta: v.beta.clone(),
                });
                noisy.push(v);
            }
            out.push(ReleaseRow {
                id: "mean".into(),
                epsilon: None,
                beta: aggregate_mean(&noisy)?.beta,
            });
            let meta = ReleaseMeta {
                mechanism: req.mechanism.to_string(),
                epsilon_spec,
                seed: req.seed,
                bound: req.bound,
                delta: 2.0 * req.bound,
                private,
            };
            Ok((meta, out))
        }
        (Mechanism::RldpFm, ReleaseInput::Corpus(corpus)) => {
            if !(corpus.preprocessed || looks_preprocessed(corpus)) {
                return Err(Error::NotPreprocessed);
            }
            let mut out = Vec::with_capacity(corpus.voters.len() + 1);
            let mut noisy = Vec::with_capacity(corpus.voters.len());
            for (i, v) in corpus.voters.iter().enumerate() {
                let fit = match &budgets {
                    Some(b) => rldp_functional_fit(v, PrivacyBudget::new(b[i])?, req.bound, &req.solver, req.seed)?,
                    None => functional_fit_without_noise(v, req.bound, &req.solver)?,
                };
                out.push(ReleaseRow {
                    id: v.voter_id.to_string(),
                    epsilon: budgets.as_ref().map(|b| b[i]),
                    beta: fit.beta.beta.clone(),
                });
                noisy.push(fit.beta);
            }
            out.push(ReleaseRow {
                id: "mean".into(),
                epsilon: None,
                beta: aggregate_mean(&noisy)?.beta,
            });
            let meta = ReleaseMeta {
                mechanism: req.mechanism.to_string(),
                epsilon_spec,
                seed: req.seed,
                bound: req.bound,
                delta: functional_sensitivity_bound(corpus.d),
                private,
            };
            Ok((meta, out))
        }
        (Mechanism::RldpFm, ReleaseInput::Betas(_)) => Err(Error::Config(
            "rldp-fm perturbs each voter's objective and needs the preprocessed corpus (--corpus), not fitted betas"
                .into(),
        )),
        (m, ReleaseInput::Corpus(_)) => Err(Error::Config(format!(
            "{m} perturbs fitted vectors; run `dpmoral fit` and pass --betas"
        ))),
    }
}

fn load_personalized(path: &Path) -> Result<PersonalizedSpec> {
    let text = std::fs::read_to_string(path)?;
    let spec: PersonalizedSpec =
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    spec.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(spec)
}

pub fn cmd_release(args: &ReleaseArgs) -> Result<()> {
    let mechanism: Mechanism = args.mechanism.parse()?;
    let privacy = if args.no_noise {
        None
    } else if let Some(p) = &args.personalized {
        Some(PrivacySetting::Personalized(load_personalized(p)?))
    } else {
        let e = args
            .epsilon
            .ok_or_else(|| Error::Config("--epsilon or --personalized is required".into()))?;
        Some(PrivacySetting::Uniform(e))
    };
    let input = match (&args.betas, &args.corpus) {
        (Some(b), _) => ReleaseInput::Betas(read_betas_file(b)?),
        (None, Some(c)) => ReleaseInput::Corpus(ingest_csv(c)?),
        (None, None) => return Err(Error::Config("--betas or --corpus is required".into())),
    };
    let d = match &input {
        ReleaseInput::Betas(b) => b[0].beta.dim(),
        ReleaseInput::Corpus(c) => c.d,
    };
    let req = ReleaseRequest {
        mechanism,
        privacy,
        seed: args.seed,
        bound: args.bound,
        solver: solver_from(args.config.as_deref())?,
    };
    let (meta, rows) = release(&input, &req)?;
    write_release_file(&meta, &rows, d, &args.out)
}

pub fn cmd_experiment(args: &ExperimentArgs) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let sweep = cfg.sweep_config(args.config.parent())?;
    let result = run_sweep(&sweep, args.jobs)?;
    let f = std::fs::File::create(&args.out)?;
    result.write_csv(std::io::BufWriter::new(f))
}

pub fn cmd_plotdata(args: &PlotdataArgs) -> Result<()> {
    let rows = read_results_file(&args.results)?;
    let points = aggregate(&rows, &args.figure)?;
    let f = std::fs::File::create(&args.out)?;
    write_plot(&points, std::io::BufWriter::new(f))
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Preprocess(a) => cmd_preprocess(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Release(a) => cmd_release(a),
        Command::Experiment(a) => cmd_experiment(a),
        Command::Plotdata(a) => cmd_plotdata(a),
    }
}

/// Parses `args` and runs the command, returning the process exit code.
/// Errors are reported on stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::NotPreprocessed) {
                eprintln!("hint: dpmoral preprocess --corpus IN.csv --out CLIPPED.csv, then release from CLIPPED.csv");
            }
            exit_code(&e)
        }
    }
}
