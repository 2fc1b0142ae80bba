//! Monte Carlo check of the centralized release's ∞-norm utility bound.

use crate::datagen::{generate_corpus, SocietySpec};
use crate::error::{Error, Result};
use crate::inference::SolverConfig;
use crate::linalg::linf_distance;
use crate::mechanisms::utility_bound_alpha;
use crate::rng::derive_seed;

use super::sweep::{Mechanism, PrivacySetting, TrialData};

#[derive(Debug, Clone, Copy)]
pub struct ExceedanceSetup {
    pub n_voters: usize,
    pub n_records: usize,
    pub d: usize,
    pub bound: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub releases: usize,
    pub solver: SolverConfig,
}

impl Default for ExceedanceSetup {
    fn default() -> Self {
        Self {
            n_voters: 50,
            n_records: 50,
            d: 10,
            bound: 2.0,
            epsilon: 1.0,
            gamma: 0.2,
            releases: 2000,
            solver: SolverConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExceedanceReport {
    pub alpha: f64,
    pub exceedances: usize,
    pub releases: usize,
    pub gamma: f64,
}

impl ExceedanceReport {
    pub fn fraction(&self) -> f64 {
        self.exceedances as f64 / self.releases as f64
    }

    /// `γ + 3·sqrt(γ(1−γ)/R)`.
    pub fn threshold(&self) -> f64 {
        self.gamma + 3.0 * (self.gamma * (1.0 - self.gamma) / self.releases as f64).sqrt()
    }

    pub fn passes(&self) -> bool {
        self.fraction() <= self.threshold()
    }
}

/// Fits one synthetic society, then counts how many of `releases`
/// independent centralized releases land farther than α from the
/// non-private mean in ∞-norm.
pub fn utility_bound_exceedance(setup: &ExceedanceSetup, seed: u64) -> Result<ExceedanceReport> {
    if setup.releases < 1 {
        return Err(Error::InvalidParameter("need at least one release".into()));
    }
    let alpha = utility_bound_alpha(setup.bound, setup.n_voters, setup.epsilon, setup.d, setup.gamma)?;
    let spec = SocietySpec {
        n_voters: setup.n_voters,
        n_records: setup.n_records,
        d: setup.d,
        seed: derive_seed(seed, &[0]),
    };
    let (_, corpus) = generate_corpus(&spec)?;
    let mut data = TrialData::prepare(corpus, None, setup.bound, &setup.solver, 1, seed)?;
    let setting = PrivacySetting::Uniform(setup.epsilon);
    let mut exceedances = 0;
    for r in 0..setup.releases {
        data.seed = derive_seed(seed, &[1, r as u64]);
        let released = data.release(Mechanism::Vlcp, &setting, setup.bound, &setup.solver)?;
        if linf_distance(&released.beta, &data.nonprivate.beta) > alpha {
            exceedances += 1;
        }
    }
    Ok(ExceedanceReport {
        alpha,
        exceedances,
        releases: setup.releases,
        gamma: setup.gamma,
    })
}
