use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::rng::{Purpose, RngStream};
use crate::types::{Corpus, FeatureVector, PairwiseComparison, PreferenceVector, VoterDataset, MAX_DIM};

/// Shape and seed of a synthetic society.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocietySpec {
    pub n_voters: usize,
    pub n_records: usize,
    pub d: usize,
    pub seed: u64,
}

impl SocietySpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_voters < 1 || self.n_records < 1 || self.d < 1 {
            return Err(Error::Config(format!(
                "N, n and d must all be >= 1 (got N={}, n={}, d={})",
                self.n_voters, self.n_records, self.d
            )));
        }
        if self.d > MAX_DIM {
            return Err(Error::Config(format!("d={} exceeds {MAX_DIM}", self.d)));
        }
        Ok(())
    }
}

/// Ground truth of a synthetic society.
#[derive(Debug, Clone, PartialEq)]
pub struct Society {
    /// Per-voter generating parameters `β_i ~ N(m, I_d)`.
    pub truth: Vec<PreferenceVector>,
    /// Population mean `m`, `m_j ~ U(−1, 1)`.
    pub mean: Vec<f64>,
}

/// Draws `m ~ U(−1,1)^d` and `β_i ~ N(m, I_d)` for every voter.
pub fn generate_society(spec: &SocietySpec) -> Result<Society> {
    spec.validate()?;
    let mut rng = RngStream::new(spec.seed, 0, Purpose::SocietyMean).rng();
    let mean: Vec<f64> = (0..spec.d).map(|_| rng.random_range(-1.0..1.0)).collect();
    let truth = (0..spec.n_voters)
        .map(|i| {
            let mut rng = RngStream::new(spec.seed, i as u64, Purpose::VoterTruth).rng();
            PreferenceVector::new(
                mean.iter()
                    .map(|m| m + Distribution::<f64>::sample(&StandardNormal, &mut rng))
                    .collect(),
            )
        })
        .collect();
    Ok(Society { truth, mean })
}

/// Simulates `n` comparisons for one voter.
///
/// Each record draws `x₁, x₂ ~ N(0, I_d)` and utilities
/// `U_k ~ N(βᵀx_k, 1/2)`; the alternative with the larger utility is the
/// chosen one (ties go to `x₁`).
pub fn generate_voter_records<R: Rng + ?Sized>(
    beta_true: &PreferenceVector,
    voter_id: u64,
    n: usize,
    rng: &mut R,
) -> Result<VoterDataset> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let d = beta_true.dim();
    let utility_noise = Normal::new(0.0, 0.5f64.sqrt()).expect("valid normal");
    let mut records = Vec::with_capacity(n);
    for _ in 0..n {
        let x1: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let x2: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        let u1 = dot(&beta_true.beta, &x1) + utility_noise.sample(rng);
        let u2 = dot(&beta_true.beta, &x2) + utility_noise.sample(rng);
        let (chosen, rejected) = if u1 >= u2 { (x1, x2) } else { (x2, x1) };
        records.push(PairwiseComparison {
            chosen: FeatureVector(chosen),
            rejected: FeatureVector(rejected),
        });
    }
    Ok(VoterDataset { voter_id, records })
}

/// Society plus its simulated comparisons, voter `i` drawing from stream
/// `(i, Records)`.
pub fn generate_corpus(spec: &SocietySpec) -> Result<(Society, Corpus)> {
    let society = generate_society(spec)?;
    let voters = society
        .truth
        .iter()
        .enumerate()
        .map(|(i, beta)| {
            let mut rng = RngStream::new(spec.seed, i as u64, Purpose::Records).rng();
            generate_voter_records(beta, i as u64, spec.n_records, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((
        society,
        Corpus {
            voters,
            d: spec.d,
            preprocessed: false,
        },
    ))
}
