//! Empirical check of the ℓ1 sensitivity of the non-private statistics that
//! the Laplace mechanisms perturb.
//!
//! Two kinds of neighbouring pairs are examined: random ones built from the
//! synthetic generator, and the worst-case construction in which one record
//! has `V = (1, …, 1)` (resp. `−1` in the neighbour) and every other record
//! of that voter is nearly zero. The worst case pushes the fitted vector to
//! `±(B/d)·1`, so the deviation approaches the theoretical bound from below.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::datagen::{generate_corpus, generate_voter_records, SocietySpec};
use crate::error::{Error, Result};
use crate::inference::{aggregate_mean, fit_voter, SolverConfig};
use crate::linalg::l1_distance;
use crate::rng::{derive_seed, Purpose, RngStream};
use crate::types::{FeatureVector, PairwiseComparison, PreferenceVector, VoterDataset};

/// Which non-private statistic is examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SensitivityTarget {
    /// Mean of all fitted vectors (perturbed by the centralized release).
    SocietyMean,
    /// One voter's fitted vector (perturbed by the distributed release).
    SingleVoter,
}

/// Neighbouring datasets differ in one voter's data or in one record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighborhood {
    VoterLevel,
    RecordLevel,
}

#[derive(Debug, Clone, Copy)]
pub struct SensitivitySetup {
    pub n_voters: usize,
    pub n_records: usize,
    pub d: usize,
    pub bound: f64,
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityReport {
    /// `2B/N` for the society mean, `2B` for a single voter.
    pub theoretical_bound: f64,
    pub max_random: f64,
    pub max_adversarial: f64,
    pub pairs: usize,
}

impl SensitivityReport {
    pub fn max_observed(&self) -> f64 {
        self.max_random.max(self.max_adversarial)
    }
}

/// Nearly-zero record: `X` tiny, `Z = 0`.
fn tiny_record<R: Rng>(d: usize, rng: &mut R) -> PairwiseComparison {
    let x: Vec<f64> = (0..d)
        .map(|_| 1e-4 * Distribution::<f64>::sample(&StandardNormal, &mut *rng))
        .collect();
    PairwiseComparison {
        chosen: FeatureVector(x),
        rejected: FeatureVector::zeros(d),
    }
}

/// `V = sign·(1, …, 1)` split evenly between the two alternatives.
fn all_ones_record(d: usize, sign: f64) -> PairwiseComparison {
    PairwiseComparison {
        chosen: FeatureVector(vec![0.5 * sign; d]),
        rejected: FeatureVector(vec![-0.5 * sign; d]),
    }
}

/// The worst-case pair for voter `voter_id`: identical nearly-zero records
/// except the first, which is `+1` in one dataset and `−1` in the other.
pub fn adversarial_pair<R: Rng>(voter_id: u64, n: usize, d: usize, rng: &mut R) -> (VoterDataset, VoterDataset) {
    let rest: Vec<PairwiseComparison> = (1..n).map(|_| tiny_record(d, rng)).collect();
    let build = |sign: f64| {
        let mut records = vec![all_ones_record(d, sign)];
        records.extend(rest.iter().cloned());
        VoterDataset { voter_id, records }
    };
    (build(1.0), build(-1.0))
}

fn random_neighbor<R: Rng>(
    base: &VoterDataset,
    kind: Neighborhood,
    d: usize,
    rng: &mut R,
) -> Result<VoterDataset> {
    match kind {
        Neighborhood::VoterLevel => {
            let beta = PreferenceVector::new(
                (0..d)
                    .map(|_| rng.random_range(-1.0..1.0) + Distribution::<f64>::sample(&StandardNormal, &mut *rng))
                    .collect(),
            );
            generate_voter_records(&beta, base.voter_id, base.len(), rng)
        }
        Neighborhood::RecordLevel => {
            let mut out = base.clone();
            let j = rng.random_range(0..out.len());
            out.records[j] = if rng.random_bool(0.5) {
                out.records[j].swapped()
            } else {
                let beta = PreferenceVector::new(
                    (0..d).map(|_| StandardNormal.sample(&mut *rng)).collect(),
                );
                generate_voter_records(&beta, base.voter_id, 1, rng)?.records.remove(0)
            };
            Ok(out)
        }
    }
}

fn fit_all(voters: &[VoterDataset], setup: &SensitivitySetup) -> Result<Vec<PreferenceVector>> {
    voters
        .iter()
        .map(|v| fit_voter(v, setup.bound, &setup.solver).map(|f| f.beta))
        .collect()
}

/// Runs `random_pairs` random and `adversarial_pairs` worst-case neighbour
/// pairs and reports the largest ℓ1 deviation of the target statistic.
pub fn empirical_sensitivity_check(
    target: SensitivityTarget,
    kind: Neighborhood,
    random_pairs: usize,
    adversarial_pairs: usize,
    setup: &SensitivitySetup,
    seed: u64,
) -> Result<SensitivityReport> {
    if random_pairs + adversarial_pairs == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let n_voters = match target {
        SensitivityTarget::SocietyMean => setup.n_voters,
        SensitivityTarget::SingleVoter => 1,
    };
    let spec = SocietySpec {
        n_voters,
        n_records: setup.n_records,
        d: setup.d,
        seed: derive_seed(seed, &[0]),
    };
    let (_, corpus) = generate_corpus(&spec)?;
    let base_fits = fit_all(&corpus.voters, setup)?;
    let base_mean = aggregate_mean(&base_fits)?;
    let mut rng = RngStream::new(seed, 0, Purpose::Neighbors).rng();

    // Deviation of the target statistic when voter `i` switches from `a` to `b`.
    let deviation = |i: usize, a: &VoterDataset, b: &VoterDataset| -> Result<f64> {
        let fa = fit_voter(a, setup.bound, &setup.solver)?.beta;
        let fb = fit_voter(b, setup.bound, &setup.solver)?.beta;
        let mut left = base_fits.clone();
        let mut right = base_fits.clone();
        left[i] = fa;
        right[i] = fb;
        Ok(l1_distance(
            &aggregate_mean(&left)?.beta,
            &aggregate_mean(&right)?.beta,
        ))
    };

    let mut max_random: f64 = 0.0;
    for _ in 0..random_pairs {
        let i = rng.random_range(0..n_voters);
        let neighbor = random_neighbor(&corpus.voters[i], kind, setup.d, &mut rng)?;
        let fb = fit_voter(&neighbor, setup.bound, &setup.solver)?.beta;
        let mut other = base_fits.clone();
        other[i] = fb;
        let dev = l1_distance(&base_mean.beta, &aggregate_mean(&other)?.beta);
        max_random = max_random.max(dev);
    }

    let mut max_adversarial: f64 = 0.0;
    for _ in 0..adversarial_pairs {
        let i = rng.random_range(0..n_voters);
        let (a, b) = adversarial_pair(i as u64, setup.n_records, setup.d, &mut rng);
        max_adversarial = max_adversarial.max(deviation(i, &a, &b)?);
    }

    Ok(SensitivityReport {
        theoretical_bound: 2.0 * setup.bound / n_voters as f64,
        max_random,
        max_adversarial,
        pairs: random_pairs + adversarial_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(n_voters: usize) -> SensitivitySetup {
        SensitivitySetup {
            n_voters,
            n_records: 20,
            d: 4,
            bound: 2.0,
            solver: SolverConfig::default(),
        }
    }

    #[test]
    fn adversarial_pair_differs_in_first_record_only() {
        let mut rng = RngStream::new(1, 0, Purpose::Neighbors).rng();
        let (a, b) = adversarial_pair(0, 5, 3, &mut rng);
        assert_eq!(a.records[1..], b.records[1..]);
        assert_ne!(a.records[0], b.records[0]);
    }

    #[test]
    fn society_mean_worst_case_approaches_bound() {
        let r = empirical_sensitivity_check(
            SensitivityTarget::SocietyMean,
            Neighborhood::RecordLevel,
            10,
            5,
            &setup(10),
            3,
        )
        .unwrap();
        assert!((r.theoretical_bound - 0.4).abs() < 1e-15);
        assert!(r.max_observed() <= 0.4 + 1e-4);
        assert!(r.max_adversarial >= 0.95 * 0.4, "{r:?}");
        assert!(r.max_random <= 0.4 + 1e-4);
    }

    #[test]
    fn single_voter_voter_level() {
        let r = empirical_sensitivity_check(
            SensitivityTarget::SingleVoter,
            Neighborhood::VoterLevel,
            10,
            3,
            &setup(1),
            4,
        )
        .unwrap();
        assert_eq!(r.theoretical_bound, 4.0);
        assert!(r.max_observed() <= 4.0 + 1e-4);
        assert!(r.max_adversarial >= 0.95 * 4.0);
    }
}
