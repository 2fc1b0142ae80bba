use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_dim, Error, Result};
use crate::linalg::dot;
use crate::rng::{Purpose, RngStream};
use crate::types::{choice_from_margin, FeatureVector, PairwiseComparison, PreferenceVector};

/// Fresh scenario pairs used to compare the choices two parameters induce.
#[derive(Debug, Clone, PartialEq)]
pub struct TestScenarioSet {
    pub scenarios: Vec<PairwiseComparison>,
    pub seed: u64,
    diffs: Vec<Vec<f64>>,
}

impl TestScenarioSet {
    pub fn from_pairs(scenarios: Vec<PairwiseComparison>, seed: u64) -> Result<Self> {
        let first = scenarios
            .first()
            .ok_or_else(|| Error::Empty("test scenario set".into()))?;
        let d = first.dim();
        let diffs = scenarios
            .iter()
            .map(|p| {
                check_dim(d, p.chosen.dim())?;
                check_dim(d, p.rejected.dim())?;
                Ok(p.chosen.0.iter().zip(&p.rejected.0).map(|(a, b)| a - b).collect())
            })
            .collect::<Result<Vec<Vec<f64>>>>()?;
        Ok(Self {
            scenarios,
            seed,
            diffs,
        })
    }

    pub fn dim(&self) -> usize {
        self.diffs[0].len()
    }

    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    /// `x₁ − x₂` for every scenario.
    pub fn differences(&self) -> &[Vec<f64>] {
        &self.diffs
    }
}

/// `count` i.i.d. pairs `(x₁, x₂)` with both alternatives drawn from
/// `N(0, I_d)`, from stream `(0, TestScenarios)` of `seed`.
pub fn generate_test_scenarios(d: usize, count: usize, seed: u64) -> Result<TestScenarioSet> {
    if count < 1 || d < 1 {
        return Err(Error::InvalidParameter(
            "test scenarios need d >= 1 and T >= 1".into(),
        ));
    }
    let mut rng = RngStream::new(seed, 0, Purpose::TestScenarios).rng();
    let mut draw = || -> FeatureVector {
        FeatureVector((0..d).map(|_| StandardNormal.sample(&mut rng)).collect())
    };
    let scenarios = (0..count)
        .map(|_| {
            let x1 = draw();
            let x2 = draw();
            PairwiseComparison {
                chosen: x1,
                rejected: x2,
            }
        })
        .collect();
    TestScenarioSet::from_pairs(scenarios, seed)
}

fn check_beta(b: &PreferenceVector, s: &TestScenarioSet) -> Result<()> {
    check_dim(s.dim(), b.dim())?;
    if !b.is_finite() {
        return Err(Error::NonFinite("preference vector".into()));
    }
    Ok(())
}

/// Fraction of scenarios on which both parameters predict the same
/// alternative.
pub fn accuracy(
    reference: &PreferenceVector,
    candidate: &PreferenceVector,
    scenarios: &TestScenarioSet,
) -> Result<f64> {
    check_beta(reference, scenarios)?;
    check_beta(candidate, scenarios)?;
    let agree = scenarios
        .differences()
        .iter()
        .filter(|v| {
            choice_from_margin(dot(&reference.beta, v)) == choice_from_margin(dot(&candidate.beta, v))
        })
        .count();
    Ok(agree as f64 / scenarios.len() as f64)
}

/// `accuracy(ground, noisy) / accuracy(ground, nonprivate)`.
pub fn accuracy_ratio(
    ground: &PreferenceVector,
    nonprivate: &PreferenceVector,
    noisy: &PreferenceVector,
    scenarios: &TestScenarioSet,
) -> Result<f64> {
    let base = accuracy(ground, nonprivate, scenarios)?;
    if base == 0.0 {
        return Err(Error::Numerical(
            "baseline accuracy is zero; accuracy ratio undefined".into(),
        ));
    }
    Ok(accuracy(ground, noisy, scenarios)? / base)
}
