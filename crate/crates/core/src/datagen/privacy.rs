use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{Purpose, RngStream};

/// Privacy attitude of a voter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrivacyGroup {
    Conservative,
    Moderate,
    Liberal,
}

impl PrivacyGroup {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Conservative => "conservative",
            Self::Moderate => "moderate",
            Self::Liberal => "liberal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacyAssignment {
    pub voter_id: u64,
    pub group: PrivacyGroup,
    pub epsilon: f64,
}

/// Group fractions and budget endpoints for personalized privacy.
///
/// Conservative voters draw ε from `[eps_c, eps_m]`, moderate voters from
/// `[eps_m, eps_l]`, both rounded to the nearest hundredth; liberal voters
/// use `eps_l`. The liberal fraction is `1 − f_c − f_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PersonalizedSpec {
    pub f_c: f64,
    pub f_m: f64,
    pub eps_c: f64,
    pub eps_m: f64,
    pub eps_l: f64,
}

impl Default for PersonalizedSpec {
    fn default() -> Self {
        Self {
            f_c: 0.54,
            f_m: 0.36,
            eps_c: 0.01,
            eps_m: 0.2,
            eps_l: 1.0,
        }
    }
}

impl PersonalizedSpec {
    pub fn validate(&self) -> Result<()> {
        let fracs_ok = self.f_c >= 0.0 && self.f_m >= 0.0 && self.f_c + self.f_m <= 1.0 + 1e-12;
        if !fracs_ok {
            return Err(Error::Config(format!(
                "group fractions must be non-negative with f_c + f_m <= 1 (got {} + {})",
                self.f_c, self.f_m
            )));
        }
        let order_ok = self.eps_c > 0.0
            && self.eps_c <= self.eps_m
            && self.eps_m <= self.eps_l
            && self.eps_l.is_finite();
        if !order_ok {
            return Err(Error::Config(format!(
                "need 0 < eps_c <= eps_m <= eps_l (got {}, {}, {})",
                self.eps_c, self.eps_m, self.eps_l
            )));
        }
        Ok(())
    }
}

/// Rounds to two decimals, halves away from zero.
pub fn round_hundredth(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// `⌊f·N⌋`, tolerant of representation error in `f` (0.29·100 counts as 29).
fn floor_count(f: f64, n: usize) -> usize {
    (f * n as f64 + 1e-9).floor() as usize
}

/// Randomly partitions voters `0..n` into the three groups and draws their
/// budgets from stream `(0, PrivacyGroups)` of `seed`. The result is sorted
/// by voter id.
pub fn assign_privacy_groups(n: usize, spec: &PersonalizedSpec, seed: u64) -> Result<Vec<PrivacyAssignment>> {
    spec.validate()?;
    let mut rng = RngStream::new(seed, 0, Purpose::PrivacyGroups).rng();
    let mut order: Vec<u64> = (0..n as u64).collect();
    order.shuffle(&mut rng);
    let n_c = floor_count(spec.f_c, n);
    let n_m = floor_count(spec.f_m, n).min(n - n_c);
    let mut out: Vec<PrivacyAssignment> = order
        .iter()
        .enumerate()
        .map(|(pos, &voter_id)| {
            let (group, epsilon) = if pos < n_c {
                let e = rng.random_range(spec.eps_c..=spec.eps_m);
                (PrivacyGroup::Conservative, round_hundredth(e))
            } else if pos < n_c + n_m {
                let e = rng.random_range(spec.eps_m..=spec.eps_l);
                (PrivacyGroup::Moderate, round_hundredth(e))
            } else {
                (PrivacyGroup::Liberal, spec.eps_l)
            };
            PrivacyAssignment {
                voter_id,
                group,
                epsilon,
            }
        })
        .collect();
    out.sort_by_key(|a| a.voter_id);
    Ok(out)
}
