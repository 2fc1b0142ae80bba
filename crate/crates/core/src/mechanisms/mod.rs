//! Privacy mechanisms for releasing preference vectors.
//!
//! * [`vlcp_release`]: trusted aggregator adds `Lap(2B/(Nε))` noise to the
//!   mean of the fitted vectors (voter- and record-level, centralized).
//! * [`vldp_perturb_voter`]: each voter adds `Lap(2B/ε_i)` noise to their
//!   own fitted vector (voter- and record-level, distributed).
//! * [`rldp_functional_fit`]: each voter perturbs the coefficients of a
//!   quadratic surrogate of their log-likelihood (record-level,
//!   distributed).

mod functional;
mod laplace;

pub use functional::{
    functional_fit_without_noise, functional_sensitivity_bound, maximize_objective,
    perturb_coefficients, repair_concavity, rldp_functional_fit, taylor_coefficients,
    FunctionalFit, NoisyObjective, CONCAVITY_TOL,
};
pub use laplace::{laplace_cdf, sample_laplace};

use crate::error::{Error, Result};
use crate::inference::aggregate_mean;
use crate::rng::{Purpose, RngStream};
use crate::types::{PreferenceVector, PrivacyBudget, L1_SLACK};

/// Per-coordinate scale `2B/(Nε)` of the centralized release.
pub fn vlcp_noise_scale(bound: f64, n_voters: usize, epsilon: PrivacyBudget) -> f64 {
    2.0 * bound / (n_voters as f64 * epsilon.epsilon())
}

/// Per-coordinate scale `2B/ε_i` of the distributed release.
pub fn vldp_noise_scale(bound: f64, epsilon: PrivacyBudget) -> f64 {
    2.0 * bound / epsilon.epsilon()
}

fn check_within_bound(beta: &PreferenceVector, bound: f64) -> Result<()> {
    if !(bound > 0.0 && bound.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "norm bound B must be positive and finite, got {bound}"
        )));
    }
    let norm = beta.l1_norm();
    if !beta.is_finite() {
        return Err(Error::NonFinite("preference vector".into()));
    }
    if norm > bound + L1_SLACK {
        return Err(Error::NormBound { norm, bound });
    }
    Ok(())
}

fn add_laplace_noise(beta: &[f64], scale: f64, stream: RngStream) -> Vec<f64> {
    let mut rng = stream.rng();
    beta.iter()
        .map(|x| x + sample_laplace(scale, &mut rng))
        .collect()
}

/// Centralized release of the society mean: `mean(β_i) + R`,
/// `R ~ [Lap(2B/(Nε))]^d`, drawn from stream `(0, CentralNoise)`.
///
/// Every input must satisfy `‖β_i‖₁ ≤ B`; the sensitivity argument depends
/// on it, so violations are rejected rather than clipped.
pub fn vlcp_release(
    betas: &[PreferenceVector],
    epsilon: PrivacyBudget,
    bound: f64,
    master_seed: u64,
) -> Result<PreferenceVector> {
    for b in betas {
        check_within_bound(b, bound)?;
    }
    let mean = aggregate_mean(betas)?;
    let scale = vlcp_noise_scale(bound, betas.len(), epsilon);
    Ok(PreferenceVector::new(add_laplace_noise(
        &mean.beta,
        scale,
        RngStream::new(master_seed, 0, Purpose::CentralNoise),
    )))
}

/// Distributed release of one voter's vector: `β_i + R`,
/// `R ~ [Lap(2B/ε_i)]^d`, drawn from stream `(voter_id, VoterNoise)`.
pub fn vldp_perturb_voter(
    beta: &PreferenceVector,
    voter_id: u64,
    epsilon: PrivacyBudget,
    bound: f64,
    master_seed: u64,
) -> Result<PreferenceVector> {
    check_within_bound(beta, bound)?;
    let scale = vldp_noise_scale(bound, epsilon);
    Ok(PreferenceVector::new(add_laplace_noise(
        &beta.beta,
        scale,
        RngStream::new(master_seed, voter_id, Purpose::VoterNoise),
    )))
}

/// `α = (2B/(Nε))·ln(d/γ)`: with probability at least `1 − γ` the
/// centralized release is within α of the true mean in ∞-norm. `N = 1`
/// gives the per-voter bound of the distributed release.
pub fn utility_bound_alpha(bound: f64, n_voters: usize, epsilon: f64, d: usize, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in (0, 1), got {gamma}"
        )));
    }
    if !(bound > 0.0 && epsilon > 0.0 && n_voters >= 1 && d >= 1) {
        return Err(Error::InvalidParameter(
            "B, N, epsilon and d must all be positive".into(),
        ));
    }
    Ok(2.0 * bound / (n_voters as f64 * epsilon) * (d as f64 / gamma).ln())
}
