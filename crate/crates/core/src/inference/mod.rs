//! ℓ1-constrained maximum-likelihood estimation of voter preferences under
//! the probit pairwise-choice model, and the non-private society mean.
//!
//! The log-likelihood of voter data `D = {(X_j, Z_j)}` is
//! `L(β, D) = Σ_j ln Φ(βᵀ(X_j − Z_j))`. It is concave in β, so projected
//! gradient ascent over `‖β‖₁ ≤ B` from `β = 0` reaches the constrained
//! maximum.

mod ascent;
pub mod normal;
mod projection;

pub use ascent::{projected_gradient_ascent, AscentOutcome, SolverConfig};
pub use normal::{inverse_mills, ln_std_normal_cdf, std_normal_cdf, std_normal_pdf};
pub use projection::project_l1_ball;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::dot;
use crate::types::{PreferenceVector, VoterDataset, L1_SLACK};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub beta: PreferenceVector,
    pub final_objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn checked_differences(beta: &PreferenceVector, data: &VoterDataset) -> Result<Vec<Vec<f64>>> {
    if !beta.is_finite() {
        return Err(Error::NonFinite("preference vector".into()));
    }
    let diffs = data.differences()?;
    for v in &diffs {
        check_dim(beta.dim(), v.len())?;
    }
    Ok(diffs)
}

pub(crate) fn ll_from_diffs(beta: &[f64], diffs: &[Vec<f64>]) -> f64 {
    diffs.iter().map(|v| ln_std_normal_cdf(dot(beta, v))).sum()
}

pub(crate) fn ll_grad_from_diffs(beta: &[f64], diffs: &[Vec<f64>]) -> Vec<f64> {
    let mut g = vec![0.0; beta.len()];
    for v in diffs {
        let w = inverse_mills(dot(beta, v));
        for (gk, vk) in g.iter_mut().zip(v) {
            *gk += w * vk;
        }
    }
    g
}

/// `Σ_j ln Φ(βᵀ V_j)`.
pub fn log_likelihood(beta: &PreferenceVector, data: &VoterDataset) -> Result<f64> {
    let diffs = checked_differences(beta, data)?;
    Ok(ll_from_diffs(&beta.beta, &diffs))
}

/// `Σ_j [φ(βᵀV_j) / Φ(βᵀV_j)]·V_j`.
pub fn log_likelihood_gradient(beta: &PreferenceVector, data: &VoterDataset) -> Result<Vec<f64>> {
    let diffs = checked_differences(beta, data)?;
    Ok(ll_grad_from_diffs(&beta.beta, &diffs))
}

fn check_bound(bound: f64) -> Result<()> {
    if bound > 0.0 && bound.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "norm bound B must be positive and finite, got {bound}"
        )))
    }
}

/// Fits `argmax_{‖β‖₁ ≤ B} L(β, D)` from `β = 0`.
///
/// Failure to converge within `max_iters` is reported through
/// `converged = false`; the last iterate is still returned.
pub fn fit_voter(data: &VoterDataset, bound: f64, cfg: &SolverConfig) -> Result<FitResult> {
    check_bound(bound)?;
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::Empty(format!("voter {} has no records", data.voter_id)));
    }
    let d = data.dim();
    let diffs = checked_differences(&PreferenceVector::zeros(d), data)?;
    let out = projected_gradient_ascent(
        |b| ll_from_diffs(b, &diffs),
        |b| ll_grad_from_diffs(b, &diffs),
        &vec![0.0; d],
        bound,
        cfg,
    );
    if !out.value.is_finite() {
        return Err(Error::Numerical(format!(
            "non-finite objective for voter {}",
            data.voter_id
        )));
    }
    Ok(FitResult {
        beta: PreferenceVector::with_bound(out.x, bound)?,
        final_objective: out.value,
        iterations: out.iterations,
        converged: out.converged,
    })
}

/// Componentwise mean `(1/N) Σ_i β_i`.
///
/// The result inherits the largest ℓ1 bound among the inputs when every
/// input carries one (the ball is convex).
pub fn aggregate_mean(betas: &[PreferenceVector]) -> Result<PreferenceVector> {
    let first = betas
        .first()
        .ok_or_else(|| Error::Empty("no preference vectors to aggregate".into()))?;
    let d = first.dim();
    let mut sum = vec![0.0; d];
    for b in betas {
        check_dim(d, b.dim())?;
        for (s, x) in sum.iter_mut().zip(&b.beta) {
            *s += x;
        }
    }
    let n = betas.len() as f64;
    let mean: Vec<f64> = sum.into_iter().map(|s| s / n).collect();
    let bound = betas
        .iter()
        .map(|b| b.l1_bound)
        .try_fold(f64::NEG_INFINITY, |m, b| b.map(|b| m.max(b)));
    Ok(match bound {
        Some(b) if crate::linalg::l1_norm(&mean) <= b + L1_SLACK => PreferenceVector {
            beta: mean,
            l1_bound: Some(b),
        },
        _ => PreferenceVector::new(mean),
    })
}
