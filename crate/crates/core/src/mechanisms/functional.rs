//! Functional mechanism for record-level local privacy.
//!
//! Each record contributes `ln Φ(βᵀV)`, which is replaced by its second-order
//! Taylor expansion at 0:
//!
//! ```text
//! ln Φ(z) ≈ ln(1/2) + √(2/π)·z − z²/π
//! ```
//!
//! Summing over records gives a quadratic `c0 + c1ᵀβ + βᵀQβ` with
//! `Q = −(1/π) Σ_j V_j V_jᵀ`. Its coefficients, viewed as one number per
//! monomial of degree ≤ 2, are perturbed with Laplace noise, the quadratic
//! part is made negative semidefinite, and the result is maximised over the
//! ℓ1 ball.

use std::f64::consts::{FRAC_2_PI, PI};

use rand::Rng;

use crate::error::{Error, Result};
use crate::inference::{projected_gradient_ascent, SolverConfig};
use crate::linalg::{dot, jacobi_eigen, l2_norm, SymMatrix};
use crate::rng::{Purpose, RngStream};
use crate::types::{PreferenceVector, PrivacyBudget, VoterDataset};

use super::laplace::sample_laplace;

/// Largest eigenvalue tolerated in the quadratic part after repair.
pub const CONCAVITY_TOL: f64 = 1e-9;

/// Records must satisfy `‖V‖₂ ≤ 1` up to this slack.
const PREPROCESS_SLACK: f64 = 1e-12;

/// Coefficients of a degree-≤2 polynomial in β: `c0 + c1ᵀβ + βᵀQβ`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyObjective {
    pub c0: f64,
    pub c1: Vec<f64>,
    pub quad: SymMatrix,
}

impl NoisyObjective {
    pub fn dim(&self) -> usize {
        self.c1.len()
    }

    pub fn evaluate(&self, beta: &[f64]) -> f64 {
        self.c0 + self.evaluate_nonconstant(beta)
    }

    /// `c1ᵀβ + βᵀQβ`, the part that determines the maximiser.
    pub fn evaluate_nonconstant(&self, beta: &[f64]) -> f64 {
        dot(&self.c1, beta) + self.quad.quad_form(beta)
    }

    pub fn gradient(&self, beta: &[f64]) -> Vec<f64> {
        self.quad
            .mul_vec(beta)
            .into_iter()
            .zip(&self.c1)
            .map(|(qb, c)| c + 2.0 * qb)
            .collect()
    }

    /// One coefficient per monomial, in noise order: the constant, then
    /// `β[k]` for each k, then `β[k]β[l]` for `k ≤ l` in row-major upper
    /// triangle order. Off-diagonal monomials carry `2·Q[k][l]`.
    pub fn monomial_coefficients(&self) -> Vec<f64> {
        let d = self.dim();
        let mut out = Vec::with_capacity(1 + d + d * (d + 1) / 2);
        out.push(self.c0);
        out.extend_from_slice(&self.c1);
        for k in 0..d {
            for l in k..d {
                let q = self.quad.get(k, l);
                out.push(if k == l { q } else { 2.0 * q });
            }
        }
        out
    }

    /// Largest eigenvalue of the quadratic part.
    pub fn max_eigenvalue(&self) -> f64 {
        jacobi_eigen(&self.quad)
            .values
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Second-order Taylor coefficients of `Σ_j ln Φ(βᵀV_j)` at β = 0.
///
/// Requires preprocessed data: every difference vector must have
/// `‖V‖₂ ≤ 1`.
pub fn taylor_coefficients(data: &VoterDataset) -> Result<NoisyObjective> {
    if data.is_empty() {
        return Err(Error::Empty(format!("voter {} has no records", data.voter_id)));
    }
    let d = data.dim();
    let diffs = data.differences()?;
    if diffs.iter().any(|v| l2_norm(v) > 1.0 + PREPROCESS_SLACK) {
        return Err(Error::NotPreprocessed);
    }
    let lin = FRAC_2_PI.sqrt();
    let mut c1 = vec![0.0; d];
    let mut quad = SymMatrix::zeros(d);
    for v in &diffs {
        for k in 0..d {
            c1[k] += lin * v[k];
            for l in k..d {
                quad.add(k, l, -v[k] * v[l] / PI);
            }
        }
    }
    Ok(NoisyObjective {
        c0: diffs.len() as f64 * 0.5f64.ln(),
        c1,
        quad,
    })
}

/// `2(√(2d/π) + d/π)`, an upper bound on the ℓ1 change of the degree-1 and
/// degree-2 coefficients when one record of a preprocessed dataset changes.
pub fn functional_sensitivity_bound(d: usize) -> f64 {
    let d = d as f64;
    2.0 * ((2.0 * d / PI).sqrt() + d / PI)
}

/// Adds one Laplace draw of `scale` to every monomial coefficient in the
/// order documented on [`NoisyObjective::monomial_coefficients`].
pub fn perturb_coefficients<R: Rng + ?Sized>(
    obj: &NoisyObjective,
    scale: f64,
    rng: &mut R,
) -> NoisyObjective {
    let d = obj.dim();
    let mut out = obj.clone();
    out.c0 += sample_laplace(scale, rng);
    for c in out.c1.iter_mut() {
        *c += sample_laplace(scale, rng);
    }
    for k in 0..d {
        for l in k..d {
            let eta = sample_laplace(scale, rng);
            if k == l {
                out.quad.add(k, k, eta);
            } else {
                // The monomial coefficient is 2·Q[k][l].
                out.quad.add(k, l, 0.5 * eta);
            }
        }
    }
    out
}

/// Clips positive eigenvalues of the quadratic part to zero.
pub fn repair_concavity(obj: &NoisyObjective) -> NoisyObjective {
    let eig = jacobi_eigen(&obj.quad);
    if eig.values.iter().all(|&v| v <= 0.0) {
        return obj.clone();
    }
    let clipped: Vec<f64> = eig.values.iter().map(|&v| v.min(0.0)).collect();
    NoisyObjective {
        c0: obj.c0,
        c1: obj.c1.clone(),
        quad: eig.reconstruct_with(&clipped),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalFit {
    pub beta: PreferenceVector,
    /// Value of the (noisy, repaired) objective at `beta`.
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Maximises a concave quadratic objective over `‖β‖₁ ≤ bound`.
///
/// The constant term plays no part in the search, so shifting `c0` never
/// changes the returned β.
pub fn maximize_objective(
    obj: &NoisyObjective,
    bound: f64,
    cfg: &SolverConfig,
) -> Result<FunctionalFit> {
    cfg.validate()?;
    if !(bound > 0.0 && bound.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "norm bound B must be positive and finite, got {bound}"
        )));
    }
    let out = projected_gradient_ascent(
        |b| obj.evaluate_nonconstant(b),
        |b| obj.gradient(b),
        &vec![0.0; obj.dim()],
        bound,
        cfg,
    );
    Ok(FunctionalFit {
        beta: PreferenceVector::with_bound(out.x, bound)?,
        objective: obj.c0 + out.value,
        iterations: out.iterations,
        converged: out.converged,
    })
}

/// Record-level local release of one voter's preference vector via the
/// functional mechanism, with noise scale `Δ_upper / ε_i`.
///
/// The noise is drawn from the `(voter_id, FunctionalNoise)` stream of
/// `master_seed`.
pub fn rldp_functional_fit(
    data: &VoterDataset,
    epsilon: PrivacyBudget,
    bound: f64,
    cfg: &SolverConfig,
    master_seed: u64,
) -> Result<FunctionalFit> {
    let exact = taylor_coefficients(data)?;
    let scale = functional_sensitivity_bound(exact.dim()) / epsilon.epsilon();
    let mut rng = RngStream::new(master_seed, data.voter_id, Purpose::FunctionalNoise).rng();
    let noisy = perturb_coefficients(&exact, scale, &mut rng);
    maximize_objective(&repair_concavity(&noisy), bound, cfg)
}

/// The same pipeline without noise. Not private; for testing and baselines.
pub fn functional_fit_without_noise(
    data: &VoterDataset,
    bound: f64,
    cfg: &SolverConfig,
) -> Result<FunctionalFit> {
    let exact = taylor_coefficients(data)?;
    maximize_objective(&repair_concavity(&exact), bound, cfg)
}
