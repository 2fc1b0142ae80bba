//! Projected gradient ascent over an ℓ1 ball with Armijo backtracking.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, linf_distance};

use super::projection::project_unchecked;

/// Smallest step tried before a line search is abandoned.
const MIN_STEP: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub max_iters: usize,
    pub step_init: f64,
    pub armijo_c: f64,
    pub armijo_shrink: f64,
    /// Stop once the accepted step's ∞-norm falls below this.
    pub tol_step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 5000,
            step_init: 1.0,
            armijo_c: 1e-4,
            armijo_shrink: 0.5,
            tol_step: 1e-8,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(format!("solver: {m}")));
        if self.max_iters < 1 {
            return bad("max_iters must be >= 1");
        }
        if !(self.step_init > 0.0 && self.step_init.is_finite()) {
            return bad("step_init must be positive");
        }
        if !(self.armijo_c > 0.0 && self.armijo_c < 1.0) {
            return bad("armijo_c must lie in (0, 1)");
        }
        if !(self.armijo_shrink > 0.0 && self.armijo_shrink < 1.0) {
            return bad("armijo_shrink must lie in (0, 1)");
        }
        if !(self.tol_step > 0.0 && self.tol_step.is_finite()) {
            return bad("tol_step must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct AscentOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective value after every accepted iterate, starting with `x0`.
    pub trace: Vec<f64>,
}

/// Maximises a concave `objective` over `{‖x‖₁ ≤ bound}` starting from `x0`.
///
/// Each iteration tries `x⁺ = P(x + t·∇f(x))`, halving `t` (by
/// `armijo_shrink`) until `f(x⁺) ≥ f(x) + c·∇f(x)ᵀ(x⁺ − x)`. The first trial
/// step of an iteration is twice the last accepted one, capped at
/// `step_init`. Accepted iterates never decrease the objective.
pub fn projected_gradient_ascent<F, G>(
    objective: F,
    gradient: G,
    x0: &[f64],
    bound: f64,
    cfg: &SolverConfig,
) -> AscentOutcome
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let mut x = project_unchecked(x0, bound);
    let mut fx = objective(&x);
    let mut trace = vec![fx];
    let mut step = cfg.step_init;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iters {
        iterations += 1;
        let g = gradient(&x);
        let mut t = step;
        let accepted = loop {
            let trial: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi + t * gi).collect();
            let cand = project_unchecked(&trial, bound);
            let delta: Vec<f64> = cand.iter().zip(&x).map(|(a, b)| a - b).collect();
            let f_cand = objective(&cand);
            if f_cand.is_finite() && f_cand >= fx + cfg.armijo_c * dot(&g, &delta) {
                break Some((cand, f_cand));
            }
            t *= cfg.armijo_shrink;
            if t < MIN_STEP {
                break None;
            }
        };
        let Some((cand, f_cand)) = accepted else {
            // No ascent step exists at machine precision: x is stationary.
            converged = true;
            break;
        };
        let moved = linf_distance(&cand, &x);
        x = cand;
        fx = f_cand;
        trace.push(fx);
        step = (2.0 * t).min(cfg.step_init);
        if moved < cfg.tol_step {
            converged = true;
            break;
        }
    }

    AscentOutcome {
        x,
        value: fx,
        iterations,
        converged,
        trace,
    }
}
