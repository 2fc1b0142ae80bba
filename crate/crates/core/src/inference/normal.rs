//! Standard normal distribution helpers.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// `ln(2π) / 2`.
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Below this argument the log-CDF and inverse Mills ratio switch to the
/// continued-fraction tail form.
const TAIL_CUTOFF: f64 = -6.0;

const MILLS_TERMS: u32 = 80;

pub fn std_normal_pdf(s: f64) -> f64 {
    (-0.5 * s * s).exp() / (2.0 * PI).sqrt()
}

/// Φ(s), the standard normal CDF.
pub fn std_normal_cdf(s: f64) -> f64 {
    0.5 * libm::erfc(-s * FRAC_1_SQRT_2)
}

/// Mills ratio `R(x) = (1 − Φ(x)) / φ(x)` for large positive `x`, by
/// backward evaluation of its continued fraction
/// `1/(x + 1/(x + 2/(x + 3/(x + …))))`.
fn mills_ratio_tail(x: f64) -> f64 {
    let mut t = x;
    for k in (1..=MILLS_TERMS).rev() {
        t = x + f64::from(k) / t;
    }
    1.0 / t
}

/// `ln Φ(z)`, accurate in both tails.
pub fn ln_std_normal_cdf(z: f64) -> f64 {
    if z < TAIL_CUTOFF {
        -0.5 * z * z - HALF_LN_TWO_PI + mills_ratio_tail(-z).ln()
    } else if z > 0.0 {
        // Φ(z) = 1 − Φ(−z); ln1p keeps precision as Φ(z) → 1.
        (-0.5 * libm::erfc(z * FRAC_1_SQRT_2)).ln_1p()
    } else {
        std_normal_cdf(z).ln()
    }
}

/// `φ(z) / Φ(z)`, the derivative of `ln Φ(z)`.
pub fn inverse_mills(z: f64) -> f64 {
    if z < TAIL_CUTOFF {
        1.0 / mills_ratio_tail(-z)
    } else {
        std_normal_pdf(z) / std_normal_cdf(z)
    }
}
