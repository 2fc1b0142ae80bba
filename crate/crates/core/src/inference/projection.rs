use crate::error::{Error, Result};
use crate::linalg::l1_norm;

/// Euclidean projection of `v` onto the ℓ1 ball `{x : ‖x‖₁ ≤ bound}`.
///
/// Points already inside are returned unchanged. Otherwise the result is the
/// soft-threshold `sign(v_k)·max(|v_k| − θ, 0)` where θ is found from the
/// sorted magnitudes so that the output lies on the sphere `‖x‖₁ = bound`.
pub fn project_l1_ball(v: &[f64], bound: f64) -> Result<Vec<f64>> {
    if !(bound > 0.0 && bound.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "l1 bound must be positive and finite, got {bound}"
        )));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("vector to project".into()));
    }
    Ok(project_unchecked(v, bound))
}

pub(crate) fn project_unchecked(v: &[f64], bound: f64) -> Vec<f64> {
    if l1_norm(v) <= bound {
        return v.to_vec();
    }
    let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    mags.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &u) in mags.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - bound) / (j + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    v.iter()
        .map(|&x| x.signum() * (x.abs() - theta).max(0.0))
        .collect()
}
