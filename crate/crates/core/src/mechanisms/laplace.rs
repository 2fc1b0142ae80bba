use rand::Rng;

/// One zero-mean Laplace draw of the given scale, by inverse CDF:
/// `u ~ U(−1/2, 1/2)`, `x = −scale·sign(u)·ln(1 − 2|u|)`.
pub fn sample_laplace<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    debug_assert!(scale > 0.0);
    let u = loop {
        let u = rng.random::<f64>() - 0.5;
        // u = −1/2 maps to an infinite draw.
        if u > -0.5 {
            break u;
        }
    };
    -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
}

/// Laplace CDF with location 0.
pub fn laplace_cdf(x: f64, scale: f64) -> f64 {
    if x < 0.0 {
        0.5 * (x / scale).exp()
    } else {
        1.0 - 0.5 * (-x / scale).exp()
    }
}
