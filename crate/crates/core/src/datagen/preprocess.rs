use crate::types::{Corpus, FeatureVector};

/// Largest ℓ2 norm an alternative may have after preprocessing.
pub const ALTERNATIVE_NORM_CAP: f64 = 0.5;

/// Slack for rounding in an already clipped vector; keeps clipping idempotent.
const CLIP_SLACK: f64 = 1e-15;

/// Rescales `x` onto the sphere of radius 1/2 if it lies outside it.
pub fn clip_alternative(x: &FeatureVector) -> FeatureVector {
    let norm = x.l2_norm();
    if norm <= ALTERNATIVE_NORM_CAP + CLIP_SLACK {
        return x.clone();
    }
    let s = ALTERNATIVE_NORM_CAP / norm;
    FeatureVector(x.0.iter().map(|v| v * s).collect())
}

/// Clips every alternative of every record to ℓ2 norm ≤ 1/2, so that every
/// difference vector has ℓ2 norm ≤ 1.
///
/// The rule looks at one alternative at a time and never at the rest of the
/// corpus.
pub fn preprocess_scale(corpus: &Corpus) -> Corpus {
    let mut out = corpus.clone();
    for voter in &mut out.voters {
        for r in &mut voter.records {
            r.chosen = clip_alternative(&r.chosen);
            r.rejected = clip_alternative(&r.rejected);
        }
    }
    out.preprocessed = true;
    out
}
