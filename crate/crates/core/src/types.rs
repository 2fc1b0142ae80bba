//! Domain types shared by every stage of the pipeline: feature vectors,
//! pairwise comparisons, per-voter datasets, corpora, preference vectors
//! and privacy budgets.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Diagnostic, Error, Result};
use crate::linalg::{dot, l1_norm};

/// Largest supported feature dimension.
pub const MAX_DIM: usize = 1024;

/// Slack allowed when checking `‖β‖₁ ≤ B`.
pub const L1_SLACK: f64 = 1e-9;

/// A dense vector of feature intensities describing one alternative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() > MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "dimension {} exceeds maximum {MAX_DIM}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("feature vector".into()));
        }
        Ok(Self(values))
    }

    pub fn zeros(d: usize) -> Self {
        Self(vec![0.0; d])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn l2_norm(&self) -> f64 {
        crate::linalg::l2_norm(&self.0)
    }
}

impl From<Vec<f64>> for FeatureVector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

/// One decision: the voter chose `chosen` (X) over `rejected` (Z).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseComparison {
    pub chosen: FeatureVector,
    pub rejected: FeatureVector,
}

impl PairwiseComparison {
    pub fn new(chosen: FeatureVector, rejected: FeatureVector) -> Result<Self> {
        check_dim(chosen.dim(), rejected.dim())?;
        Ok(Self { chosen, rejected })
    }

    pub fn dim(&self) -> usize {
        self.chosen.dim()
    }

    /// The pair with its roles reversed.
    pub fn swapped(&self) -> Self {
        Self {
            chosen: self.rejected.clone(),
            rejected: self.chosen.clone(),
        }
    }
}

/// Which alternative of a comparison a preference vector favours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Choice {
    X,
    Z,
}

/// `V = X − Z`.
pub fn difference_vector(c: &PairwiseComparison) -> Result<FeatureVector> {
    check_dim(c.chosen.dim(), c.rejected.dim())?;
    Ok(FeatureVector(
        c.chosen
            .0
            .iter()
            .zip(&c.rejected.0)
            .map(|(x, z)| x - z)
            .collect(),
    ))
}

/// Modal choice under the Gaussian utility model: X when `βᵀ(X − Z) ≥ 0`.
/// Ties go to X.
pub fn predict_choice(beta: &PreferenceVector, c: &PairwiseComparison) -> Result<Choice> {
    if beta.beta.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("preference vector".into()));
    }
    let v = difference_vector(c)?;
    check_dim(beta.dim(), v.dim())?;
    Ok(choice_from_margin(dot(&beta.beta, &v.0)))
}

#[inline]
pub(crate) fn choice_from_margin(margin: f64) -> Choice {
    if margin >= 0.0 {
        Choice::X
    } else {
        Choice::Z
    }
}

/// All comparisons made by a single voter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VoterDataset {
    pub voter_id: u64,
    pub records: Vec<PairwiseComparison>,
}

impl VoterDataset {
    pub fn new(voter_id: u64, records: Vec<PairwiseComparison>) -> Result<Self> {
        let ds = Self { voter_id, records };
        let diags = ds.diagnostics(None);
        if diags.is_empty() {
            Ok(ds)
        } else {
            Err(Error::Validation(diags))
        }
    }

    /// Dimension of the first record, or 0 for an empty dataset.
    pub fn dim(&self) -> usize {
        self.records.first().map_or(0, |r| r.dim())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Difference vectors `X_j − Z_j` for every record.
    pub fn differences(&self) -> Result<Vec<Vec<f64>>> {
        self.records
            .iter()
            .map(|r| difference_vector(r).map(|v| v.0))
            .collect()
    }

    fn diagnostics(&self, expected_dim: Option<usize>) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        if self.records.is_empty() {
            out.push(Diagnostic {
                voter_id: self.voter_id,
                record: None,
                reason: "voter has no records".into(),
            });
            return out;
        }
        let d = expected_dim.unwrap_or_else(|| self.dim());
        for (j, r) in self.records.iter().enumerate() {
            for (name, v) in [("chosen", &r.chosen), ("rejected", &r.rejected)] {
                if v.dim() != d {
                    out.push(Diagnostic {
                        voter_id: self.voter_id,
                        record: Some(j),
                        reason: format!(
                            "dimension mismatch in {name} alternative: expected {d}, found {}",
                            v.dim()
                        ),
                    });
                }
                if let Some(k) = v.0.iter().position(|x| !x.is_finite()) {
                    out.push(Diagnostic {
                        voter_id: self.voter_id,
                        record: Some(j),
                        reason: format!("non-finite value in {name} alternative at index {k}"),
                    });
                }
            }
        }
        out
    }
}

/// The whole dataset of N voters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub voters: Vec<VoterDataset>,
    pub d: usize,
    /// True once every alternative has been clipped to ℓ2 norm ≤ 1/2.
    pub preprocessed: bool,
}

impl Corpus {
    /// Builds a corpus and validates it.
    pub fn new(voters: Vec<VoterDataset>, d: usize) -> Result<Self> {
        let c = Self {
            voters,
            d,
            preprocessed: false,
        };
        validate_corpus(&c)?;
        Ok(c)
    }

    pub fn num_voters(&self) -> usize {
        self.voters.len()
    }
}

/// Checks finiteness, uniform dimension and non-empty voters. Every problem
/// found is reported, not only the first.
pub fn validate_corpus(c: &Corpus) -> Result<()> {
    let mut diags = Vec::new();
    if c.voters.is_empty() {
        return Err(Error::Empty("corpus has no voters".into()));
    }
    if c.d == 0 || c.d > MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "corpus dimension {} outside 1..={MAX_DIM}",
            c.d
        )));
    }
    for v in &c.voters {
        diags.extend(v.diagnostics(Some(c.d)));
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(diags))
    }
}

/// A voter- or society-level preference parameter β.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferenceVector {
    pub beta: Vec<f64>,
    /// ℓ1 bound B that `beta` is certified to respect.
    pub l1_bound: Option<f64>,
}

impl PreferenceVector {
    pub fn new(beta: Vec<f64>) -> Self {
        Self {
            beta,
            l1_bound: None,
        }
    }

    /// Attaches an ℓ1 certificate, failing if the vector violates it.
    pub fn with_bound(beta: Vec<f64>, bound: f64) -> Result<Self> {
        let norm = l1_norm(&beta);
        if norm > bound + L1_SLACK {
            return Err(Error::NormBound { norm, bound });
        }
        Ok(Self {
            beta,
            l1_bound: Some(bound),
        })
    }

    pub fn zeros(d: usize) -> Self {
        Self::new(vec![0.0; d])
    }

    pub fn dim(&self) -> usize {
        self.beta.len()
    }

    pub fn l1_norm(&self) -> f64 {
        l1_norm(&self.beta)
    }

    pub fn is_finite(&self) -> bool {
        self.beta.iter().all(|v| v.is_finite())
    }
}

/// A positive, finite privacy parameter ε.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct PrivacyBudget(f64);

impl PrivacyBudget {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon.is_finite() && epsilon > 0.0 {
            Ok(Self(epsilon))
        } else {
            Err(Error::InvalidParameter(format!(
                "privacy budget must be positive and finite, got {epsilon}"
            )))
        }
    }

    pub fn epsilon(self) -> f64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(x: &[f64], z: &[f64]) -> PairwiseComparison {
        PairwiseComparison::new(x.to_vec().into(), z.to_vec().into()).unwrap()
    }

    #[test]
    fn difference_examples() {
        assert_eq!(
            difference_vector(&pair(&[1.0, 0.0], &[0.0, 1.0])).unwrap().0,
            vec![1.0, -1.0]
        );
        assert_eq!(
            difference_vector(&pair(&[0.4, -2.0], &[0.4, -2.0])).unwrap().0,
            vec![0.0, 0.0]
        );
        let v = difference_vector(&pair(&[0.3, 0.1, 0.0], &[0.1, 0.1, 0.2])).unwrap();
        for (a, b) in v.0.iter().zip([0.2, 0.0, -0.2]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn difference_rejects_mismatch() {
        let c = PairwiseComparison {
            chosen: vec![1.0].into(),
            rejected: vec![1.0, 2.0].into(),
        };
        assert!(matches!(
            difference_vector(&c),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(PairwiseComparison::new(vec![1.0].into(), vec![1.0, 2.0].into()).is_err());
    }

    #[test]
    fn predict_examples() {
        let b = PreferenceVector::new(vec![1.0, 0.0]);
        assert_eq!(predict_choice(&b, &pair(&[1.0, 0.0], &[0.0, 1.0])).unwrap(), Choice::X);
        let zero = PreferenceVector::zeros(2);
        assert_eq!(predict_choice(&zero, &pair(&[0.0, 5.0], &[3.0, 0.0])).unwrap(), Choice::X);
        let b = PreferenceVector::new(vec![-1.0, 2.0]);
        assert_eq!(predict_choice(&b, &pair(&[1.0, 1.0], &[0.0, 0.0])).unwrap(), Choice::X);
        assert_eq!(predict_choice(&b, &pair(&[0.0, 0.0], &[1.0, 1.0])).unwrap(), Choice::Z);
    }

    #[test]
    fn predict_rejects_bad_beta() {
        let b = PreferenceVector::new(vec![f64::NAN, 0.0]);
        assert!(predict_choice(&b, &pair(&[1.0, 0.0], &[0.0, 1.0])).is_err());
        let b = PreferenceVector::new(vec![1.0]);
        assert!(matches!(
            predict_choice(&b, &pair(&[1.0, 0.0], &[0.0, 1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn voter(id: u64, rows: &[(&[f64], &[f64])]) -> VoterDataset {
        VoterDataset {
            voter_id: id,
            records: rows
                .iter()
                .map(|(x, z)| PairwiseComparison {
                    chosen: x.to_vec().into(),
                    rejected: z.to_vec().into(),
                })
                .collect(),
        }
    }

    #[test]
    fn validate_ok() {
        let c = Corpus {
            voters: vec![
                voter(0, &[(&[1.0, 0.0], &[0.0, 1.0])]),
                voter(1, &[(&[0.5, 0.5], &[0.0, 0.0]), (&[0.1, 0.2], &[0.3, 0.4])]),
            ],
            d: 2,
            preprocessed: false,
        };
        validate_corpus(&c).unwrap();
    }

    #[test]
    fn validate_reports_nan_record() {
        let c = Corpus {
            voters: vec![
                voter(0, &[(&[1.0, 0.0], &[0.0, 1.0])]),
                voter(7, &[(&[0.5, 0.5], &[0.0, 0.0]), (&[0.1, f64::NAN], &[0.3, 0.4])]),
            ],
            d: 2,
            preprocessed: false,
        };
        match validate_corpus(&c) {
            Err(Error::Validation(d)) => {
                assert_eq!(d.len(), 1);
                assert_eq!(d[0].voter_id, 7);
                assert_eq!(d[0].record, Some(1));
                assert!(d[0].reason.contains("non-finite"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validate_reports_mixed_dims() {
        let c = Corpus {
            voters: vec![
                voter(0, &[(&[1.0, 0.0], &[0.0, 1.0])]),
                voter(1, &[(&[1.0, 0.0, 2.0], &[0.0, 1.0, 0.0])]),
            ],
            d: 2,
            preprocessed: false,
        };
        match validate_corpus(&c) {
            Err(Error::Validation(d)) => {
                assert!(d.iter().all(|x| x.voter_id == 1));
                assert!(d[0].reason.contains("dimension mismatch"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn validate_reports_empty_voter() {
        let c = Corpus {
            voters: vec![voter(3, &[])],
            d: 2,
            preprocessed: false,
        };
        assert!(matches!(validate_corpus(&c), Err(Error::Validation(_))));
        assert!(VoterDataset::new(3, vec![]).is_err());
    }

    #[test]
    fn budget_and_bound() {
        assert!(PrivacyBudget::new(0.0).is_err());
        assert!(PrivacyBudget::new(-1.0).is_err());
        assert!(PrivacyBudget::new(f64::INFINITY).is_err());
        assert_eq!(PrivacyBudget::new(0.5).unwrap().epsilon(), 0.5);
        assert!(PreferenceVector::with_bound(vec![1.5, -0.5], 2.0).is_ok());
        assert!(PreferenceVector::with_bound(vec![1.5, -0.6], 2.0).is_err());
    }

    #[test]
    fn feature_vector_checks() {
        assert!(FeatureVector::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(FeatureVector::new(vec![0.0; MAX_DIM + 1]).is_err());
        assert_eq!(FeatureVector::new(vec![3.0, 4.0]).unwrap().l2_norm(), 5.0);
    }
}
