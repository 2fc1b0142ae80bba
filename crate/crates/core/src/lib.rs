//! Differentially private aggregation of pairwise preference data.
//!
//! Voters compare pairs of alternatives; each voter's choices are fitted to
//! a probit preference vector under an ℓ1 bound, and the society vector is
//! released through one of three Laplace-based mechanisms.

pub mod cli;
pub mod datagen;
pub mod error;
pub mod evaluation;
pub mod inference;
pub mod linalg;
pub mod mechanisms;
pub mod rng;
pub mod types;

pub use error::{Diagnostic, Error, Result};
pub use types::{
    difference_vector, predict_choice, validate_corpus, Choice, Corpus, FeatureVector,
    PairwiseComparison, PreferenceVector, PrivacyBudget, VoterDataset,
};
