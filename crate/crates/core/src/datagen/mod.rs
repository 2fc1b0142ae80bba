//! Synthetic data generation, preprocessing, corpus ingestion and
//! personalized privacy budgets.

mod csv_io;
mod preprocess;
mod privacy;
mod synthetic;

pub use csv_io::{corpus_header, fmt_real, ingest_csv, read_corpus, write_corpus, write_corpus_file};
pub use preprocess::{clip_alternative, preprocess_scale, ALTERNATIVE_NORM_CAP};
pub use privacy::{
    assign_privacy_groups, round_hundredth, PersonalizedSpec, PrivacyAssignment, PrivacyGroup,
};
pub use synthetic::{generate_corpus, generate_society, generate_voter_records, Society, SocietySpec};
