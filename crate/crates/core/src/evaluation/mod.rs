//! Accuracy metrics, sensitivity and utility harnesses, and sweeps.

mod accuracy;
mod exceedance;
mod sensitivity;
mod sweep;

pub use accuracy::{accuracy, accuracy_ratio, generate_test_scenarios, TestScenarioSet};
pub use exceedance::{utility_bound_exceedance, ExceedanceReport, ExceedanceSetup};
pub use sensitivity::{
    adversarial_pair, empirical_sensitivity_check, Neighborhood, SensitivityReport, SensitivitySetup,
    SensitivityTarget,
};
pub use sweep::{
    run_sweep, DataSource, Mechanism, PrivacySetting, SweepConfig, SweepResult, SweepRow, TrialData,
    RESULTS_HEADER,
};
