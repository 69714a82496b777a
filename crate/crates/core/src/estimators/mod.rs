//! Plain and multilevel Monte Carlo estimators and convergence studies.

pub mod coupling;
pub mod functional;
pub mod mc;
pub mod mlmc;
pub mod report;
pub mod study;

pub use coupling::{coupled_pair_sample, CoupledSampler, CoupledTrial};
pub use functional::{gerber_shiu_value, Functional};
pub use mc::{mc_estimate, mc_estimate_with, sample_trials};
pub use mlmc::{mlmc_auto, mlmc_estimate, mlmc_pilot, mlmc_plan, LevelSchedule, PilotRun};
pub use report::{EstimateReport, LevelSummary};
pub use study::{gerber_shiu_sweep, level_mse_study, RateRow, RateStudy, COORDINATES};
