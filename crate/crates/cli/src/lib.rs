//! Experiment harness over the CP^n quantization library: named
//! experiments with deterministic seeding and machine-readable reports.

pub mod experiments;
pub mod report;

pub use experiments::{run_experiment, ExperimentConfig, ExperimentError, EXPERIMENTS};
pub use report::{emit_report, ExperimentReport, ReportFormat, ReportRow};
