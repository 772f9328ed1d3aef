//! Batch driver around `nld-core`: scan configs, ω-scans, convergence
//! studies, the acceptance criteria and CSV/JSON output.

pub mod config;
pub mod criteria;
pub mod reproduce;
pub mod scan;
pub mod study;

pub use config::{Check, GridSpec, OmegaSpec, Overrides, ScanConfig, Spacing};
pub use scan::{compute_scan, run_scan, ScanResult, ScanRow, Verdict};
pub use study::{charge_slope, convergence_study, ChargeSlope, ConvergenceStudy};
