//! Magnitude-covariance estimation, bias formulas, log-decay fits and
//! structure functions.

pub mod covariance;
pub mod fit;
pub mod magnitude;
pub mod structure;

pub use covariance::{
    expected_bias_curve, expected_bias_exact, expected_bias_exact_reference, expected_cov_approx,
    expected_subsampled_covariance, expected_window_covariance, magnitude_covariance, subsampled_covariance, subsampled_covariance_pooled, CovarianceEstimate,
    CovarianceReport,
};
pub use fit::{
    fit_log_decay, integral_scale_scan, integral_scale_scan_pooled, scan_summary, ScalingFit, ScanRow,
    ScanSummary,
};
pub use magnitude::{magnitude_from_measure, magnitude_from_omega, MagnitudeSeries};
pub use structure::{
    concavity_check, integral_scale_bound, integral_scale_bound_from, structure_functions,
    structure_functions_pooled, ConcavityReport, CurvaturePoint, StructureFunctions,
};
