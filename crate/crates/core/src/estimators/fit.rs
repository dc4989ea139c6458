use serde::{Deserialize, Serialize};

use super::covariance::{subsampled_covariance, subsampled_covariance_pooled, CovarianceEstimate};
use super::magnitude::{steps_of, MagnitudeSeries};
use crate::error::{CascadeError, Result};
use crate::stats::fit_line;

/// Fit of `C(tau) = lambda2 ln(T / tau)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub lambda2_hat: f64,
    /// Zero crossing of the fitted line; absent when the fit is degenerate.
    pub t_hat: Option<f64>,
    pub lag_range: (f64, f64),
    pub n_points: usize,
    pub residual_rms: f64,
    /// Covariance of `(intercept, slope)` of the regression of `C` on `ln tau`.
    pub param_cov: [[f64; 2]; 2],
    /// Standard error of `ln T_hat` by the delta method.
    pub ln_t_stderr: Option<f64>,
    pub degenerate: bool,
}

/// Least-squares fit of `C` against `ln tau` on lags in `[lag_lo, lag_hi]`.
///
/// Weighted by `1 / stderr^2` when every standard error in range is positive.
/// A non-positive fitted `lambda2` is flagged as degenerate rather than
/// treated as an error.
pub fn fit_log_decay(c: &CovarianceEstimate, lag_lo: f64, lag_hi: f64) -> Result<ScalingFit> {
    let idx: Vec<usize> = (0..c.lags.len())
        .filter(|&i| c.lags[i] > 0.0 && c.lags[i] >= lag_lo && c.lags[i] <= lag_hi)
        .collect();
    if idx.len() < 3 {
        return Err(CascadeError::InsufficientData(format!(
            "{} positive lags in [{lag_lo}, {lag_hi}], need 3",
            idx.len()
        )));
    }
    let x: Vec<f64> = idx.iter().map(|&i| c.lags[i].ln()).collect();
    let y: Vec<f64> = idx.iter().map(|&i| c.values[i]).collect();
    let weights: Option<Vec<f64>> = c.stderr.as_ref().and_then(|se| {
        let w: Vec<f64> = idx.iter().map(|&i| se[i]).collect();
        w.iter().all(|&s| s > 0.0).then(|| w.iter().map(|s| 1.0 / (s * s)).collect())
    });
    let line = fit_line(&x, &y, weights.as_deref())
        .ok_or_else(|| CascadeError::Degenerate("lags do not span a range".into()))?;
    let lambda2_hat = -line.slope;
    // A slope lost in rounding noise is as degenerate as a flat one.
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let degenerate = !(lambda2_hat > 1e-13 * scale.max(f64::MIN_POSITIVE));
    let (t_hat, ln_t_stderr) = if degenerate {
        (None, None)
    } else {
        let (a, b) = (line.intercept, line.slope);
        let ln_t = a / lambda2_hat;
        let da = -1.0 / b;
        let db = a / (b * b);
        let var = da * da * line.cov[0][0] + db * db * line.cov[1][1] + 2.0 * da * db * line.cov[0][1];
        (Some(ln_t.exp()), Some(var.max(0.0).sqrt()))
    };
    Ok(ScalingFit {
        lambda2_hat,
        t_hat,
        lag_range: (lag_lo, lag_hi),
        n_points: idx.len(),
        residual_rms: line.residual_rms,
        param_cov: line.cov,
        ln_t_stderr,
        degenerate,
    })
}

/// One row of an apparent-integral-scale scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub delta_t: f64,
    pub n_subsamples: usize,
    pub lambda2_hat: f64,
    pub t_hat: Option<f64>,
    pub ln_t_stderr: Option<f64>,
    pub degenerate: bool,
}

/// For each `delta_t`, subsampled covariance and a log-decay fit on lags
/// `[2h, delta_t / 4]`. Returns the rows together with their estimates.
pub fn integral_scale_scan(
    s: &MagnitudeSeries,
    delta_t_list: &[f64],
) -> Result<Vec<(ScanRow, CovarianceEstimate, ScalingFit)>> {
    integral_scale_scan_pooled(std::slice::from_ref(s), delta_t_list)
}

/// [`integral_scale_scan`] over the pooled windows of several series.
pub fn integral_scale_scan_pooled(
    series: &[MagnitudeSeries],
    delta_t_list: &[f64],
) -> Result<Vec<(ScanRow, CovarianceEstimate, ScalingFit)>> {
    let h = series
        .first()
        .map(|s| s.h)
        .ok_or_else(|| CascadeError::InsufficientData("no series given".into()))?;
    delta_t_list
        .iter()
        .map(|&dt| {
            let width = steps_of(dt, h)?;
            let max_lag = width / 4;
            let est = if series.len() == 1 {
                subsampled_covariance(&series[0], dt, max_lag)?
            } else {
                subsampled_covariance_pooled(series, dt, max_lag)?
            };
            let fit = fit_log_decay(&est, 2.0 * h, dt / 4.0)?;
            let row = ScanRow {
                delta_t: dt,
                n_subsamples: est.n_subsamples,
                lambda2_hat: fit.lambda2_hat,
                t_hat: fit.t_hat,
                ln_t_stderr: fit.ln_t_stderr,
                degenerate: fit.degenerate,
            };
            Ok((row, est, fit))
        })
        .collect()
}

/// Regression of `ln T_hat` on `ln delta_t` over the non-degenerate rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
    /// Mean of `ln(T_hat / delta_t)`.
    pub mean_log_ratio: f64,
    pub rows_used: usize,
}

pub fn scan_summary(rows: &[ScanRow]) -> Option<ScanSummary> {
    let used: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.t_hat.map(|t| (r.delta_t.ln(), t.ln())))
        .collect();
    if used.len() < 2 {
        return None;
    }
    let x: Vec<f64> = used.iter().map(|p| p.0).collect();
    let y: Vec<f64> = used.iter().map(|p| p.1).collect();
    let line = fit_line(&x, &y, None)?;
    let mean_log_ratio = used.iter().map(|(a, b)| b - a).sum::<f64>() / used.len() as f64;
    Some(ScanSummary {
        slope: line.slope,
        slope_stderr: line.cov[1][1].sqrt(),
        intercept: line.intercept,
        mean_log_ratio,
        rows_used: used.len(),
    })
}
