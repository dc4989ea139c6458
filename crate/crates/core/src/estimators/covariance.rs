use serde::{Deserialize, Serialize};

use super::fit::ScalingFit;
use super::magnitude::{steps_of, MagnitudeSeries};
use crate::error::{CascadeError, Result};
use crate::gaussian_field::{field_cov, field_mean};
use crate::linalg::PackedLower;
use crate::params::{CascadeParams, ModelKind, TimeGrid};
use crate::stats::{mean, sample_variance};

/// Empirical magnitude covariance on lags `0, h, 2h, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceEstimate {
    pub lags: Vec<f64>,
    pub values: Vec<f64>,
    /// Standard error across subsamples; absent for a single window.
    pub stderr: Option<Vec<f64>>,
    pub delta_t: f64,
    pub n_subsamples: usize,
}

/// `(N - n)^-1 sum_i (x_i - mean)(x_{i+n} - mean)` for `n = 0..=max_lag`.
pub fn autocovariance(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let mu = mean(x);
    let c: Vec<f64> = x.iter().map(|v| v - mu).collect();
    (0..=max_lag.min(n.saturating_sub(1)))
        .map(|lag| {
            let s: f64 = c[..n - lag].iter().zip(&c[lag..]).map(|(a, b)| a * b).sum();
            s / (n - lag) as f64
        })
        .collect()
}

pub fn magnitude_covariance(s: &MagnitudeSeries, max_lag_n: usize) -> Result<CovarianceEstimate> {
    if max_lag_n >= s.len() {
        return Err(CascadeError::InvalidParameter(format!(
            "max lag {max_lag_n} must be below the series length {}",
            s.len()
        )));
    }
    Ok(CovarianceEstimate {
        lags: (0..=max_lag_n).map(|k| k as f64 * s.h).collect(),
        values: autocovariance(&s.values, max_lag_n),
        stderr: None,
        delta_t: s.span(),
        n_subsamples: 1,
    })
}

/// Average of [`magnitude_covariance`] over consecutive disjoint windows of
/// length `delta_t`; the tail remainder is dropped.
///
/// A window equal to the whole series is accepted and gives the single-window
/// estimate. Otherwise at least two complete windows are required.
pub fn subsampled_covariance(s: &MagnitudeSeries, delta_t: f64, max_lag_n: usize) -> Result<CovarianceEstimate> {
    let width = steps_of(delta_t, s.h)?;
    if width == s.len() {
        return magnitude_covariance(s, max_lag_n);
    }
    subsampled_covariance_pooled(std::slice::from_ref(s), delta_t, max_lag_n)
}

/// [`subsampled_covariance`] with the windows of several independent series
/// sharing one sampling step pooled into a single average.
pub fn subsampled_covariance_pooled(
    series: &[MagnitudeSeries],
    delta_t: f64,
    max_lag_n: usize,
) -> Result<CovarianceEstimate> {
    let h = match series.first() {
        Some(s) => s.h,
        None => return Err(CascadeError::InsufficientData("no series given".into())),
    };
    if series.iter().any(|s| s.h != h) {
        return Err(CascadeError::InvalidParameter(
            "pooled series must share one sampling step".into(),
        ));
    }
    let width = steps_of(delta_t, h)?;
    let total: usize = series.iter().map(|s| s.len()).sum();
    let windows: usize = series.iter().map(|s| s.len() / width).sum();
    if windows < 2 {
        return Err(CascadeError::InsufficientData(format!(
            "window of {width} samples fits {windows} time(s) in {total} samples"
        )));
    }
    if max_lag_n >= width {
        return Err(CascadeError::InvalidParameter(format!(
            "max lag {max_lag_n} must be below the window length {width}"
        )));
    }
    let per_window: Vec<Vec<f64>> = series
        .iter()
        .flat_map(|s| s.values.chunks_exact(width))
        .map(|w| autocovariance(w, max_lag_n))
        .collect();
    let mut values = Vec::with_capacity(max_lag_n + 1);
    let mut stderr = Vec::with_capacity(max_lag_n + 1);
    let mut column = vec![0.0; windows];
    for lag in 0..=max_lag_n {
        for (c, w) in column.iter_mut().zip(&per_window) {
            *c = w[lag];
        }
        values.push(mean(&column));
        stderr.push((sample_variance(&column).max(0.0) / windows as f64).sqrt());
    }
    Ok(CovarianceEstimate {
        lags: (0..=max_lag_n).map(|k| k as f64 * h).collect(),
        values,
        stderr: Some(stderr),
        delta_t: width as f64 * h,
        n_subsamples: windows,
    })
}

fn check_bias_args(c: &[f64], n: usize) {
    assert!(
        n < c.len(),
        "lag {n} out of range for a covariance of length {}",
        c.len()
    );
}

/// `E[C_hat(n)] = C(n) + K(0) - 2 K(n)` with `K(n)` evaluated as the plain
/// double sum `(N (N - n))^-1 sum_{i < N - n} sum_{j < N} C(|i - j|)`.
///
/// `c[k]` is the true covariance at lag `k` and `N = c.len()`. Quadratic cost;
/// kept as a reference for [`expected_bias_exact`].
pub fn expected_bias_exact_reference(c: &[f64], n: usize) -> f64 {
    check_bias_args(c, n);
    let big = c.len();
    let k = |lag: usize| -> f64 {
        let mut s = 0.0;
        for i in 0..big - lag {
            for j in 0..big {
                s += c[i.abs_diff(j)];
            }
        }
        s / (big as f64 * (big - lag) as f64)
    };
    c[n] + k(0) - 2.0 * k(n)
}

/// Same value as [`expected_bias_exact_reference`] in linear time.
pub fn expected_bias_exact(c: &[f64], n: usize) -> f64 {
    check_bias_args(c, n);
    let rows = row_sum_prefix(c);
    let big = c.len();
    let k = |lag: usize| rows[big - lag] / (big as f64 * (big - lag) as f64);
    c[n] + k(0) - 2.0 * k(n)
}

/// [`expected_bias_exact`] for every lag `0..=max_lag`.
pub fn expected_bias_curve(c: &[f64], max_lag: usize) -> Vec<f64> {
    check_bias_args(c, max_lag);
    let rows = row_sum_prefix(c);
    let big = c.len();
    let k = |lag: usize| rows[big - lag] / (big as f64 * (big - lag) as f64);
    let k0 = k(0);
    (0..=max_lag).map(|n| c[n] + k0 - 2.0 * k(n)).collect()
}

/// `out[m] = sum_{i < m} sum_j C(|i - j|)`. Row `i` sums to
/// `P(i) + P(N - 1 - i) - C(0)` with `P` the prefix sum of `C`.
/// Exact expectation of the single-window estimator `C_hat(n)`, `n = 0..=max_lag`,
/// for a Gaussian vector with mean `mu` and covariance `sigma`:
/// `E[(x_i - xbar)(x_j - xbar)] = S_ij - r_i - r_j + s + (mu_i - mubar)(mu_j - mubar)`
/// with `r` the row means and `s` the grand mean of `S`.
pub fn expected_window_covariance(mu: &[f64], sigma: &PackedLower, max_lag: usize) -> Vec<f64> {
    let big = mu.len();
    assert_eq!(sigma.dim(), big, "mean and covariance sizes differ");
    check_bias_args(mu, max_lag);
    let r: Vec<f64> = (0..big)
        .map(|i| (0..big).map(|k| sigma.get(i, k)).sum::<f64>() / big as f64)
        .collect();
    let s = mean(&r);
    let mbar = mean(mu);
    (0..=max_lag)
        .map(|n| {
            let total: f64 = (0..big - n)
                .map(|i| {
                    let j = i + n;
                    sigma.get(i, j) - r[i] - r[j] + s + (mu[i] - mbar) * (mu[j] - mbar)
                })
                .sum();
            total / (big - n) as f64
        })
        .collect()
}

/// Expectation of [`subsampled_covariance`] applied to the field sampled on
/// `grid`, averaged over the same disjoint windows. With `block_len`, points in
/// different blocks of that length are independent, as produced by block-wise
/// sampling.
pub fn expected_subsampled_covariance(
    kind: ModelKind,
    grid: &TimeGrid,
    params: &CascadeParams,
    delta_t: f64,
    max_lag: usize,
    block_len: Option<usize>,
) -> Result<Vec<f64>> {
    let width = steps_of(delta_t, grid.dt)?;
    let windows = grid.n / width;
    if windows == 0 || max_lag >= width {
        return Err(CascadeError::InvalidParameter(format!(
            "window of {width} steps and max lag {max_lag} on a grid of {}",
            grid.n
        )));
    }
    let mut acc = vec![0.0; max_lag + 1];
    for w in 0..windows {
        let sub = grid.slice(w * width, width);
        let times = sub.times();
        let mu = times
            .iter()
            .map(|&t| field_mean(kind, t, params))
            .collect::<Result<Vec<_>>>()?;
        let mut err = None;
        let block = |i: usize| block_len.map(|b| (w * width + i) / b.max(1));
        let sigma = PackedLower::from_fn(width, |i, j| {
            if block(i) != block(j) {
                return 0.0;
            }
            field_cov(kind, times[i], times[j], params).unwrap_or_else(|e| {
                err.get_or_insert(e);
                0.0
            })
        });
        if let Some(e) = err {
            return Err(e);
        }
        for (a, v) in acc.iter_mut().zip(expected_window_covariance(&mu, &sigma, max_lag)) {
            *a += v;
        }
    }
    Ok(acc.into_iter().map(|a| a / windows as f64).collect())
}

fn row_sum_prefix(c: &[f64]) -> Vec<f64> {
    let big = c.len();
    let mut p = Vec::with_capacity(big);
    let mut acc = 0.0;
    for &v in c {
        acc += v;
        p.push(acc);
    }
    let mut out = Vec::with_capacity(big + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for i in 0..big {
        acc += p[i] + p[big - 1 - i] - c[0];
        out.push(acc);
    }
    out
}

/// First-order expectation `lambda2 (ln(e^{-3/2} delta_t / tau) - tau / delta_t)`.
pub fn expected_cov_approx(tau: f64, delta_t: f64, lambda2: f64) -> Result<f64> {
    if !(tau > 0.0) || !(tau < delta_t) {
        return Err(CascadeError::Domain(format!(
            "need 0 < tau < delta_t, got tau={tau}, delta_t={delta_t}"
        )));
    }
    Ok(lambda2 * ((-1.5f64).exp() * delta_t / tau).ln() - lambda2 * tau / delta_t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub lambda2: f64,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    pub residual_rms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub delta_t: f64,
    pub n_subsamples: usize,
    pub seed: Option<u64>,
}

/// Serialized form of a covariance estimate with an optional fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub lags: Vec<f64>,
    pub values: Vec<f64>,
    pub stderr: Option<Vec<f64>>,
    pub fit: Option<FitSummary>,
    pub meta: ReportMeta,
}

impl CovarianceEstimate {
    pub fn report(&self, fit: Option<&ScalingFit>, seed: Option<u64>) -> CovarianceReport {
        CovarianceReport {
            lags: self.lags.clone(),
            values: self.values.clone(),
            stderr: self.stderr.clone(),
            fit: fit.map(|f| FitSummary {
                lambda2: f.lambda2_hat,
                t: f.t_hat,
                residual_rms: f.residual_rms,
            }),
            meta: ReportMeta {
                delta_t: self.delta_t,
                n_subsamples: self.n_subsamples,
                seed,
            },
        }
    }

    /// CSV mirror with one row per lag: `lag,value,stderr`.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["lag", "value", "stderr"])?;
        for (i, (lag, v)) in self.lags.iter().zip(&self.values).enumerate() {
            let se = self
                .stderr
                .as_ref()
                .map_or(String::new(), |s| s[i].to_string());
            w.write_record([lag.to_string(), v.to_string(), se])?;
        }
        w.flush()?;
        Ok(())
    }
}
