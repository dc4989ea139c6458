//! Small statistics helpers shared by the Monte-Carlo drivers and estimators.

use serde::{Deserialize, Serialize};

/// Sample mean and its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
}

impl MeanEstimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        let mean = mean(xs);
        let stderr = if n > 1 {
            (sample_variance(xs) / n as f64).sqrt()
        } else {
            f64::NAN
        };
        MeanEstimate {
            mean,
            stderr,
            count: n,
        }
    }

    /// `|mean - target|` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        if self.stderr > 0.0 {
            (self.mean - target).abs() / self.stderr
        } else if self.mean == target {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::NAN;
    }
    if xs.iter().all(|&x| x == xs[0]) {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64
}

/// Weighted least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    /// Covariance of `(intercept, slope)`.
    pub cov: [[f64; 2]; 2],
    pub residual_rms: f64,
}

/// Fit a line by (weighted) least squares. With `weights == None` the parameter
/// covariance uses the residual variance; with weights it is `(X^T W X)^-1`.
pub fn fit_line(x: &[f64], y: &[f64], weights: Option<&[f64]>) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let w = |i: usize| weights.map_or(1.0, |w| w[i]);
    let sw: f64 = (0..n).map(w).sum();
    let mx = (0..n).map(|i| w(i) * x[i]).sum::<f64>() / sw;
    let my = (0..n).map(|i| w(i) * y[i]).sum::<f64>() / sw;
    let sxx: f64 = (0..n).map(|i| w(i) * (x[i] - mx) * (x[i] - mx)).sum();
    let sxy: f64 = (0..n).map(|i| w(i) * (x[i] - mx) * (y[i] - my)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let resid: Vec<f64> = (0..n).map(|i| y[i] - intercept - slope * x[i]).collect();
    let residual_rms = (resid.iter().map(|r| r * r).sum::<f64>() / n as f64).sqrt();
    let scale = match weights {
        Some(_) => 1.0,
        None if n > 2 => resid.iter().map(|r| r * r).sum::<f64>() / (n - 2) as f64,
        None => 0.0,
    };
    let var_slope = scale / sxx;
    let var_intercept = scale * (1.0 / sw + mx * mx / sxx);
    let cov_is = -scale * mx / sxx;
    Some(LineFit {
        intercept,
        slope,
        cov: [[var_intercept, cov_is], [cov_is, var_slope]],
        residual_rms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_through_points() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let f = fit_line(&x, &y, None).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-14 && (f.intercept - 1.0).abs() < 1e-14);
        assert!(f.residual_rms < 1e-14);
        assert!(fit_line(&[1.0, 1.0], &[0.0, 1.0], None).is_none());
    }

    #[test]
    fn mean_estimate() {
        let m = MeanEstimate::from_samples(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, 2.5);
        assert!((m.stderr - (1.6666666666666667f64 / 4.0).sqrt()).abs() < 1e-15);
        assert!(m.z_score(2.5) == 0.0);
    }
}
