use serde::{Deserialize, Serialize};

use crate::cascade_measure::MeasurePath;
use crate::error::{CascadeError, Result};
use crate::gaussian_field::GaussianLogVolPath;

/// Evenly spaced log-volatility proxy samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeSeries {
    /// Sampling step, also the increment span of the proxy.
    pub h: f64,
    pub values: Vec<f64>,
    pub origin: f64,
}

impl MagnitudeSeries {
    pub fn new(h: f64, origin: f64, values: Vec<f64>) -> Result<Self> {
        if !(h > 0.0) {
            return Err(CascadeError::InvalidParameter(format!("step h must be > 0, got {h}")));
        }
        if values.len() < 2 {
            return Err(CascadeError::InsufficientData(format!(
                "magnitude series needs at least 2 samples, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(CascadeError::InvalidParameter(format!("non-finite magnitude at index {i}")));
        }
        Ok(MagnitudeSeries { h, values, origin })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Total time covered, `N h`.
    pub fn span(&self) -> f64 {
        self.values.len() as f64 * self.h
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.values.len())
            .map(|k| self.origin + k as f64 * self.h)
            .collect()
    }
}

/// Number of grid steps in `h`, or an error if `h` is not a multiple of `dt`.
pub(crate) fn steps_of(h: f64, dt: f64) -> Result<usize> {
    let r = h / dt;
    let k = r.round();
    if k < 1.0 || (r - k).abs() > 1e-9 * r.max(1.0) {
        return Err(CascadeError::InvalidParameter(format!(
            "span {h} is not a positive integer multiple of the grid step {dt}"
        )));
    }
    Ok(k as usize)
}

/// `values[k] = ln(M(origin + (k + 1) h) - M(origin + k h))`.
pub fn magnitude_from_measure(m: &MeasurePath, h: f64) -> Result<MagnitudeSeries> {
    let step = steps_of(h, m.grid.dt)?;
    let levels = m.with_origin();
    let count = m.grid.n / step;
    let mut values = Vec::with_capacity(count);
    for k in 0..count {
        let d = levels[(k + 1) * step] - levels[k * step];
        if !(d > 0.0) {
            return Err(CascadeError::NonPositiveIncrement { index: k, value: d });
        }
        values.push(d.ln());
    }
    MagnitudeSeries::new(h, m.grid.t0, values)
}

/// Use the sampled log-volatility itself as the proxy, with `h = dt`.
pub fn magnitude_from_omega(path: &GaussianLogVolPath) -> Result<MagnitudeSeries> {
    MagnitudeSeries::new(path.grid.dt, path.grid.t0, path.values.clone())
}
