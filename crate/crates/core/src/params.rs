//! Model parameters and sampling grids shared by every module.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Which of the two log-normal cascade models a quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Classical cascade with a finite integral scale `T`.
    Stationary,
    /// Aging model where the integral scale at time `t` is `t` itself.
    Nonstationary,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelKind::Stationary => f.write_str("stationary"),
            ModelKind::Nonstationary => f.write_str("nonstationary"),
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "stationary" => Ok(ModelKind::Stationary),
            "nonstationary" | "non-stationary" => Ok(ModelKind::Nonstationary),
            other => Err(format!("unknown model kind `{other}`")),
        }
    }
}

/// Full parameterization of both cascade models.
///
/// `integral_scale == None` selects the non-stationary model. `lambda2 >= 1` is
/// accepted because the Gaussian field stays well defined there; routines that
/// need a finite second moment of the measure check `lambda2 < 1` themselves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CascadeParams {
    pub lambda2: f64,
    pub integral_scale: Option<f64>,
    pub cutoff: f64,
    pub sigma2: f64,
}

impl CascadeParams {
    pub fn stationary(lambda2: f64, integral_scale: f64, cutoff: f64) -> Result<Self> {
        let p = CascadeParams {
            lambda2,
            integral_scale: Some(integral_scale),
            cutoff,
            sigma2: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn nonstationary(lambda2: f64, cutoff: f64) -> Result<Self> {
        let p = CascadeParams {
            lambda2,
            integral_scale: None,
            cutoff,
            sigma2: 1.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_sigma2(mut self, sigma2: f64) -> Result<Self> {
        self.sigma2 = sigma2;
        self.validate()?;
        Ok(self)
    }

    pub fn with_cutoff(mut self, cutoff: f64) -> Result<Self> {
        self.cutoff = cutoff;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lambda2.is_finite() || self.lambda2 < 0.0 {
            return invalid(format!("lambda2 must be >= 0, got {}", self.lambda2));
        }
        if !self.cutoff.is_finite() || self.cutoff <= 0.0 {
            return invalid(format!("cutoff must be > 0, got {}", self.cutoff));
        }
        if !self.sigma2.is_finite() || self.sigma2 <= 0.0 {
            return invalid(format!("sigma2 must be > 0, got {}", self.sigma2));
        }
        if let Some(t) = self.integral_scale {
            if !t.is_finite() || t < self.cutoff {
                return invalid(format!(
                    "integral scale must be finite and >= cutoff ({}), got {t}",
                    self.cutoff
                ));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> ModelKind {
        if self.integral_scale.is_some() {
            ModelKind::Stationary
        } else {
            ModelKind::Nonstationary
        }
    }

    pub(crate) fn require_integral_scale(&self) -> Result<f64> {
        match self.integral_scale {
            Some(t) => Ok(t),
            None => invalid("the stationary model needs an integral scale T"),
        }
    }
}

/// Uniform time grid `t0 + i * dt`, `i = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    pub n: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, n: usize) -> Result<Self> {
        if !t0.is_finite() || t0 < 0.0 {
            return invalid(format!("grid start must be >= 0, got {t0}"));
        }
        if !dt.is_finite() || dt <= 0.0 {
            return invalid(format!("grid step must be > 0, got {dt}"));
        }
        if n == 0 {
            return invalid("grid needs at least one point");
        }
        Ok(TimeGrid { t0, dt, n })
    }

    #[inline]
    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.time(i)).collect()
    }

    pub fn last(&self) -> f64 {
        self.time(self.n - 1)
    }

    /// Sub-grid of `len` points starting at index `start`.
    pub fn slice(&self, start: usize, len: usize) -> TimeGrid {
        TimeGrid {
            t0: self.time(start),
            dt: self.dt,
            n: len,
        }
    }
}
