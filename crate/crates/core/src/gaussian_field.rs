//! Log-volatility fields `omega`: closed-form covariance kernels and exact
//! Gaussian synthesis on a time grid.
//!
//! Two models share one log-kernel. The stationary field has a fixed integral
//! scale `T`; the aging field uses `max(t1, t2)` in place of `T`, and is
//! identically zero below the cutoff (its cone is empty there).
//!
//! The dense sampler factorizes the covariance matrix once and reuses the
//! factor for every replica, so a Monte-Carlo run on `n` points costs one
//! `O(n^3)` factorization plus `O(n^2)` per replica. Grids larger than
//! [`DENSE_LIMIT`] are generated as independent blocks, each of which is exact
//! over its own time range; correlations across block boundaries are dropped.

use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{CascadeError, Result};
use crate::exec::{replica_rng, Execution, SeedRecord};
use crate::linalg::{Cholesky, PackedLower};
use crate::params::{CascadeParams, ModelKind, TimeGrid};

/// Largest grid handled by a single dense factorization.
pub const DENSE_LIMIT: usize = 4096;

/// `lambda2 * ln(scale / tau)` above the cutoff, linear below it.
#[inline]
fn log_kernel(tau: f64, scale: f64, cutoff: f64, lambda2: f64) -> f64 {
    if tau > scale {
        0.0
    } else if tau >= cutoff {
        lambda2 * (scale / tau).ln()
    } else {
        lambda2 * ((scale / cutoff).ln() + 1.0 - tau / cutoff)
    }
}

/// Covariance of the stationary field at lag `tau`.
pub fn cov_stationary(tau: f64, p: &CascadeParams) -> Result<f64> {
    let t = p.require_integral_scale()?;
    if !(tau >= 0.0) {
        return Err(CascadeError::Domain(format!("lag must be >= 0, got {tau}")));
    }
    Ok(log_kernel(tau, t, p.cutoff, p.lambda2))
}

/// Mean of the stationary field, chosen so that `E[exp(omega)] = 1`.
pub fn mean_stationary(p: &CascadeParams) -> Result<f64> {
    let t = p.require_integral_scale()?;
    Ok(-0.5 * p.lambda2 * (1.0 + (t / p.cutoff).ln()))
}

/// Covariance of the aging field between times `t1` and `t2`.
///
/// Zero whenever either time is below the cutoff, since the field is
/// deterministic there.
pub fn cov_nonstationary(t1: f64, t2: f64, p: &CascadeParams) -> Result<f64> {
    if !(t1 >= 0.0 && t2 >= 0.0) {
        return Err(CascadeError::InvalidParameter(format!(
            "times must be >= 0, got ({t1}, {t2})"
        )));
    }
    let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
    if lo < p.cutoff {
        return Ok(0.0);
    }
    Ok(log_kernel(hi - lo, hi, p.cutoff, p.lambda2))
}

/// White-noise mass shared by the aging cones of `t1` and `t2` above the
/// cutoff, without the convention that the field vanishes below the cutoff.
/// Agrees with [`cov_nonstationary`] when both times are at least the cutoff.
pub(crate) fn cone_overlap_nonstationary(t1: f64, t2: f64, p: &CascadeParams) -> f64 {
    let (t, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
    let d = hi - t;
    let a = p.cutoff.max(d);
    let mass = if a >= hi {
        t / a
    } else {
        (hi / a).ln() - d / a + 1.0
    };
    p.lambda2 * mass
}

/// Mean of the aging field at time `t`; zero below the cutoff.
pub fn mean_nonstationary(t: f64, p: &CascadeParams) -> f64 {
    if t < p.cutoff {
        0.0
    } else {
        -0.5 * p.lambda2 * (1.0 + (t / p.cutoff).ln())
    }
}

/// Variance of the aging field at time `t`.
pub fn var_nonstationary(t: f64, p: &CascadeParams) -> f64 {
    -2.0 * mean_nonstationary(t, p)
}

/// Covariance of span-`h` increments of the aging field at lag `tau`.
///
/// Exact when `tau - h` exceeds the cutoff; requires `tau > h > cutoff`.
pub fn increment_cov(h: f64, tau: f64, p: &CascadeParams) -> Result<f64> {
    if !(h > p.cutoff) {
        return Err(CascadeError::Domain(format!(
            "increment span {h} must exceed the cutoff {}",
            p.cutoff
        )));
    }
    if !(tau > h) {
        return Err(CascadeError::Domain(format!(
            "lag {tau} must exceed the increment span {h}"
        )));
    }
    Ok(p.lambda2 * (1.0 - (h * h) / (tau * tau)).ln())
}

/// Mean of the field of the given kind at time `t`.
pub fn field_mean(kind: ModelKind, t: f64, p: &CascadeParams) -> Result<f64> {
    match kind {
        ModelKind::Stationary => mean_stationary(p),
        ModelKind::Nonstationary => Ok(mean_nonstationary(t, p)),
    }
}

/// Covariance of the field of the given kind between `t1` and `t2`.
pub fn field_cov(kind: ModelKind, t1: f64, t2: f64, p: &CascadeParams) -> Result<f64> {
    match kind {
        ModelKind::Stationary => cov_stationary((t1 - t2).abs(), p),
        ModelKind::Nonstationary => cov_nonstationary(t1, t2, p),
    }
}

/// Covariance matrix of the field on `grid`.
pub fn covariance_matrix(kind: ModelKind, grid: &TimeGrid, p: &CascadeParams) -> Result<PackedLower> {
    check_kind(kind, p)?;
    let times = grid.times();
    // Kernels are infallible once the kind/params check has passed.
    Ok(PackedLower::from_fn(grid.n, |i, j| {
        field_cov(kind, times[i], times[j], p).unwrap_or(0.0)
    }))
}

fn check_kind(kind: ModelKind, p: &CascadeParams) -> Result<()> {
    p.validate()?;
    if kind == ModelKind::Stationary {
        p.require_integral_scale()?;
    }
    Ok(())
}

/// One sampled realization of the log-volatility field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianLogVolPath {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
    pub model_kind: ModelKind,
    pub params: CascadeParams,
    pub seed: SeedRecord,
}

impl GaussianLogVolPath {
    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }
}

/// Exact sampler for a Gaussian vector with a fixed mean and covariance.
///
/// Coordinates with zero variance are pinned to their mean and excluded from
/// the factorization.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    mean: Vec<f64>,
    active: Vec<usize>,
    chol: Cholesky,
}

impl GaussianSampler {
    pub fn from_moments(mean: Vec<f64>, cov: &PackedLower) -> Result<Self> {
        let n = mean.len();
        if cov.dim() != n {
            return Err(CascadeError::InvalidParameter(format!(
                "mean has {n} entries but covariance is {}x{}",
                cov.dim(),
                cov.dim()
            )));
        }
        if n > DENSE_LIMIT {
            return Err(CascadeError::GridTooLarge {
                n,
                limit: DENSE_LIMIT,
            });
        }
        let active: Vec<usize> = (0..n).filter(|&i| cov.get(i, i) > 0.0).collect();
        let sub = PackedLower::from_fn(active.len(), |a, b| cov.get(active[a], active[b]));
        let chol = Cholesky::factorize_with_jitter(&sub).map_err(|e| match e {
            CascadeError::Synthesis {
                pivot,
                jitter,
                min_diag,
                max_diag,
                ..
            } => CascadeError::Synthesis {
                n,
                pivot: active.get(pivot).copied().unwrap_or(pivot),
                jitter,
                min_diag,
                max_diag,
            },
            other => other,
        })?;
        Ok(GaussianSampler { mean, active, chol })
    }

    /// Sampler for the field of `kind` on `grid`.
    pub fn for_field(kind: ModelKind, grid: &TimeGrid, p: &CascadeParams) -> Result<Self> {
        if grid.n > DENSE_LIMIT {
            return Err(CascadeError::GridTooLarge {
                n: grid.n,
                limit: DENSE_LIMIT,
            });
        }
        let cov = covariance_matrix(kind, grid, p)?;
        let mean = grid
            .times()
            .into_iter()
            .map(|t| field_mean(kind, t, p))
            .collect::<Result<Vec<_>>>()?;
        Self::from_moments(mean, &cov)
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Diagonal jitter that was needed to factorize the covariance.
    pub fn jitter(&self) -> f64 {
        self.chol.jitter()
    }

    /// Draw one sample into `out`.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        assert_eq!(out.len(), self.dim());
        out.copy_from_slice(&self.mean);
        let m = self.active.len();
        if m == 0 {
            return;
        }
        let z: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        let mut x = vec![0.0; m];
        self.chol.mul_lower(&z, &mut x);
        for (k, &i) in self.active.iter().enumerate() {
            out[i] += x[k];
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.sample_into(rng, &mut out);
        out
    }

    /// Run `f` on `reps` independent samples, replica `r` drawn from stream `r`
    /// of `master_seed`. Results come back in replica order.
    pub fn replicas<T, F>(&self, master_seed: u64, reps: usize, exec: Execution, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize, &[f64]) -> T + Sync + Send,
    {
        exec.map_indexed(reps, |r| {
            let mut rng = replica_rng(master_seed, r as u64);
            let x = self.sample(&mut rng);
            f(r, &x)
        })
    }
}

/// Draw one exact sample of the field on `grid` (at most [`DENSE_LIMIT`] points).
pub fn sample_path(
    kind: ModelKind,
    grid: &TimeGrid,
    p: &CascadeParams,
    seed: u64,
) -> Result<GaussianLogVolPath> {
    let sampler = GaussianSampler::for_field(kind, grid, p)?;
    let mut rng = replica_rng(seed, 0);
    Ok(GaussianLogVolPath {
        grid: *grid,
        values: sampler.sample(&mut rng),
        model_kind: kind,
        params: *p,
        seed: SeedRecord {
            master: seed,
            stream: 0,
        },
    })
}

/// Block-wise sampler for long grids: consecutive blocks of `block_len`
/// points, each exact and independent of the others.
#[derive(Debug, Clone)]
pub struct BlockSampler {
    kind: ModelKind,
    grid: TimeGrid,
    params: CascadeParams,
    block_len: usize,
    blocks: Vec<Arc<GaussianSampler>>,
}

impl BlockSampler {
    pub fn new(kind: ModelKind, grid: &TimeGrid, p: &CascadeParams, block_len: usize) -> Result<Self> {
        check_kind(kind, p)?;
        if block_len == 0 || block_len > DENSE_LIMIT {
            return Err(CascadeError::InvalidParameter(format!(
                "block length must be in 1..={DENSE_LIMIT}, got {block_len}"
            )));
        }
        let mut blocks: Vec<Arc<GaussianSampler>> = Vec::new();
        // Stationary blocks of equal length share one factor.
        let mut shared: Option<(usize, Arc<GaussianSampler>)> = None;
        let mut start = 0;
        while start < grid.n {
            let len = block_len.min(grid.n - start);
            let sub = grid.slice(start, len);
            let sampler = match (kind, &shared) {
                (ModelKind::Stationary, Some((l, s))) if *l == len => Arc::clone(s),
                _ => {
                    let s = Arc::new(GaussianSampler::for_field(kind, &sub, p)?);
                    if kind == ModelKind::Stationary {
                        shared = Some((len, Arc::clone(&s)));
                    }
                    s
                }
            };
            blocks.push(sampler);
            start += len;
        }
        Ok(BlockSampler {
            kind,
            grid: *grid,
            params: *p,
            block_len,
            blocks,
        })
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut out = vec![0.0; self.grid.n];
        let mut start = 0;
        for b in &self.blocks {
            let len = b.dim();
            b.sample_into(rng, &mut out[start..start + len]);
            start += len;
        }
        out
    }

    /// Sample replica `stream` of `master_seed` as a path.
    pub fn sample_path(&self, master_seed: u64, stream: u64) -> GaussianLogVolPath {
        let mut rng = replica_rng(master_seed, stream);
        GaussianLogVolPath {
            grid: self.grid,
            values: self.sample(&mut rng),
            model_kind: self.kind,
            params: self.params,
            seed: SeedRecord {
                master: master_seed,
                stream,
            },
        }
    }
}

/// Block-wise sample of an arbitrarily long grid.
pub fn sample_path_blocked(
    kind: ModelKind,
    grid: &TimeGrid,
    p: &CascadeParams,
    seed: u64,
    block_len: usize,
) -> Result<GaussianLogVolPath> {
    Ok(BlockSampler::new(kind, grid, p, block_len)?.sample_path(seed, 0))
}
