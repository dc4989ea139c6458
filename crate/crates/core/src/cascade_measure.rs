//! The cascade measure `M(t)`, the subordinated walk `X(t) = B[M(t)]`, and
//! their moments.
//!
//! Paths follow a right-endpoint convention: increment `i` covers
//! `[t0 + i dt, t0 + (i + 1) dt)` and `cumulative[i]` is the measure of
//! `[t0, t0 + (i + 1) dt)`. Both `M` and `X` are anchored at zero at `t0`.

use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{CascadeError, Result};
use crate::exec::{replica_rng, Execution, SeedRecord};
use crate::gaussian_field::{
    cone_overlap_nonstationary, field_cov, field_mean, GaussianLogVolPath, GaussianSampler,
};
use crate::linalg::PackedLower;
use crate::params::{CascadeParams, ModelKind, TimeGrid};
use crate::quadrature::integrate;
use crate::stats::MeanEstimate;

/// Largest `|omega|` accepted before `exp` is considered an overflow.
const OMEGA_LIMIT: f64 = 700.0;

/// Cumulative cascade measure on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurePath {
    pub grid: TimeGrid,
    pub increments: Vec<f64>,
    pub cumulative: Vec<f64>,
    pub params: CascadeParams,
}

impl MeasurePath {
    /// Right endpoints `t0 + (i + 1) dt` at which `cumulative` is reported.
    pub fn times(&self) -> Vec<f64> {
        (1..=self.grid.n).map(|i| self.grid.time(i)).collect()
    }

    /// `M` at `t0 + k dt` for `k = 0..=n`, starting from 0.
    pub fn with_origin(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.cumulative.len() + 1);
        v.push(0.0);
        v.extend_from_slice(&self.cumulative);
        v
    }

    /// Measure of the last grid point's right endpoint.
    pub fn total(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }
}

/// Build `M` by the left-endpoint rule `dM_i = exp(omega_i) dt`.
pub fn build_measure(path: &GaussianLogVolPath) -> Result<MeasurePath> {
    measure_from_omega(&path.grid, &path.values, &path.params)
}

/// Same as [`build_measure`] from raw samples.
pub fn measure_from_omega(grid: &TimeGrid, omega: &[f64], params: &CascadeParams) -> Result<MeasurePath> {
    if omega.len() != grid.n {
        return Err(CascadeError::InvalidParameter(format!(
            "{} samples for a grid of {} points",
            omega.len(),
            grid.n
        )));
    }
    let mut increments = Vec::with_capacity(omega.len());
    for (index, &value) in omega.iter().enumerate() {
        if !value.is_finite() || value.abs() > OMEGA_LIMIT {
            return Err(CascadeError::Overflow { index, value });
        }
        increments.push(value.exp() * grid.dt);
    }
    let cumulative = increments
        .iter()
        .scan(0.0, |acc, d| {
            *acc += d;
            Some(*acc)
        })
        .collect();
    Ok(MeasurePath {
        grid: *grid,
        increments,
        cumulative,
        params: *params,
    })
}

/// Brownian motion time-changed by a cascade measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MrwPath {
    pub grid: TimeGrid,
    /// `X` at the right endpoints; `X(t0) = 0`.
    pub values: Vec<f64>,
    pub hurst: f64,
    pub source: Arc<MeasurePath>,
    pub seed: SeedRecord,
}

impl MrwPath {
    pub fn times(&self) -> Vec<f64> {
        self.source.times()
    }

    pub fn with_origin(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.values.len() + 1);
        v.push(0.0);
        v.extend_from_slice(&self.values);
        v
    }
}

/// Subordinate a Brownian motion to `m`: increments are centered Gaussians with
/// variance `sigma2 * dM_i`. Draws from stream 1 of `seed`, leaving stream 0
/// to the field sampler.
pub fn build_mrw(m: &MeasurePath, seed: u64) -> MrwPath {
    let mut rng = replica_rng(seed, 1);
    build_mrw_with(m, &mut rng, SeedRecord { master: seed, stream: 1 })
}

pub fn build_mrw_with<R: Rng + ?Sized>(m: &MeasurePath, rng: &mut R, seed: SeedRecord) -> MrwPath {
    let sigma2 = m.params.sigma2;
    let mut x = 0.0;
    let values = m
        .increments
        .iter()
        .map(|&dm| {
            let z: f64 = rng.sample(StandardNormal);
            x += (sigma2 * dm).sqrt() * z;
            x
        })
        .collect();
    MrwPath {
        grid: m.grid,
        values,
        hurst: 0.5,
        source: Arc::new(m.clone()),
        seed,
    }
}

/// Parabolic scaling exponent `q (1 + lambda2/2) - lambda2 q^2 / 2`.
pub fn zeta(q: f64, lambda2: f64) -> f64 {
    q * (1.0 + 0.5 * lambda2) - 0.5 * lambda2 * q * q
}

/// Log-normal factor linking the field at scale ratio `r` to the field at 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfSimFactor {
    pub ratio: f64,
    pub mean: f64,
    pub variance: f64,
}

impl SelfSimFactor {
    pub fn new(ratio: f64, lambda2: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(CascadeError::InvalidParameter(format!(
                "scale ratio must lie in (0, 1], got {ratio}"
            )));
        }
        let variance = -lambda2 * ratio.ln();
        Ok(SelfSimFactor {
            ratio,
            mean: -0.5 * variance,
            variance,
        })
    }

    /// `E[exp(q Omega_r)]`.
    pub fn exp_moment(&self, q: f64) -> f64 {
        (q * self.mean + 0.5 * q * q * self.variance).exp()
    }

    /// Ratio `E[M_T(r t)^q] / E[M_T(t)^q] = r^q E[exp(q Omega_r)] = r^zeta(q)`.
    pub fn moment_ratio(&self, q: f64) -> f64 {
        self.ratio.powf(q) * self.exp_moment(q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentKind {
    Exact,
    MonteCarlo,
}

/// Moments `E[M(tau)^q]` (or of `|X(tau)|^q`) indexed `[q][tau]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentTable {
    pub orders: Vec<f64>,
    pub lags: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub stderr: Option<Vec<Vec<f64>>>,
    pub kind: MomentKind,
}

/// Monte-Carlo moments of `M(t0 + tau) - M(t0)` for `tau = steps * dt`.
pub fn measure_moments_mc(
    kind: ModelKind,
    grid: &TimeGrid,
    params: &CascadeParams,
    orders: &[f64],
    tau_steps: &[usize],
    reps: usize,
    seed: u64,
    exec: Execution,
) -> Result<MomentTable> {
    if let Some(&bad) = tau_steps.iter().find(|&&k| k == 0 || k > grid.n) {
        return Err(CascadeError::InvalidParameter(format!(
            "lag of {bad} steps outside 1..={}",
            grid.n
        )));
    }
    let sampler = GaussianSampler::for_field(kind, grid, params)?;
    let per_rep: Vec<Vec<f64>> = sampler.replicas(seed, reps, exec, |_, omega| {
        let mut cum = 0.0;
        let mut at = Vec::with_capacity(tau_steps.len());
        let mut sorted: Vec<(usize, usize)> = tau_steps.iter().copied().enumerate().collect();
        sorted.sort_by_key(|&(_, k)| k);
        let mut next = 0;
        let mut m_at = vec![0.0; tau_steps.len()];
        for (i, w) in omega.iter().enumerate() {
            cum += w.exp() * grid.dt;
            while next < sorted.len() && sorted[next].1 == i + 1 {
                m_at[sorted[next].0] = cum;
                next += 1;
            }
        }
        for &m in &m_at {
            at.push(m);
        }
        at
    });
    let mut values = vec![vec![0.0; tau_steps.len()]; orders.len()];
    let mut stderr = values.clone();
    for (qi, &q) in orders.iter().enumerate() {
        for ti in 0..tau_steps.len() {
            let xs: Vec<f64> = per_rep.iter().map(|r| r[ti].powf(q)).collect();
            let est = MeanEstimate::from_samples(&xs);
            values[qi][ti] = est.mean;
            stderr[qi][ti] = est.stderr;
        }
    }
    Ok(MomentTable {
        orders: orders.to_vec(),
        lags: tau_steps.iter().map(|&k| k as f64 * grid.dt).collect(),
        values,
        stderr: Some(stderr),
        kind: MomentKind::MonteCarlo,
    })
}

/// Default absolute tolerance for the double integrals below.
pub const QUAD_TOL: f64 = 1e-8;

/// `2 * int_0^x du int_0^u dv g(u) (u - v)^(-a)`: the symmetric square
/// integral of `g(max(u, v)) |u - v|^(-a)` over `[0, x]^2`.
///
/// The inner integral is taken in `w = (u - v)^(1 - a)`, which turns the
/// diagonal power singularity into a bounded integrand.
fn singular_square_integral(x: f64, a: f64, g: impl Fn(f64, f64) -> f64, tol: f64) -> Result<f64> {
    let b = 1.0 - a;
    let inner_tol = 0.1 * tol / x.max(1.0);
    let mut failure = None;
    let outer = integrate(
        |u| {
            if u <= 0.0 {
                return 0.0;
            }
            let top = u.powf(b);
            let inner = integrate(
                |w| {
                    let v = u - w.powf(1.0 / b);
                    g(u, v) / b
                },
                0.0,
                top,
                inner_tol,
            );
            match inner {
                Ok(r) => r.value,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        0.0,
        x,
        tol,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(2.0 * outer?.value)
}

fn check_moment_lambda(lambda2: f64) -> Result<()> {
    if !(lambda2 >= 0.0) {
        return Err(CascadeError::InvalidParameter(format!(
            "lambda2 must be >= 0, got {lambda2}"
        )));
    }
    if lambda2 >= 1.0 {
        return Err(CascadeError::Divergence(lambda2));
    }
    Ok(())
}

/// `E[M(tau)^2] = C2 tau^2` for the aging model, with `C2` from quadrature.
pub fn exact_moment2(tau: f64, lambda2: f64) -> Result<f64> {
    exact_moment2_with_tol(tau, lambda2, QUAD_TOL)
}

pub fn exact_moment2_with_tol(tau: f64, lambda2: f64, tol: f64) -> Result<f64> {
    check_moment_lambda(lambda2)?;
    let c2 = singular_square_integral(1.0, lambda2, |u, v| u.max(v).powf(lambda2), tol)?;
    Ok(c2 * tau * tau)
}

/// `E[(M(t + tau) - M(t))^2]` for the aging model by quadrature of
/// `((t + max(u, v)) / |u - v|)^lambda2` over `[0, tau]^2`.
pub fn exact_increment_moment2(t: f64, tau: f64, lambda2: f64) -> Result<f64> {
    exact_increment_moment2_with_tol(t, tau, lambda2, QUAD_TOL)
}

pub fn exact_increment_moment2_with_tol(t: f64, tau: f64, lambda2: f64, tol: f64) -> Result<f64> {
    check_moment_lambda(lambda2)?;
    if !(t >= 0.0) || !(tau > 0.0) {
        return Err(CascadeError::InvalidParameter(format!(
            "need t >= 0 and tau > 0, got t={t}, tau={tau}"
        )));
    }
    if lambda2 == 0.0 {
        return Ok(tau * tau);
    }
    // Integrate on the unit square and rescale, so the tolerance is relative to tau^2.
    let unit = singular_square_integral(
        1.0,
        lambda2,
        |u, v| (t / tau + u.max(v)).powf(lambda2),
        tol,
    )?;
    Ok(unit * tau.powf(2.0 - lambda2) * tau.powf(lambda2))
}

/// Small-`tau / t` form `2 t^lambda2 tau^(2 - lambda2) / ((1 - lambda2)(2 - lambda2))`.
pub fn increment_moment2_asymptotic(t: f64, tau: f64, lambda2: f64) -> f64 {
    2.0 * t.powf(lambda2) * tau.powf(2.0 - lambda2) / ((1.0 - lambda2) * (2.0 - lambda2))
}

/// One row of the coupled-cutoff convergence table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub ell_coarse: f64,
    pub ell_fine: f64,
    pub mean_square_diff: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub horizon: f64,
    pub dt: f64,
    pub reps: usize,
    pub rows: Vec<ConvergenceRow>,
    /// `rows[k].mean_square_diff / rows[k + 1].mean_square_diff`.
    pub ratios: Vec<f64>,
    pub warning: Option<String>,
}

/// Monte-Carlo estimate of `E[(M_l(t) - M_l'(t))^2]` for consecutive cutoffs.
///
/// All cutoff levels are driven by the same white noise: the cone mass above
/// the coarsest cutoff is drawn exactly, and each finer level adds an
/// independent exact draw of the band of scales between the two cutoffs. `ell_list` must be non-increasing and the grid step is
/// `min(ell) / points_per_cutoff`.
pub fn convergence_diagnostic(
    horizon: f64,
    ell_list: &[f64],
    params: &CascadeParams,
    reps: usize,
    seed: u64,
    points_per_cutoff: usize,
    exec: Execution,
) -> Result<ConvergenceTable> {
    if ell_list.len() < 2 {
        return Err(CascadeError::InvalidParameter(
            "need at least two cutoffs".into(),
        ));
    }
    if ell_list.windows(2).any(|w| w[1] > w[0]) || ell_list.iter().any(|&l| !(l > 0.0)) {
        return Err(CascadeError::InvalidParameter(
            "cutoffs must be positive and non-increasing".into(),
        ));
    }
    if points_per_cutoff == 0 || reps < 2 {
        return Err(CascadeError::InvalidParameter(
            "need points_per_cutoff >= 1 and reps >= 2".into(),
        ));
    }
    let warning = (reps < 100).then(|| format!("only {reps} replicas; estimates are unstable below 100"));
    if let Some(w) = &warning {
        log::warn!("{w}");
    }
    let kind = params.kind();
    let finest = *ell_list.last().unwrap();
    let dt = finest / points_per_cutoff as f64;
    let n = (horizon / dt).round() as usize;
    let grid = TimeGrid::new(0.0, dt, n.max(1))?;
    let times = grid.times();
    let level_params: Vec<CascadeParams> = ell_list
        .iter()
        .map(|&l| params.with_cutoff(l))
        .collect::<Result<_>>()?;
    // Level k is the field driven by cone cells at scales >= ell_k. The shared
    // part is the full cone mass, which for the aging field is nonzero even
    // below the cutoff where the field itself is set to zero.
    let kernel = |p: &CascadeParams, a: f64, b: f64| -> Result<f64> {
        match kind {
            ModelKind::Stationary => field_cov(kind, a, b, p),
            ModelKind::Nonstationary => Ok(cone_overlap_nonstationary(a, b, p)),
        }
    };
    let cov_of = |p: &CascadeParams| -> Result<PackedLower> {
        let mut err = None;
        let m = PackedLower::from_fn(grid.n, |i, j| match kernel(p, times[i], times[j]) {
            Ok(c) => c,
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        });
        err.map_or(Ok(m), Err)
    };
    let means: Vec<Vec<f64>> = level_params
        .iter()
        .map(|p| times.iter().map(|&t| field_mean(kind, t, p)).collect())
        .collect::<Result<_>>()?;
    let masks: Vec<Vec<bool>> = level_params
        .iter()
        .map(|p| {
            times
                .iter()
                .map(|&t| kind == ModelKind::Stationary || t >= p.cutoff)
                .collect()
        })
        .collect();
    let mut covs = Vec::with_capacity(level_params.len());
    for p in &level_params {
        covs.push(cov_of(p)?);
    }
    let base = GaussianSampler::from_moments(vec![0.0; grid.n], &covs[0])?;
    let strips = (1..covs.len())
        .map(|k| {
            let strip = PackedLower::from_fn(grid.n, |i, j| {
                // Clamp rounding noise where the two kernels coincide.
                let d = covs[k].get(i, j) - covs[k - 1].get(i, j);
                if d.abs() < 1e-14 * covs[k].get(i, j).abs().max(1.0) {
                    0.0
                } else {
                    d
                }
            });
            GaussianSampler::from_moments(vec![0.0; grid.n], &strip)
        })
        .collect::<Result<Vec<_>>>()?;
    let levels = ell_list.len();
    let diffs: Vec<Vec<f64>> = exec.map_indexed(reps, |r| {
        let mut rng = replica_rng(seed, r as u64);
        let mut noise = base.sample(&mut rng);
        let mut totals = Vec::with_capacity(levels);
        for k in 0..levels {
            if k > 0 {
                let add = strips[k - 1].sample(&mut rng);
                for (a, b) in noise.iter_mut().zip(&add) {
                    *a += b;
                }
            }
            let m: f64 = noise
                .iter()
                .zip(&means[k])
                .zip(&masks[k])
                .map(|((z, mu), &on)| if on { (z + mu).exp() } else { 1.0 })
                .sum::<f64>()
                * dt;
            totals.push(m);
        }
        totals.windows(2).map(|w| (w[1] - w[0]).powi(2)).collect()
    });
    let rows: Vec<ConvergenceRow> = (0..levels - 1)
        .map(|k| {
            let xs: Vec<f64> = diffs.iter().map(|d| d[k]).collect();
            let est = MeanEstimate::from_samples(&xs);
            ConvergenceRow {
                ell_coarse: ell_list[k],
                ell_fine: ell_list[k + 1],
                mean_square_diff: est.mean,
                stderr: est.stderr,
            }
        })
        .collect();
    let ratios = rows
        .windows(2)
        .map(|w| w[0].mean_square_diff / w[1].mean_square_diff)
        .collect();
    Ok(ConvergenceTable {
        horizon,
        dt,
        reps,
        rows,
        ratios,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian_field::sample_path;
    use approx::assert_abs_diff_eq;

    fn unit_path(values: Vec<f64>, dt: f64) -> GaussianLogVolPath {
        GaussianLogVolPath {
            grid: TimeGrid::new(0.0, dt, values.len()).unwrap(),
            values,
            model_kind: ModelKind::Nonstationary,
            params: CascadeParams::nonstationary(0.0, dt).unwrap(),
            seed: SeedRecord { master: 0, stream: 0 },
        }
    }

    #[test]
    fn unit_density_measure() {
        let m = build_measure(&unit_path(vec![0.0; 10], 1.0)).unwrap();
        let expect: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        assert_eq!(m.cumulative, expect);
        assert_eq!(m.times(), expect);
    }

    #[test]
    fn constant_log_density() {
        let c = 0.7;
        let m = build_measure(&unit_path(vec![c; 8], 0.5)).unwrap();
        for (i, &v) in m.cumulative.iter().enumerate() {
            let t = (i + 1) as f64 * 0.5;
            assert_abs_diff_eq!(v, c.exp() * t, epsilon = 1e-12);
        }
    }

    #[test]
    fn overflow_names_index() {
        let err = build_measure(&unit_path(vec![0.0, 1.0, 750.0], 1.0)).unwrap_err();
        assert_eq!(err, CascadeError::Overflow { index: 2, value: 750.0 });
    }

    #[test]
    fn measure_invariants_hold_on_random_path() {
        let grid = TimeGrid::new(0.0, 1.0, 300).unwrap();
        let p = CascadeParams::nonstationary(0.4, 1.0).unwrap();
        let path = sample_path(ModelKind::Nonstationary, &grid, &p, 17).unwrap();
        let m = build_measure(&path).unwrap();
        assert!(m.increments.iter().all(|&d| d >= 0.0));
        let mut running = 0.0;
        for (d, c) in m.increments.iter().zip(&m.cumulative) {
            running += d;
            assert!((running - c).abs() <= 1e-10 * c.abs());
        }
        assert!(m.cumulative.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta(0.0, 0.3), 0.0);
        assert_abs_diff_eq!(zeta(1.0, 0.3), 1.0, epsilon = 1e-15);
        for &l2 in &[0.0, 0.01, 0.2, 0.9] {
            assert_abs_diff_eq!(zeta(2.0, l2), 2.0 - l2, epsilon = 1e-15);
        }
    }

    #[test]
    fn zeta_is_concave() {
        for &l2 in &[0.0, 0.05, 0.5] {
            let qs: Vec<f64> = (0..40).map(|i| -2.0 + 0.25 * i as f64).collect();
            for w in qs.windows(3) {
                let d2 = zeta(w[2], l2) - 2.0 * zeta(w[1], l2) + zeta(w[0], l2);
                assert!(d2 <= 1e-12);
            }
        }
    }

    #[test]
    fn self_similarity_factor() {
        let f = SelfSimFactor::new(0.5, 0.2).unwrap();
        assert!(f.variance >= 0.0);
        assert_abs_diff_eq!(f.mean, -0.5 * f.variance);
        assert_abs_diff_eq!(f.exp_moment(1.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.moment_ratio(2.0), 0.5f64.powf(zeta(2.0, 0.2)), epsilon = 1e-14);
        assert_abs_diff_eq!(f.moment_ratio(3.5), 0.5f64.powf(zeta(3.5, 0.2)), epsilon = 1e-14);
        assert!(SelfSimFactor::new(1.5, 0.2).is_err());
    }

    #[test]
    fn brownian_subordination_is_seeded() {
        let m = build_measure(&unit_path(vec![0.0; 50], 1.0)).unwrap();
        let a = build_mrw(&m, 4);
        let b = build_mrw(&m, 4);
        assert_eq!(a, b);
        assert_ne!(a.values, build_mrw(&m, 5).values);
        assert_eq!(a.with_origin()[0], 0.0);
        assert_eq!(a.hurst, 0.5);
    }

    #[test]
    fn second_moment_quadrature() {
        assert_abs_diff_eq!(exact_moment2(2.0, 0.0).unwrap(), 4.0, epsilon = 1e-9);
        assert!(matches!(exact_moment2(1.0, 1.0), Err(CascadeError::Divergence(_))));
        assert!(exact_increment_moment2(1.0, 1.0, 1.2).is_err());
    }

    #[test]
    fn increment_moment_reduces_at_origin() {
        for &l2 in &[0.1, 0.5] {
            let a = exact_increment_moment2(0.0, 1.7, l2).unwrap();
            let b = exact_moment2(1.7, l2).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-8);
        }
        assert_abs_diff_eq!(exact_increment_moment2(30.0, 0.4, 0.0).unwrap(), 0.16, epsilon = 1e-15);
    }

    #[test]
    fn convergence_degenerate_cases() {
        let p = CascadeParams::nonstationary(0.0, 0.1).unwrap();
        let t = convergence_diagnostic(1.0, &[0.1, 0.05, 0.025], &p, 10, 1, 2, Execution::Sequential)
            .unwrap();
        assert!(t.rows.iter().all(|r| r.mean_square_diff == 0.0));
        assert!(t.warning.is_some());
        let q = CascadeParams::nonstationary(0.2, 0.1).unwrap();
        let t = convergence_diagnostic(1.0, &[0.1, 0.1], &q, 10, 1, 4, Execution::Sequential).unwrap();
        assert_eq!(t.rows[0].mean_square_diff, 0.0);
        assert!(convergence_diagnostic(1.0, &[0.05, 0.1], &q, 10, 1, 4, Execution::Sequential).is_err());
    }
}
