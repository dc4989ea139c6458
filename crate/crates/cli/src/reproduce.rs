//! Figure reproductions: empirical curves, closed-form overlays and a
//! pass/fail summary per figure.

use lognormal_cascade::estimators::{
    expected_bias_curve, expected_cov_approx, expected_subsampled_covariance, integral_scale_scan_pooled, magnitude_from_omega,
    subsampled_covariance,
    scan_summary, CovarianceEstimate, MagnitudeSeries, ScalingFit, ScanRow,
};
use lognormal_cascade::gaussian_field::{field_cov, BlockSampler, GaussianSampler, DENSE_LIMIT};
use lognormal_cascade::stats::fit_line;
use lognormal_cascade::{CascadeParams, Execution, ModelKind, TimeGrid};
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Figure};
use crate::error::{CliError, Result};
use crate::output::{num, opt, OutputDir, Table};
use crate::summary::{Check, Summary};

/// Times at which `fig4` cuts the covariance.
pub const FIG4_T2: [f64; 4] = [10.0, 40.0, 150.0, 500.0];

pub struct FigureOutput {
    pub tables: Vec<Table>,
    pub summary: Summary,
}

pub fn run(cfg: &ExperimentConfig) -> Result<Summary> {
    let figure = cfg
        .figure
        .ok_or_else(|| CliError::Validation("reproduce needs a figure".into()))?;
    let out = compute(figure, cfg)?;
    let dir = OutputDir::create(cfg)?;
    for t in &out.tables {
        dir.write_table(t)?;
    }
    dir.write_json("summary.json", &out.summary)?;
    Ok(out.summary)
}

pub fn compute(figure: Figure, cfg: &ExperimentConfig) -> Result<FigureOutput> {
    match figure {
        Figure::Fig4 => Ok(fig4(cfg, &field_replicas(cfg)?)?),
        Figure::Fig5 => Ok(fig5(cfg, &field_replicas(cfg)?)?),
        Figure::Fig6c => {
            let (series, block) = scan_series(cfg)?;
            fig6c(cfg, &series, block)
        }
        Figure::Fig8 => Ok(fig8(cfg, &scan(cfg)?)),
    }
}

/// `reps` exact samples of the field on the configured grid.
pub fn field_replicas(cfg: &ExperimentConfig) -> Result<Vec<Vec<f64>>> {
    let p = cfg.params()?;
    let sampler = GaussianSampler::for_field(cfg.model, &cfg.grid, &p)?;
    Ok(sampler.replicas(cfg.seed.unwrap_or(0), cfg.reps, Execution::Parallel, |_, w| w.to_vec()))
}

fn column(samples: &[Vec<f64>], i: usize) -> Vec<f64> {
    samples.iter().map(|s| s[i]).collect()
}

/// Sample covariance of two columns and the standard error of the mean of the
/// centered products.
pub fn covariance_with_stderr(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let prod: Vec<f64> = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).collect();
    let m = prod.iter().sum::<f64>() / n;
    let v = prod.iter().map(|p| (p - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m * n / (n - 1.0), (v / n).sqrt())
}

/// Unbiased sample variance and its large-sample standard error
/// `sqrt((m4 - m2^2) / n)`.
pub fn variance_with_stderr(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let m2 = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
    let m4 = x.iter().map(|v| (v - m).powi(4)).sum::<f64>() / n;
    (m2 * n / (n - 1.0), ((m4 - m2 * m2).max(0.0) / n).sqrt())
}

fn grid_index(grid: &TimeGrid, t: f64) -> Option<usize> {
    let k = (t - grid.t0) / grid.dt;
    let i = k.round();
    ((k - i).abs() < 1e-9 && i >= 0.0 && (i as usize) < grid.n).then_some(i as usize)
}

pub fn fig4(cfg: &ExperimentConfig, samples: &[Vec<f64>]) -> Result<FigureOutput> {
    let p = cfg.params()?;
    let grid = cfg.grid;
    let mut emp = Table::new("fig4_empirical", vec!["t2", "t1", "tau", "cov", "stderr"]);
    let mut theory = Table::new("fig4_theory", vec!["t2", "t1", "tau", "cov"]);
    let (mut hits, mut total) = (0usize, 0usize);
    let mut per_t2 = Vec::new();
    for &t2 in &FIG4_T2 {
        let Some(j) = grid_index(&grid, t2) else {
            log::warn!("t2 = {t2} is not on the grid; skipped");
            continue;
        };
        let y = column(samples, j);
        let (mut h, mut n) = (0usize, 0usize);
        for i in 0..=j {
            let t1 = grid.time(i);
            let tau = t2 - t1;
            let (c, se) = covariance_with_stderr(&column(samples, i), &y);
            let exact = field_cov(cfg.model, t1, t2, &p)?;
            emp.push(vec![num(t2), num(t1), num(tau), num(c), num(se)]);
            theory.push(vec![num(t2), num(t1), num(tau), num(exact)]);
            if tau >= 2.0 * p.cutoff {
                n += 1;
                if (c - exact).abs() <= 3.0 * se {
                    h += 1;
                }
            }
        }
        per_t2.push(json!({ "t2": t2, "lags": n, "within_3se": h }));
        hits += h;
        total += n;
    }
    if total == 0 {
        return Err(CliError::Validation(
            "no fig4 cut time with lags of at least 2 ell lies on the grid".into(),
        ));
    }
    let frac = hits as f64 / total as f64;
    let checks = vec![Check::within("cov_within_3se_fraction", frac, 0.95, 1.0)];
    let details = json!({ "lambda2": p.lambda2, "reps": samples.len(), "cuts": per_t2 });
    Ok(FigureOutput {
        tables: vec![emp, theory],
        summary: Summary::new("fig4", checks, details),
    })
}

pub fn fig5(cfg: &ExperimentConfig, samples: &[Vec<f64>]) -> Result<FigureOutput> {
    let p = cfg.params()?;
    let grid = cfg.grid;
    let mut emp = Table::new("fig5_empirical", vec!["t", "var", "stderr"]);
    let mut theory = Table::new("fig5_theory", vec!["t", "var"]);
    let (mut xs, mut ys, mut fit_times) = (Vec::new(), Vec::new(), Vec::new());
    let (mut inside, mut points) = (0usize, 0usize);
    for i in 0..grid.n {
        let t = grid.time(i);
        let (v, se) = variance_with_stderr(&column(samples, i));
        let exact = field_cov(cfg.model, t, t, &p)?;
        emp.push(vec![num(t), num(v), num(se)]);
        theory.push(vec![num(t), num(exact)]);
        points += 1;
        if (v - exact).abs() <= 3.0 * se {
            inside += 1;
        }
        if t >= 10.0 * p.cutoff && t <= 500.0 * p.cutoff {
            xs.push(t.ln());
            ys.push(v);
            fit_times.push(t);
        }
    }
    let line = fit_line(&xs, &ys, None).ok_or_else(|| {
        CliError::Validation("fig5 regression needs at least 3 grid times in [10 ell, 500 ell]".into())
    })?;
    let l2 = p.lambda2;
    let intercept = l2 * (1.0 - p.cutoff.ln());
    let sampling = regression_sampling_sd(cfg.model, &p, &fit_times, samples.len())?;
    let checks = vec![
        Check::around("slope", line.slope, l2, 0.05 * l2),
        Check::around("intercept", line.intercept, intercept, 0.15 * l2),
        Check::within("var_within_3se_fraction", inside as f64 / points as f64, 1.0, 1.0),
    ];
    let details = json!({
        "lambda2": l2,
        "reps": samples.len(),
        "fit_points": xs.len(),
        "slope_stderr": line.cov[1][1].sqrt(),
        "intercept_stderr": line.cov[0][0].sqrt(),
        "slope_sampling_sd": sampling.1,
        "intercept_sampling_sd": sampling.0,
    });
    Ok(FigureOutput {
        tables: vec![emp, theory],
        summary: Summary::new("fig5", checks, details),
    })
}

/// Exact sampling standard deviations of the `(intercept, slope)` of the
/// least-squares line of sample variances on `ln t`, for Gaussian replicas:
/// `Cov(s2(t), s2(u)) = 2 C(t, u)^2 / (reps - 1)`.
pub fn regression_sampling_sd(model: ModelKind, p: &CascadeParams, times: &[f64], reps: usize) -> Result<(f64, f64)> {
    let m = times.len() as f64;
    let x: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let mx = x.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let slope_w: Vec<f64> = x.iter().map(|v| (v - mx) / sxx).collect();
    let icpt_w: Vec<f64> = slope_w.iter().map(|w| 1.0 / m - mx * w).collect();
    let (mut vs, mut vi) = (0.0, 0.0);
    for (i, &a) in times.iter().enumerate() {
        for (j, &b) in times.iter().enumerate() {
            let c2 = field_cov(model, a, b, p)?.powi(2);
            vs += slope_w[i] * slope_w[j] * c2;
            vi += icpt_w[i] * icpt_w[j] * c2;
        }
    }
    let k = 2.0 / (reps as f64 - 1.0);
    Ok(((k * vi).sqrt(), (k * vs).sqrt()))
}

/// Every window length must leave at least 3 fit lags in `[2h, delta_t / 4]`.
pub fn check_windows(delta_t: &[f64], h: f64) -> Result<()> {
    for &d in delta_t {
        let k = d / h;
        if (k - k.round()).abs() > 1e-9 || k.round() < 16.0 {
            return Err(CliError::Validation(format!(
                "--delta-t {d} must be a multiple of the step {h} and at least 16 steps"
            )));
        }
    }
    Ok(())
}

pub type ScanOutput = Vec<(ScanRow, CovarianceEstimate, ScalingFit)>;

/// Block length used for paths that serve windows up to `widest` steps.
pub fn block_len(widest: usize, n: usize) -> usize {
    (8 * widest).min(DENSE_LIMIT).min(n)
}

/// Scan rows over `reps` independent block-wise paths with pooled windows.
pub fn scan(cfg: &ExperimentConfig) -> Result<ScanOutput> {
    let (series, _) = scan_series(cfg)?;
    Ok(integral_scale_scan_pooled(&series, &cfg.delta_t)?)
}

/// `reps` block-wise magnitude paths and the block length they were drawn with.
pub fn scan_series(cfg: &ExperimentConfig) -> Result<(Vec<MagnitudeSeries>, usize)> {
    let p = cfg.params()?;
    let grid = cfg.grid;
    check_windows(&cfg.delta_t, grid.dt)?;
    let widest = cfg
        .delta_t
        .iter()
        .map(|d| (d / grid.dt).round() as usize)
        .max()
        .unwrap_or(1);
    if 2 * widest > grid.n * cfg.reps {
        return Err(CliError::Validation(format!(
            "a window of {widest} steps needs at least {} grid points",
            2 * widest
        )));
    }
    let block = block_len(widest, grid.n);
    if block < widest {
        return Err(CliError::Validation(format!(
            "window of {widest} steps exceeds the block limit {DENSE_LIMIT}"
        )));
    }
    log::info!("sampling {} path(s) of {} points in blocks of {block}", cfg.reps, grid.n);
    let sampler = BlockSampler::new(cfg.model, &grid, &p, block)?;
    let seed = cfg.seed.unwrap_or(0);
    let series: Vec<MagnitudeSeries> = Execution::Parallel
        .try_map_indexed(cfg.reps, |r| magnitude_from_omega(&sampler.sample_path(seed, r as u64)))?;
    Ok((series, block))
}

/// Standard error of the pooled windowed covariance from independent blocks.
/// Windows inside one block share its slow fluctuations, so the spread across
/// windows understates the error at large `delta_t`. `None` with fewer than
/// two usable blocks.
pub fn block_stderr(series: &[MagnitudeSeries], block: usize, delta_t: f64, max_lag: usize) -> Result<Option<Vec<f64>>> {
    let mut batches = Vec::new();
    for s in series {
        let width = (delta_t / s.h).round() as usize;
        for (b, chunk) in s.values.chunks(block).enumerate() {
            if chunk.len() < 2 * width {
                continue;
            }
            let piece = MagnitudeSeries::new(s.h, s.origin + (b * block) as f64 * s.h, chunk.to_vec())?;
            batches.push(subsampled_covariance(&piece, delta_t, max_lag)?.values);
        }
    }
    if batches.len() < 2 {
        return Ok(None);
    }
    let k = batches.len() as f64;
    Ok(Some(
        (0..=max_lag)
            .map(|j| {
                let m = batches.iter().map(|b| b[j]).sum::<f64>() / k;
                let v = batches.iter().map(|b| (b[j] - m).powi(2)).sum::<f64>() / (k - 1.0);
                (v / k).sqrt()
            })
            .collect(),
    ))
}

/// Closed-form expectation of the subsampled estimator at `lags`.
pub fn covariance_overlay(model: ModelKind, p: &CascadeParams, lambda2: f64, est: &CovarianceEstimate, h: f64) -> Vec<Option<f64>> {
    match model {
        ModelKind::Nonstationary => est
            .lags
            .iter()
            .map(|&tau| expected_cov_approx(tau, est.delta_t, lambda2).ok())
            .collect(),
        ModelKind::Stationary => {
            let width = (est.delta_t / h).round() as usize;
            let q = CascadeParams { lambda2, ..*p };
            let c: Vec<f64> = (0..width)
                .map(|k| field_cov(model, 0.0, k as f64 * h, &q).unwrap_or(f64::NAN))
                .collect();
            expected_bias_curve(&c, est.lags.len() - 1).into_iter().map(Some).collect()
        }
    }
}

pub fn fitted_curve(fit: &ScalingFit, tau: f64) -> Option<f64> {
    fit.t_hat.filter(|_| tau > 0.0).map(|t| fit.lambda2_hat * (t / tau).ln())
}

pub fn fig6c(cfg: &ExperimentConfig, series: &[MagnitudeSeries], block: usize) -> Result<FigureOutput> {
    let rows = integral_scale_scan_pooled(series, &cfg.delta_t)?;
    let p = cfg.params()?;
    let h = cfg.grid.dt;
    let mut emp = Table::new("fig6c_empirical", vec!["delta_t", "lag", "cov", "stderr", "block_stderr"]);
    let mut theory = Table::new("fig6c_theory", vec!["delta_t", "lag", "exact", "covest", "fitted"]);
    let mut checks = Vec::new();
    let mut per_window = Vec::new();
    for (row, est, fit) in &rows {
        let max_lag = est.lags.len() - 1;
        let overlay = covariance_overlay(cfg.model, &p, p.lambda2, est, h);
        let exact = expected_subsampled_covariance(cfg.model, &cfg.grid, &p, est.delta_t, max_lag, Some(block))?;
        let window_se = est.stderr.clone().unwrap_or_else(|| vec![0.0; est.lags.len()]);
        let batch_se = block_stderr(series, block, est.delta_t, max_lag)?;
        let se = batch_se.clone().unwrap_or_else(|| window_se.clone());
        let (mut hits, mut n) = (0usize, 0usize);
        for (k, &lag) in est.lags.iter().enumerate() {
            emp.push(vec![
                num(row.delta_t),
                num(lag),
                num(est.values[k]),
                num(window_se[k]),
                opt(batch_se.as_ref().map(|b| b[k])),
            ]);
            theory.push(vec![
                num(row.delta_t),
                num(lag),
                num(exact[k]),
                opt(overlay[k]),
                opt(fitted_curve(fit, lag)),
            ]);
            if lag >= 2.0 * h && lag <= row.delta_t / 4.0 {
                n += 1;
                if (est.values[k] - exact[k]).abs() <= 3.0 * se[k] {
                    hits += 1;
                }
            }
        }
        let frac = if n > 0 { hits as f64 / n as f64 } else { f64::NAN };
        checks.push(Check::within(format!("within_3se_fraction_dt{}", row.delta_t), frac, 0.9, 1.0));
        per_window.push(json!({
            "delta_t": row.delta_t,
            "n_subsamples": row.n_subsamples,
            "lambda2_hat": row.lambda2_hat,
            "t_hat": row.t_hat,
            "degenerate": row.degenerate,
        }));
    }
    let details = json!({ "lambda2": p.lambda2, "reps": cfg.reps, "windows": per_window });
    Ok(FigureOutput {
        tables: vec![emp, theory],
        summary: Summary::new("fig6c", checks, details),
    })
}

pub fn fig8(cfg: &ExperimentConfig, rows: &[(ScanRow, CovarianceEstimate, ScalingFit)]) -> FigureOutput {
    let mut scan_table = Table::new(
        "fig8_scan",
        vec!["delta_t", "n_subsamples", "lambda2_hat", "t_hat", "t_hat_over_delta_t", "ln_t_stderr", "degenerate"],
    );
    let mut theory = Table::new("fig8_theory", vec!["delta_t", "t_apparent"]);
    for (row, _, _) in rows {
        scan_table.push(vec![
            num(row.delta_t),
            Value::from(row.n_subsamples),
            num(row.lambda2_hat),
            opt(row.t_hat),
            opt(row.t_hat.map(|t| t / row.delta_t)),
            opt(row.ln_t_stderr),
            Value::Bool(row.degenerate),
        ]);
        theory.push(vec![num(row.delta_t), num((-1.5f64).exp() * row.delta_t)]);
    }
    let scan_rows: Vec<ScanRow> = rows.iter().map(|r| r.0.clone()).collect();
    let s = scan_summary(&scan_rows);
    let mut checks = Vec::new();
    if cfg.model == ModelKind::Nonstationary {
        checks.push(Check::around("slope", s.map_or(f64::NAN, |s| s.slope), 1.0, 0.15));
        checks.push(Check::around("mean_log_ratio", s.map_or(f64::NAN, |s| s.mean_log_ratio), -1.5, 0.3));
    }
    let details = json!({
        "reps": cfg.reps,
        "rows_used": s.map_or(0, |s| s.rows_used),
        "slope_stderr": s.map(|s| s.slope_stderr),
        "intercept": s.map(|s| s.intercept),
        "degenerate_rows": scan_rows.iter().filter(|r| r.degenerate).count(),
    });
    FigureOutput {
        tables: vec![scan_table, theory],
        summary: Summary::new("fig8", checks, details),
    }
}
