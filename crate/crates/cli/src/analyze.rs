//! Daily OHLC bars through the magnitude-covariance pipeline.

use std::fs::File;
use std::io::BufReader;

use lognormal_cascade::estimators::{expected_cov_approx, integral_scale_scan, scan_summary, ScanRow};
use lognormal_cascade::market_data::{magnitude_series, parse_ohlc, OhlcFormat, OhlcParse};
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::output::{num, opt, OutputDir, Table};
use crate::reproduce::{check_windows, fitted_curve};
use crate::summary::Summary;

pub struct AnalyzeOutput {
    pub tables: Vec<Table>,
    pub summary: Summary,
}

pub fn run(cfg: &ExperimentConfig) -> Result<Summary> {
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| CliError::Validation("analyze needs an input file".into()))?;
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let parsed = parse_ohlc(BufReader::new(file), OhlcFormat::default())?;
    let out = analyze(&parsed, cfg)?;
    let dir = OutputDir::create(cfg)?;
    for t in &out.tables {
        dir.write_table(t)?;
    }
    dir.write_json("summary.json", &out.summary)?;
    Ok(out.summary)
}

pub fn analyze(parsed: &OhlcParse, cfg: &ExperimentConfig) -> Result<AnalyzeOutput> {
    for e in &parsed.rejected {
        log::warn!("line {}: {}", e.line, e.message);
    }
    let daily = magnitude_series(&parsed.records, cfg.proxy)?;
    let series = daily.to_magnitude()?;
    let n = series.len();
    check_windows(&cfg.delta_t, 1.0)?;
    let smallest = cfg.delta_t.iter().copied().fold(f64::INFINITY, f64::min);
    if (n as f64) < 2.0 * smallest {
        return Err(CliError::Validation(format!(
            "series too short: {n} daily magnitudes, the smallest window of {smallest} days needs at least {}",
            2.0 * smallest
        )));
    }
    let (usable, skipped): (Vec<f64>, Vec<f64>) = cfg.delta_t.iter().partition(|&&d| n as f64 >= 2.0 * d);
    for d in &skipped {
        log::warn!("window of {d} days fits fewer than 2 times in {n} days; skipped");
    }

    let rows = integral_scale_scan(&series, &usable)?;

    let mut magnitude = Table::new("magnitude", vec!["k", "date", "omega"]);
    for (k, (d, v)) in daily.dates.iter().zip(&daily.values).enumerate() {
        magnitude.push(vec![Value::from(k), Value::String(d.to_string()), num(*v)]);
    }
    let mut cov = Table::new("covariance", vec!["delta_t", "lag", "cov", "stderr", "covest", "fitted"]);
    let mut scan = Table::new(
        "scan",
        vec!["delta_t", "n_subsamples", "lambda2_hat", "t_hat", "t_hat_over_delta_t", "ln_t_stderr", "degenerate"],
    );
    let given = cfg.params.map(|p| p.lambda2);
    for (row, est, fit) in &rows {
        let overlay_l2 = given.or((!fit.degenerate).then_some(fit.lambda2_hat));
        let overlay: Vec<Option<f64>> = est
            .lags
            .iter()
            .map(|&tau| overlay_l2.and_then(|l2| expected_cov_approx(tau, est.delta_t, l2).ok()))
            .collect();
        let se = est.stderr.clone().unwrap_or_else(|| vec![f64::NAN; est.lags.len()]);
        for (k, &lag) in est.lags.iter().enumerate() {
            cov.push(vec![
                num(row.delta_t),
                num(lag),
                num(est.values[k]),
                num(se[k]),
                opt(overlay[k]),
                opt(fitted_curve(fit, lag)),
            ]);
        }
        scan.push(vec![
            num(row.delta_t),
            Value::from(row.n_subsamples),
            num(row.lambda2_hat),
            opt(row.t_hat),
            opt(row.t_hat.map(|t| t / row.delta_t)),
            opt(row.ln_t_stderr),
            Value::Bool(row.degenerate),
        ]);
    }
    let scan_rows: Vec<ScanRow> = rows.iter().map(|r| r.0.clone()).collect();
    let mut fitted: Vec<f64> = scan_rows.iter().filter(|r| !r.degenerate).map(|r| r.lambda2_hat).collect();
    fitted.sort_by(f64::total_cmp);
    let median = (!fitted.is_empty()).then(|| fitted[fitted.len() / 2]);
    let details = json!({
        "records": parsed.records.len(),
        "rejected_rows": parsed.rejected.len(),
        "reordered": parsed.reordered,
        "skipped_days": daily.skipped,
        "magnitudes": n,
        "proxy": cfg.proxy,
        "overlay_lambda2": given.map_or(Value::from("fitted"), Value::from),
        "lambda2_hat_median": median,
        "skipped_windows": skipped,
        "scan": scan_summary(&scan_rows),
        "rows": scan_rows,
    });
    Ok(AnalyzeOutput {
        tables: vec![magnitude, cov, scan],
        summary: Summary::new("analyze", Vec::new(), details),
    })
}
