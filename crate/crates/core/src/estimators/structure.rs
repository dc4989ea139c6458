use serde::{Deserialize, Serialize};

use crate::cascade_measure::{MeasurePath, MrwPath};
use crate::error::{CascadeError, Result};
use crate::stats::fit_line;

/// Grid of moment orders used for the log-moment curvature `c_q`.
const CURVATURE_STEP: f64 = 0.5;
const CURVATURE_MAX_Q: f64 = 4.0;

/// Curvature of `ln C_q` and of `zeta(q)` at one interior order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvaturePoint {
    pub q: f64,
    pub c_q: f64,
    pub zeta_dd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureFunctions {
    pub orders: Vec<f64>,
    pub lags: Vec<f64>,
    /// `moments[q][tau] = mean |increment|^q`.
    pub moments: Vec<Vec<f64>>,
    pub zeta_hat: Vec<f64>,
    pub zeta_stderr: Vec<f64>,
    /// `F(tau) = m4 / m2^2`.
    pub kurtosis: Vec<f64>,
    /// Curvatures on `q = 0.5, 1.0, ..., 4.0` at the smallest lag.
    pub curvature: Vec<CurvaturePoint>,
}

/// Anything that can be read as a level series `Y(t0 + k dt)`, `k = 0..=n`.
pub trait Levels {
    fn step(&self) -> f64;
    fn levels(&self) -> Vec<f64>;
}

impl Levels for MeasurePath {
    fn step(&self) -> f64 {
        self.grid.dt
    }
    fn levels(&self) -> Vec<f64> {
        self.with_origin()
    }
}

impl Levels for MrwPath {
    fn step(&self) -> f64 {
        self.grid.dt
    }
    fn levels(&self) -> Vec<f64> {
        self.with_origin()
    }
}

pub fn structure_functions<P: Levels>(x: &P, q_list: &[f64], tau_steps: &[usize]) -> Result<StructureFunctions> {
    structure_functions_pooled(&[x.levels()], x.step(), q_list, tau_steps)
}

/// Structure functions from several independent level series sharing one step;
/// every overlapping increment of every series enters the averages.
pub fn structure_functions_pooled(
    paths: &[Vec<f64>],
    dt: f64,
    q_list: &[f64],
    tau_steps: &[usize],
) -> Result<StructureFunctions> {
    if tau_steps.is_empty() || q_list.is_empty() || paths.is_empty() {
        return Err(CascadeError::InsufficientData(
            "need at least one path, order and lag".into(),
        ));
    }
    let shortest = paths.iter().map(|p| p.len()).min().unwrap_or(0);
    if let Some(&bad) = tau_steps.iter().find(|&&k| k == 0 || k >= shortest) {
        return Err(CascadeError::InvalidParameter(format!(
            "lag of {bad} steps does not fit paths of {shortest} levels"
        )));
    }
    let curvature_q: Vec<f64> = (1..=(CURVATURE_MAX_Q / CURVATURE_STEP) as usize)
        .map(|i| i as f64 * CURVATURE_STEP)
        .collect();
    let moments_at = |qs: &[f64], k: usize| -> Vec<f64> {
        let mut sums = vec![0.0; qs.len()];
        let mut count = 0usize;
        for p in paths {
            for w in 0..p.len() - k {
                let a = (p[w + k] - p[w]).abs();
                for (s, &q) in sums.iter_mut().zip(qs) {
                    *s += a.powf(q);
                }
                count += 1;
            }
        }
        sums.into_iter().map(|s| s / count as f64).collect()
    };
    let mut moments = vec![Vec::with_capacity(tau_steps.len()); q_list.len()];
    let mut kurtosis = Vec::with_capacity(tau_steps.len());
    for &k in tau_steps {
        let m = moments_at(q_list, k);
        for (row, v) in moments.iter_mut().zip(m) {
            row.push(v);
        }
        let m24 = moments_at(&[2.0, 4.0], k);
        kurtosis.push(m24[1] / (m24[0] * m24[0]));
    }
    for (qi, row) in moments.iter().enumerate() {
        if let Some(ti) = row.iter().position(|&v| !(v > 0.0)) {
            return Err(CascadeError::Degenerate(format!(
                "moment of order {} at lag {} steps is {}",
                q_list[qi], tau_steps[ti], row[ti]
            )));
        }
    }
    let lags: Vec<f64> = tau_steps.iter().map(|&k| k as f64 * dt).collect();
    let ln_tau: Vec<f64> = lags.iter().map(|t| t.ln()).collect();
    let fit_exponent = |row: &[f64]| -> (f64, f64) {
        let ln_m: Vec<f64> = row.iter().map(|v| v.ln()).collect();
        match fit_line(&ln_tau, &ln_m, None) {
            Some(l) => (l.slope, l.cov[1][1].sqrt()),
            None => (f64::NAN, f64::NAN),
        }
    };
    let (zeta_hat, zeta_stderr): (Vec<f64>, Vec<f64>) = moments.iter().map(|r| fit_exponent(r)).unzip();

    let smallest = *tau_steps.iter().min().unwrap();
    let curv_m0 = moments_at(&curvature_q, smallest);
    let curv_zeta: Vec<f64> = if tau_steps.len() >= 2 {
        let rows: Vec<Vec<f64>> = tau_steps.iter().map(|&k| moments_at(&curvature_q, k)).collect();
        (0..curvature_q.len())
            .map(|qi| fit_exponent(&rows.iter().map(|r| r[qi]).collect::<Vec<_>>()).0)
            .collect()
    } else {
        vec![f64::NAN; curvature_q.len()]
    };
    let h2 = CURVATURE_STEP * CURVATURE_STEP;
    let curvature = (1..curvature_q.len() - 1)
        .map(|i| CurvaturePoint {
            q: curvature_q[i],
            c_q: (curv_m0[i + 1].ln() - 2.0 * curv_m0[i].ln() + curv_m0[i - 1].ln()) / h2,
            zeta_dd: (curv_zeta[i + 1] - 2.0 * curv_zeta[i] + curv_zeta[i - 1]) / h2,
        })
        .collect();
    Ok(StructureFunctions {
        orders: q_list.to_vec(),
        lags,
        moments,
        zeta_hat,
        zeta_stderr,
        kurtosis,
        curvature,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcavityReport {
    /// Interior orders, in increasing order.
    pub orders: Vec<f64>,
    /// `zeta(q+) - 2 zeta(q) + zeta(q-)` at each interior order.
    pub second_differences: Vec<f64>,
    pub tolerances: Vec<f64>,
    /// Orders whose second difference exceeds its tolerance.
    pub violations: Vec<f64>,
}

/// Flags interior orders where the estimated `zeta` is convex by more than
/// three combined fit standard errors.
pub fn concavity_check(sf: &StructureFunctions) -> ConcavityReport {
    concavity_check_values(&sf.orders, &sf.zeta_hat, Some(&sf.zeta_stderr))
}

pub fn concavity_check_values(orders: &[f64], zeta: &[f64], stderr: Option<&[f64]>) -> ConcavityReport {
    let mut idx: Vec<usize> = (0..orders.len()).collect();
    idx.sort_by(|&a, &b| orders[a].total_cmp(&orders[b]));
    let se = |i: usize| stderr.map_or(0.0, |s| if s[i].is_finite() { s[i] } else { 0.0 });
    let mut report = ConcavityReport {
        orders: Vec::new(),
        second_differences: Vec::new(),
        tolerances: Vec::new(),
        violations: Vec::new(),
    };
    for w in idx.windows(3) {
        let (a, b, c) = (w[0], w[1], w[2]);
        let d2 = zeta[c] - 2.0 * zeta[b] + zeta[a];
        let tol = 3.0 * (se(a).powi(2) + 4.0 * se(b).powi(2) + se(c).powi(2)).sqrt()
            + 1e-12 * (zeta[a].abs() + zeta[b].abs() + zeta[c].abs());
        report.orders.push(orders[b]);
        report.second_differences.push(d2);
        report.tolerances.push(tol);
        if d2 > tol {
            report.violations.push(orders[b]);
        }
    }
    report
}

/// Curvatures of `zeta` closer to zero than this are rounding noise.
const CURVATURE_FLOOR: f64 = 1e-10;

/// `inf_q exp(-c_q / zeta''(q))` over orders with `zeta'' < 0`; `+inf` when
/// there are none.
pub fn integral_scale_bound_from(points: &[CurvaturePoint]) -> f64 {
    points
        .iter()
        .filter(|p| p.zeta_dd < -CURVATURE_FLOOR)
        .map(|p| (-p.c_q / p.zeta_dd).exp())
        .fold(f64::INFINITY, f64::min)
}

pub fn integral_scale_bound(sf: &StructureFunctions) -> f64 {
    integral_scale_bound_from(&sf.curvature)
}
