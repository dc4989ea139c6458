//! Cone-discretization sampler: an independent route to the same fields.
//!
//! The time-scale half-plane is cut into logarithmic scale layers
//! `s_k = cutoff * 2^(k / resolution)` and uniform time cells. Each cell carries
//! an independent Gaussian with variance `lambda2 * du * (1/s_lo - 1/s_hi)`,
//! the white-noise mass of the cell. `omega(t)` is the sum of the cells whose
//! centers fall inside the cone of `t`, plus the closed-form mean. Sums over a
//! layer use prefix sums, so one replica costs `O(cells + n * layers)`.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{CascadeError, Result};
use crate::exec::{replica_rng, Execution, SeedRecord};
use crate::gaussian_field::{field_mean, GaussianLogVolPath};
use crate::params::{CascadeParams, ModelKind, TimeGrid};

/// Hard cap on the number of noise cells per replica.
pub const CELL_CAP: usize = 1 << 26;

/// Resolutions below this emit a warning.
pub const MIN_RESOLUTION: usize = 4;

/// Whether `(u, s)` lies in the cone of time `t`.
pub fn cone_contains(kind: ModelKind, t: f64, u: f64, s: f64, p: &CascadeParams) -> bool {
    if s < p.cutoff || u > t {
        return false;
    }
    match kind {
        ModelKind::Stationary => {
            let width = match p.integral_scale {
                Some(big) => s.min(big),
                None => s,
            };
            u >= t - width
        }
        ModelKind::Nonstationary => t >= p.cutoff && u >= (t - s).max(0.0),
    }
}

#[derive(Debug, Clone)]
struct Layer {
    /// Scale used for the cone-membership test.
    s_rep: f64,
    /// `false` for the open top layer, whose cone width is the horizon.
    bounded: bool,
    width: f64,
    u_min: f64,
    cells: usize,
    sd: f64,
}

/// Sampler built on a fixed cone discretization.
#[derive(Debug, Clone)]
pub struct ConeSampler {
    kind: ModelKind,
    grid: TimeGrid,
    params: CascadeParams,
    resolution: usize,
    layers: Vec<Layer>,
    mean: Vec<f64>,
}

impl ConeSampler {
    pub fn new(kind: ModelKind, grid: &TimeGrid, p: &CascadeParams, scale_resolution: usize) -> Result<Self> {
        p.validate()?;
        if scale_resolution == 0 {
            return Err(CascadeError::InvalidParameter(
                "scale resolution must be at least 1 layer per octave".into(),
            ));
        }
        if scale_resolution < MIN_RESOLUTION {
            log::warn!(
                "cone resolution {scale_resolution} is below {MIN_RESOLUTION} layers per octave; \
                 expect visible discretization bias"
            );
        }
        let ell = p.cutoff;
        let t_max = grid.last();
        let (top_scale, u_min) = match kind {
            ModelKind::Stationary => {
                let big = p.require_integral_scale()?;
                (big, grid.t0 - big)
            }
            ModelKind::Nonstationary => (t_max.max(ell), 0.0),
        };
        let span = (t_max - u_min).max(0.0);
        let ratio = 2f64.powf(1.0 / scale_resolution as f64);
        let mut layers = Vec::new();
        let mut total = 0usize;
        let mut push = |s_lo: f64, s_hi: Option<f64>, layers: &mut Vec<Layer>| -> Result<()> {
            let width = 0.5 * s_lo.min(grid.dt);
            let cells = ((span / width).ceil() as usize).max(1);
            total = total.saturating_add(cells);
            if total > CELL_CAP {
                return Err(CascadeError::MemoryCap {
                    cells: total,
                    cap: CELL_CAP,
                });
            }
            let mass = match s_hi {
                Some(hi) => 1.0 / s_lo - 1.0 / hi,
                None => 1.0 / s_lo,
            };
            layers.push(Layer {
                s_rep: match s_hi {
                    Some(hi) => (s_lo * hi).sqrt(),
                    None => s_lo,
                },
                bounded: s_hi.is_some(),
                width,
                u_min,
                cells,
                sd: (p.lambda2 * width * mass).sqrt(),
            });
            Ok(())
        };
        if p.lambda2 > 0.0 && t_max >= ell {
            let mut s_lo = ell;
            while s_lo < top_scale * (1.0 - 1e-12) {
                let s_hi = (s_lo * ratio).min(top_scale);
                push(s_lo, Some(s_hi), &mut layers)?;
                s_lo = s_hi;
            }
            push(top_scale, None, &mut layers)?;
        }
        let mean = grid
            .times()
            .into_iter()
            .map(|t| field_mean(kind, t, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(ConeSampler {
            kind,
            grid: *grid,
            params: *p,
            resolution: scale_resolution,
            layers,
            mean,
        })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn total_cells(&self) -> usize {
        self.layers.iter().map(|l| l.cells).sum()
    }

    /// Inclusive-exclusive cell index range of `layer` inside the cone of `t`.
    fn cell_range(&self, layer: &Layer, t: f64) -> (usize, usize) {
        let lo_u = if !layer.bounded {
            match self.kind {
                ModelKind::Stationary => t - self.params.integral_scale.unwrap_or(layer.s_rep),
                ModelKind::Nonstationary => 0.0,
            }
        } else {
            match self.kind {
                ModelKind::Stationary => {
                    t - layer.s_rep.min(self.params.integral_scale.unwrap_or(f64::INFINITY))
                }
                ModelKind::Nonstationary => (t - layer.s_rep).max(0.0),
            }
        };
        // Cell j has center u_min + (j + 1/2) * width.
        let first = ((lo_u - layer.u_min) / layer.width - 0.5).ceil().max(0.0) as usize;
        let last = ((t - layer.u_min) / layer.width - 0.5).floor();
        if last < 0.0 {
            return (0, 0);
        }
        let end = ((last as usize) + 1).min(layer.cells);
        (first.min(end), end)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let times = self.grid.times();
        let mut out = self.mean.clone();
        let mut prefix = Vec::new();
        for layer in &self.layers {
            prefix.clear();
            prefix.reserve(layer.cells + 1);
            let mut acc = 0.0;
            prefix.push(acc);
            for _ in 0..layer.cells {
                let z: f64 = rng.sample(StandardNormal);
                acc += layer.sd * z;
                prefix.push(acc);
            }
            for (o, &t) in out.iter_mut().zip(&times) {
                if self.kind == ModelKind::Nonstationary && t < self.params.cutoff {
                    continue;
                }
                let (a, b) = self.cell_range(layer, t);
                *o += prefix[b] - prefix[a];
            }
        }
        out
    }

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

/// One path from the cone-discretization sampler.
pub fn sample_path_cone(
    kind: ModelKind,
    grid: &TimeGrid,
    p: &CascadeParams,
    seed: u64,
    scale_resolution: usize,
) -> Result<GaussianLogVolPath> {
    let sampler = ConeSampler::new(kind, grid, p, scale_resolution)?;
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_intermittency_gives_zero_field() {
        let grid = TimeGrid::new(0.0, 1.0, 50).unwrap();
        let p = CascadeParams::nonstationary(0.0, 1.0).unwrap();
        let path = sample_path_cone(ModelKind::Nonstationary, &grid, &p, 1, 4).unwrap();
        assert!(path.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn cell_inside_every_cone() {
        // A cell at large scale and early time belongs to every cone on the grid,
        // so it adds the same amount to every omega(t).
        let p = CascadeParams::nonstationary(0.5, 1.0).unwrap();
        let times = [2.0, 10.0, 40.0, 99.0];
        for &t in &times {
            assert!(cone_contains(ModelKind::Nonstationary, t, 0.5, 200.0, &p));
        }
        assert!(!cone_contains(ModelKind::Nonstationary, 0.5, 0.2, 200.0, &p));
        assert!(!cone_contains(ModelKind::Nonstationary, 10.0, 5.0, 0.5, &p));
        assert!(!cone_contains(ModelKind::Nonstationary, 10.0, 5.0, 4.0, &p));
        assert!(cone_contains(ModelKind::Nonstationary, 10.0, 5.0, 5.0, &p));
        let q = CascadeParams::stationary(0.5, 20.0, 1.0).unwrap();
        assert!(cone_contains(ModelKind::Stationary, 50.0, 31.0, 1e9, &q));
        assert!(!cone_contains(ModelKind::Stationary, 50.0, 29.0, 1e9, &q));
    }

    #[test]
    fn top_layer_is_shared_by_all_times() {
        // With only the open top layer contributing, every grid time sees the
        // same cells and the fluctuations are perfectly correlated.
        let grid = TimeGrid::new(1.0, 1.0, 1).unwrap();
        let p = CascadeParams::nonstationary(0.3, 1.0).unwrap();
        let s = ConeSampler::new(ModelKind::Nonstationary, &grid, &p, 4).unwrap();
        assert_eq!(s.layers.len(), 1);
        assert!(!s.layers[0].bounded);
        let wide = TimeGrid::new(3.0, 1.0, 1).unwrap();
        let s = ConeSampler::new(ModelKind::Nonstationary, &wide, &p, 4).unwrap();
        let top = s.layers.last().unwrap();
        assert_eq!(s.cell_range(top, 3.0), (0, top.cells));
    }

    #[test]
    fn discretized_variance_tracks_kernel() {
        // Sum of cell variances inside a cone approximates the closed-form variance.
        let grid = TimeGrid::new(0.0, 1.0, 201).unwrap();
        let p = CascadeParams::nonstationary(1.0, 1.0).unwrap();
        let s = ConeSampler::new(ModelKind::Nonstationary, &grid, &p, 16).unwrap();
        for &t in &[5.0, 50.0, 200.0] {
            let v: f64 = s
                .layers
                .iter()
                .map(|l| {
                    let (a, b) = s.cell_range(l, t);
                    (b - a) as f64 * l.sd * l.sd
                })
                .sum();
            let exact = 1.0 + t.ln();
            assert!((v - exact).abs() < 0.1 * exact, "t={t}: {v} vs {exact}");
        }
    }

    #[test]
    fn memory_cap_is_reported() {
        let grid = TimeGrid::new(0.0, 1e-6, 10).unwrap();
        let p = CascadeParams::stationary(0.1, 1e4, 1e-6).unwrap();
        assert!(matches!(
            ConeSampler::new(ModelKind::Stationary, &grid, &p, 8),
            Err(CascadeError::MemoryCap { .. })
        ));
    }

    #[test]
    fn zero_resolution_rejected() {
        let grid = TimeGrid::new(0.0, 1.0, 10).unwrap();
        let p = CascadeParams::nonstationary(0.1, 1.0).unwrap();
        assert!(ConeSampler::new(ModelKind::Nonstationary, &grid, &p, 0).is_err());
    }
}
