//! Dense symmetric factorization used by the exact Gaussian samplers.
//!
//! Matrices are stored as packed lower triangles, row by row: row `i` starts at
//! `i * (i + 1) / 2` and holds `i + 1` entries.

use crate::error::{CascadeError, Result};

const ROW_BLOCK: usize = 48;

/// Packed lower triangle of a symmetric `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PackedLower {
    n: usize,
    data: Vec<f64>,
}

#[inline]
fn row_start(i: usize) -> usize {
    i * (i + 1) / 2
}

impl PackedLower {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(row_start(n));
        for i in 0..n {
            for j in 0..=i {
                data.push(f(i, j));
            }
        }
        PackedLower { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        self.data[row_start(i) + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[row_start(i)..row_start(i + 1)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    fn diag_range(&self) -> (f64, f64) {
        (0..self.n).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
            let d = self.get(i, i);
            (lo.min(d), hi.max(d))
        })
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().min(b.len());
    let (a, b) = (&a[..len], &b[..len]);
    let mut acc = [0.0f64; 4];
    let chunks = len / 4;
    for c in 0..chunks {
        let k = 4 * c;
        acc[0] += a[k] * b[k];
        acc[1] += a[k + 1] * b[k + 1];
        acc[2] += a[k + 2] * b[k + 2];
        acc[3] += a[k + 3] * b[k + 3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for k in 4 * chunks..len {
        s += a[k] * b[k];
    }
    s
}

/// Four dot products against a shared right-hand side; `b` is loaded once.
#[inline]
fn dot4(rows: [&[f64]; 4], b: &[f64]) -> [f64; 4] {
    let len = b.len();
    let [r0, r1, r2, r3] = rows;
    let (r0, r1, r2, r3) = (&r0[..len], &r1[..len], &r2[..len], &r3[..len]);
    let mut acc = [[0.0f64; 2]; 4];
    let pairs = len / 2;
    for c in 0..pairs {
        let k = 2 * c;
        let (b0, b1) = (b[k], b[k + 1]);
        acc[0][0] += r0[k] * b0;
        acc[0][1] += r0[k + 1] * b1;
        acc[1][0] += r1[k] * b0;
        acc[1][1] += r1[k + 1] * b1;
        acc[2][0] += r2[k] * b0;
        acc[2][1] += r2[k + 1] * b1;
        acc[3][0] += r3[k] * b0;
        acc[3][1] += r3[k + 1] * b1;
    }
    let mut out = [
        acc[0][0] + acc[0][1],
        acc[1][0] + acc[1][1],
        acc[2][0] + acc[2][1],
        acc[3][0] + acc[3][1],
    ];
    if len % 2 == 1 {
        let k = len - 1;
        out[0] += r0[k] * b[k];
        out[1] += r1[k] * b[k];
        out[2] += r2[k] * b[k];
        out[3] += r3[k] * b[k];
    }
    out
}

/// Lower Cholesky factor `L` with `L L^T = A + jitter * I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    factor: PackedLower,
    jitter: f64,
}

impl Cholesky {
    /// Factorize without any diagonal shift. Returns the failing pivot on error.
    pub fn factorize_exact(a: &PackedLower) -> std::result::Result<Self, usize> {
        Self::factorize_shifted(a, 0.0)
    }

    fn factorize_shifted(a: &PackedLower, shift: f64) -> std::result::Result<Self, usize> {
        let n = a.n;
        let mut l = PackedLower {
            n,
            data: vec![0.0; a.data.len()],
        };
        let mut b0 = 0;
        while b0 < n {
            let b1 = (b0 + ROW_BLOCK).min(n);
            // Columns left of the block: each earlier row is streamed once per block.
            for j in 0..b0 {
                let (head, tail) = l.data.split_at_mut(row_start(b0));
                let lj = &head[row_start(j)..row_start(j) + j + 1];
                let ljj = lj[j];
                let mut i = b0;
                while i + 4 <= b1 {
                    let sums = {
                        let off = |r: usize| row_start(r) - row_start(b0);
                        let rows = [
                            &tail[off(i)..off(i) + j],
                            &tail[off(i + 1)..off(i + 1) + j],
                            &tail[off(i + 2)..off(i + 2) + j],
                            &tail[off(i + 3)..off(i + 3) + j],
                        ];
                        dot4(rows, &lj[..j])
                    };
                    for (r, s) in sums.iter().enumerate() {
                        let idx = row_start(i + r) - row_start(b0) + j;
                        tail[idx] = (a.data[row_start(i + r) + j] - s) / ljj;
                    }
                    i += 4;
                }
                for i in i..b1 {
                    let off = row_start(i) - row_start(b0);
                    let li = &mut tail[off..off + i + 1];
                    let s = a.data[row_start(i) + j] - dot(&li[..j], &lj[..j]);
                    li[j] = s / ljj;
                }
            }
            // Triangle inside the block.
            for i in b0..b1 {
                for j in b0..=i {
                    let (head, tail) = l.data.split_at_mut(row_start(i));
                    let li = &mut tail[..i + 1];
                    let sum = if j == i {
                        dot(&li[..j], &li[..j])
                    } else {
                        dot(&li[..j], &head[row_start(j)..row_start(j) + j])
                    };
                    let aij = a.data[row_start(i) + j];
                    if j == i {
                        let d = aij + shift - sum;
                        if !(d > 0.0) || !d.is_finite() {
                            return Err(i);
                        }
                        li[i] = d.sqrt();
                    } else {
                        li[j] = (aij - sum) / head[row_start(j) + j];
                    }
                }
            }
            b0 = b1;
        }
        Ok(Cholesky {
            factor: l,
            jitter: shift,
        })
    }

    /// Factorize `A + jitter * I`, with jitter starting at `1e-12 * trace / n`
    /// and escalating by 10x up to `1e-6 * trace / n`.
    pub fn factorize_with_jitter(a: &PackedLower) -> Result<Self> {
        let n = a.n;
        if n == 0 {
            return Ok(Cholesky {
                factor: a.clone(),
                jitter: 0.0,
            });
        }
        let scale = a.trace() / n as f64;
        let mut rel = 1e-12;
        let mut last_pivot = 0;
        while rel <= 1e-6 * (1.0 + 1e-9) {
            match Self::factorize_shifted(a, rel * scale) {
                Ok(c) => return Ok(c),
                Err(p) => last_pivot = p,
            }
            rel *= 10.0;
        }
        let (min_diag, max_diag) = a.diag_range();
        Err(CascadeError::Synthesis {
            n,
            pivot: last_pivot,
            jitter: 1e-6 * scale,
            min_diag,
            max_diag,
        })
    }

    pub fn dim(&self) -> usize {
        self.factor.n
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn factor(&self) -> &PackedLower {
        &self.factor
    }

    /// `out = L z`.
    pub fn mul_lower(&self, z: &[f64], out: &mut [f64]) {
        let n = self.factor.n;
        assert_eq!(z.len(), n);
        assert_eq!(out.len(), n);
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.factor.row(i), &z[..=i]);
        }
    }
}

/// Symmetric eigenvalues by cyclic Jacobi rotations. Test and diagnostic use
/// only; cost is O(n^3) per sweep.
pub fn symmetric_eigenvalues(a: &PackedLower) -> Vec<f64> {
    let n = a.n;
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = a.get(i, j);
        }
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum();
        let total: f64 = m.iter().map(|x| x * x).sum();
        if off <= 1e-30 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}
