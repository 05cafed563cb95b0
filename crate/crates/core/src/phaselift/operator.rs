use nalgebra::DMatrix;
use num_complex::Complex64;

use super::masks::MaskSet;
use crate::error::{Error, Result};

/// Linear map `X -> (a_{i,k}^* X a_{i,k})` over masks `i` and frequencies
/// `k`, restricted to real symmetric `X` on a uniform time grid.
///
/// Then `a^* X a = sum_{n,n'} m_n m_n' X_{nn'} tau^2 cos(omega tau (n - n'))`,
/// so only the sums of `(m m^T) o X` along each diagonal are needed.
#[derive(Debug, Clone)]
pub struct MeasurementOperator {
    masks: MaskSet,
    frequencies: Vec<f64>,
    tau: f64,
    /// `cos_table[k][d] = tau^2 cos(omega_k tau d)`
    cos_table: Vec<Vec<f64>>,
}

impl MeasurementOperator {
    pub fn new(masks: MaskSet, frequencies: Vec<f64>, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::invalid("tau", "time step must be positive"));
        }
        if frequencies.is_empty() {
            return Err(Error::invalid("frequencies", "need at least one frequency"));
        }
        let len = masks.signal_len();
        let cos_table = frequencies
            .iter()
            .map(|&w| (0..len).map(|d| tau * tau * (w * tau * d as f64).cos()).collect())
            .collect();
        Ok(Self {
            masks,
            frequencies,
            tau,
            cos_table,
        })
    }

    pub fn masks(&self) -> &MaskSet {
        &self.masks
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Signal length `N + 1`.
    pub fn signal_len(&self) -> usize {
        self.masks.signal_len()
    }

    /// Number of measurements, ordered mask-major.
    pub fn len(&self) -> usize {
        self.masks.len() * self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `a_{i,k}` written out.
    pub fn vector(&self, mask: usize, freq: usize) -> Vec<Complex64> {
        let w = self.frequencies[freq];
        self.masks
            .get(mask)
            .iter()
            .enumerate()
            .map(|(n, &m)| Complex64::from_polar(self.tau * m, -w * self.tau * n as f64))
            .collect()
    }

    fn check_dim(&self, x: &DMatrix<f64>) -> Result<()> {
        let n = self.signal_len();
        if x.nrows() != n || x.ncols() != n {
            return Err(Error::LengthMismatch {
                what: "lifted matrix dimension",
                expected: n,
                found: x.nrows().max(x.ncols()),
            });
        }
        Ok(())
    }

    /// `A(X)`; only the lower triangle of `X` is read.
    pub fn apply(&self, x: &DMatrix<f64>) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let n = self.signal_len();
        let mut out = Vec::with_capacity(self.len());
        let mut diag = vec![0.0; n];
        for m in self.masks.iter() {
            for (d, s) in diag.iter_mut().enumerate() {
                let mut acc = 0.0;
                for col in 0..n - d {
                    let row = col + d;
                    acc += m[row] * m[col] * x[(row, col)];
                }
                *s = if d == 0 { acc } else { 2.0 * acc };
            }
            for table in &self.cos_table {
                out.push(table.iter().zip(&diag).map(|(c, s)| c * s).sum());
            }
        }
        Ok(out)
    }

    /// `A^*(y) = sum_{i,k} y_{ik} Re(a a^*)`.
    pub fn adjoint(&self, y: &[f64]) -> Result<DMatrix<f64>> {
        if y.len() != self.len() {
            return Err(Error::LengthMismatch {
                what: "measurement vector",
                expected: self.len(),
                found: y.len(),
            });
        }
        let n = self.signal_len();
        let kf = self.frequencies.len();
        let mut out = DMatrix::zeros(n, n);
        let mut g = vec![0.0; n];
        for (i, m) in self.masks.iter().enumerate() {
            let weights = &y[i * kf..(i + 1) * kf];
            for (d, gd) in g.iter_mut().enumerate() {
                *gd = weights
                    .iter()
                    .zip(&self.cos_table)
                    .map(|(w, t)| w * t[d])
                    .sum();
            }
            for col in 0..n {
                if m[col] == 0.0 {
                    continue;
                }
                for row in col..n {
                    if m[row] != 0.0 {
                        out[(row, col)] += g[row - col];
                    }
                }
            }
        }
        for col in 0..n {
            for row in col + 1..n {
                out[(col, row)] = out[(row, col)];
            }
        }
        Ok(out)
    }

    /// Estimate of `||A||^2` (largest eigenvalue of `A^* A`) by power
    /// iteration.
    pub fn norm_sq_estimate(&self, iterations: usize) -> Result<f64> {
        let n = self.signal_len();
        let mut x = DMatrix::from_fn(n, n, |r, c| 1.0 + 0.01 * ((r * 7 + c * 7) % 5) as f64);
        x = (&x + x.transpose()) * 0.5;
        let mut estimate = 0.0;
        for _ in 0..iterations.max(1) {
            let norm = x.norm();
            if norm == 0.0 {
                return Ok(0.0);
            }
            x /= norm;
            let next = self.adjoint(&self.apply(&x)?)?;
            estimate = next.norm();
            x = next;
        }
        Ok(estimate)
    }
}

/// `|<a_{i,k}, f>|` as a `masks x frequencies` table.
pub fn forward_magnitudes(op: &MeasurementOperator, f: &[f64]) -> Result<Vec<Vec<f64>>> {
    if f.len() != op.signal_len() {
        return Err(Error::LengthMismatch {
            what: "signal",
            expected: op.signal_len(),
            found: f.len(),
        });
    }
    let tau = op.tau();
    let phases: Vec<Vec<Complex64>> = op
        .frequencies()
        .iter()
        .map(|&w| {
            (0..f.len())
                .map(|n| Complex64::from_polar(tau, -w * tau * n as f64))
                .collect()
        })
        .collect();
    Ok(op
        .masks()
        .iter()
        .map(|m| {
            phases
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(m.iter().zip(f))
                        .map(|(e, (mi, fi))| e * (mi * fi))
                        .sum::<Complex64>()
                        .norm()
                })
                .collect()
        })
        .collect())
}
