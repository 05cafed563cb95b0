//! Noise, boundary Fourier transforms and the cut-off recovery of `|f^|`.

use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fdm::GridSpec;
use crate::kernel::{compute_r, FractionalOrders, HurstIndex, QuadratureSpec};
use crate::rng::{substream, Stage};

/// Multiplicative noise level and the seed its draws are keyed by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisySpec {
    pub epsilon: f64,
    pub seed: u64,
}

impl NoisySpec {
    pub fn new(epsilon: f64, seed: u64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::invalid("epsilon", format!("{epsilon} must be >= 0")));
        }
        Ok(Self { epsilon, seed })
    }
}

/// `u_n (1 + eps * eta_n)` with `eta_n ~ U[-1, 1]` drawn from the noise
/// substream of (`mask`, `path`).
pub fn add_noise(trace: &[f64], spec: &NoisySpec, mask: u64, path: u64) -> Vec<f64> {
    if spec.epsilon == 0.0 {
        return trace.to_vec();
    }
    let mut rng = substream(spec.seed, Stage::Noise, mask, path);
    trace
        .iter()
        .map(|&u| u * (1.0 + spec.epsilon * rng.random_range(-1.0..=1.0)))
        .collect()
}

/// `tau * sum_{n=0}^{N} trace[n] e^{-i omega t_n}`.
pub fn dft_boundary(trace: &[f64], grid: &GridSpec, omega: f64) -> Result<Complex64> {
    if trace.len() != grid.steps + 1 {
        return Err(Error::LengthMismatch {
            what: "trace",
            expected: grid.steps + 1,
            found: trace.len(),
        });
    }
    let tau = grid.tau();
    Ok(trace
        .iter()
        .enumerate()
        .map(|(n, &u)| u * Complex64::from_polar(tau, -omega * grid.time(n)))
        .sum())
}

/// Equally spaced frequencies `0..=W`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    cutoff: f64,
    nodes: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(cutoff: f64, count: usize) -> Result<Self> {
        if !(cutoff > 0.0 && cutoff.is_finite()) {
            return Err(Error::invalid("W", "cut-off must be positive"));
        }
        if count < 2 {
            return Err(Error::invalid("N_omega", "at least two frequencies are required"));
        }
        let step = cutoff / (count - 1) as f64;
        let mut nodes: Vec<f64> = (0..count).map(|k| k as f64 * step).collect();
        nodes[count - 1] = cutoff;
        Ok(Self { cutoff, nodes })
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Precomputed `tau e^{-i omega_k t_n}` for repeated transforms on one grid.
#[derive(Debug, Clone)]
pub struct DftTable {
    rows: Vec<Vec<Complex64>>,
}

impl DftTable {
    pub fn new(grid: &GridSpec, frequencies: &[f64]) -> Self {
        let tau = grid.tau();
        let rows = frequencies
            .iter()
            .map(|&w| {
                (0..=grid.steps)
                    .map(|n| Complex64::from_polar(tau, -w * grid.time(n)))
                    .collect()
            })
            .collect();
        Self { rows }
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.rows
    }

    pub fn apply(&self, trace: &[f64]) -> Vec<Complex64> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(trace).map(|(e, &u)| e * u).sum())
            .collect()
    }
}

/// Unbiased complex sample variance `sum |z - mean|^2 / (P - 1)`.
pub fn ensemble_variance(samples: &[Complex64]) -> Result<f64> {
    let p = samples.len();
    if p < 2 {
        return Err(Error::invalid("P", "variance needs at least two samples"));
    }
    let mean: Complex64 = samples.iter().sum::<Complex64>() / p as f64;
    Ok(samples.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / (p - 1) as f64)
}

/// `sqrt(V / R)` per frequency.
pub fn recover_fhat_abs(variances: &[f64], r_values: &[f64]) -> Result<Vec<f64>> {
    if variances.len() != r_values.len() {
        return Err(Error::LengthMismatch {
            what: "kernel values",
            expected: variances.len(),
            found: r_values.len(),
        });
    }
    variances
        .iter()
        .zip(r_values)
        .enumerate()
        .map(|(k, (&v, &r))| {
            if !(r > 0.0) {
                return Err(Error::invalid(
                    "r_values",
                    format!("kernel at node {k} is {r}, expected > 0"),
                ));
            }
            if !(v >= 0.0) {
                return Err(Error::invalid("variance", format!("{v} is negative")));
            }
            Ok((v / r).sqrt())
        })
        .collect()
}

/// `R(omega)` on every node, computed in parallel.
pub fn kernel_values(
    orders: &FractionalOrders,
    hurst: HurstIndex,
    quad: &QuadratureSpec,
    frequencies: &[f64],
) -> Result<Vec<f64>> {
    frequencies
        .par_iter()
        .map(|&w| {
            let r = compute_r(orders, w, hurst, quad)?;
            if r > 0.0 {
                Ok(r)
            } else {
                Err(Error::NonPositiveKernel { omega: w, value: r })
            }
        })
        .collect()
}

/// Recovered magnitudes, one row per mask and one column per frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaselessModes {
    pub frequencies: Vec<f64>,
    pub magnitudes: Vec<Vec<f64>>,
}

impl PhaselessModes {
    pub fn new(frequencies: Vec<f64>, magnitudes: Vec<Vec<f64>>) -> Result<Self> {
        for row in &magnitudes {
            if row.len() != frequencies.len() {
                return Err(Error::LengthMismatch {
                    what: "magnitude row",
                    expected: frequencies.len(),
                    found: row.len(),
                });
            }
            if row.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::invalid("magnitudes", "entries must be finite and >= 0"));
            }
        }
        Ok(Self {
            frequencies,
            magnitudes,
        })
    }

    pub fn masks(&self) -> usize {
        self.magnitudes.len()
    }

    /// Columns `omega,fhat_abs_recovered[,fhat_abs_true]` for mask `mask`.
    pub fn write_csv<W: Write>(
        &self,
        mut out: W,
        mask: usize,
        truth: Option<&[f64]>,
    ) -> std::io::Result<()> {
        match truth {
            Some(_) => writeln!(out, "omega,fhat_abs_recovered,fhat_abs_true")?,
            None => writeln!(out, "omega,fhat_abs_recovered")?,
        }
        for (k, w) in self.frequencies.iter().enumerate() {
            let rec = self.magnitudes[mask][k];
            match truth {
                Some(t) => writeln!(out, "{w:?},{rec:?},{:?}", t[k])?,
                None => writeln!(out, "{w:?},{rec:?}")?,
            }
        }
        Ok(())
    }
}
